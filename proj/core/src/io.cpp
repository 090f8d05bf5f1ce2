#include "mpmf/io.hpp"

#include "mpmf/error.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace mpmf {
namespace {

using nlohmann::json;

json vec_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json mat_json(const Eigen::MatrixXd& m) {
  json a = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(vec_json(m.row(r).transpose()));
  return a;
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw DataError(std::string("missing field '") + key + "'");
  return j.at(key);
}

double num(const json& j, const char* what) {
  if (!j.is_number()) throw DataError(std::string("field '") + what + "' must be a number");
  return j.get<double>();
}

Eigen::VectorXd vec_from(const json& j, const char* what) {
  if (!j.is_array()) throw DataError(std::string("field '") + what + "' must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = num(j[i], what);
  return v;
}

Eigen::MatrixXd mat_from(const json& j, const char* what, Eigen::Index cols_if_empty = 0) {
  if (!j.is_array()) throw DataError(std::string("field '") + what + "' must be an array of rows");
  if (j.empty()) return Eigen::MatrixXd(0, cols_if_empty);
  const auto cols = static_cast<Eigen::Index>(vec_from(j[0], what).size());
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Eigen::VectorXd row = vec_from(j[r], what);
    if (row.size() != cols) throw DataError(std::string("field '") + what + "' is ragged");
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

json parse(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw DataError(std::string("invalid JSON: ") + e.what());
  }
}

std::string dump(const json& j, int indent) {
  std::string s = j.dump(indent);
  s.push_back('\n');
  return s;
}

json kernel_json(const KernelSpec& spec) {
  json k;
  switch (spec.kind) {
    case KernelKind::Linear: k["kind"] = "linear"; break;
    case KernelKind::Rbf:
      k["kind"] = "rbf";
      k["gamma"] = spec.gamma;
      break;
    case KernelKind::Polynomial:
      k["kind"] = "polynomial";
      k["degree"] = spec.degree;
      k["coef0"] = spec.coef0;
      break;
  }
  return k;
}

KernelSpec kernel_from(const json& k) {
  const json& kind = field(k, "kind");
  if (kind == "linear") return KernelSpec::linear();
  if (kind == "rbf") return KernelSpec::rbf(num(field(k, "gamma"), "gamma"));
  if (kind == "polynomial") {
    return KernelSpec::polynomial(static_cast<int>(num(field(k, "degree"), "degree")),
                                  num(field(k, "coef0"), "coef0"));
  }
  throw DataError("unknown kernel kind in model file");
}

}  // namespace

std::string moments_to_json(const ClassMoments& m) {
  json j;
  j["mu_p"] = vec_json(m.mu_p);
  j["sigma_p"] = mat_json(m.sigma_p);
  j["mu_n"] = vec_json(m.mu_n);
  j["sigma_n"] = mat_json(m.sigma_n);
  j["p"] = m.p;
  return dump(j, 2);
}

ClassMoments moments_from_json(std::string_view text) {
  const json j = parse(text);
  ClassMoments m;
  m.mu_p = vec_from(field(j, "mu_p"), "mu_p");
  m.sigma_p = mat_from(field(j, "sigma_p"), "sigma_p");
  m.mu_n = vec_from(field(j, "mu_n"), "mu_n");
  m.sigma_n = mat_from(field(j, "sigma_n"), "sigma_n");
  m.p = num(field(j, "p"), "p");
  m.validate();
  return m;
}

Eigen::Index StoredModel::feature_dim() const {
  return type == ModelType::Kernel ? kernel.support_pos.cols() : linear.w.size();
}

Eigen::VectorXd StoredModel::scores(const Eigen::MatrixXd& X) const {
  return type == ModelType::Kernel ? kernel.scores(X) : linear.scores(X);
}

std::string model_to_json(const StoredModel& model, int indent) {
  json j;
  j["measure"] = model.measure.name();
  switch (model.type) {
    case ModelType::Linear:
    case ModelType::Mpm:
      j["type"] = model.type == ModelType::Linear ? "linear" : "mpm";
      j["w"] = vec_json(model.linear.w);
      j["b"] = model.linear.b;
      if (model.type == ModelType::Mpm) j["alpha_star"] = model.alpha_star;
      break;
    case ModelType::Kernel:
      j["type"] = "kernel";
      j["kernel"] = kernel_json(model.kernel.spec);
      j["dual_weights"] = vec_json(model.kernel.dual_weights);
      j["b"] = model.kernel.bias;
      j["support_pos"] = mat_json(model.kernel.support_pos);
      j["support_neg"] = mat_json(model.kernel.support_neg);
      break;
  }
  return dump(j, indent);
}

StoredModel model_from_json(std::string_view text) {
  const json j = parse(text);
  StoredModel m;
  const json& type = field(j, "type");
  try {
    m.measure = parse_measure(field(j, "measure").get<std::string>());
  } catch (const json::exception&) {
    throw DataError("field 'measure' must be a string");
  }
  if (type == "linear" || type == "mpm") {
    m.type = type == "linear" ? ModelType::Linear : ModelType::Mpm;
    m.linear.w = vec_from(field(j, "w"), "w");
    m.linear.b = num(field(j, "b"), "b");
    if (m.type == ModelType::Mpm) m.alpha_star = num(field(j, "alpha_star"), "alpha_star");
  } else if (type == "kernel") {
    m.type = ModelType::Kernel;
    m.kernel.spec = kernel_from(field(j, "kernel"));
    m.kernel.dual_weights = vec_from(field(j, "dual_weights"), "dual_weights");
    m.kernel.bias = num(field(j, "b"), "b");
    m.kernel.support_pos = mat_from(field(j, "support_pos"), "support_pos");
    m.kernel.support_neg =
        mat_from(field(j, "support_neg"), "support_neg", m.kernel.support_pos.cols());
    m.kernel.validate();
  } else {
    throw DataError("unknown model type");
  }
  return m;
}

std::string result_to_json(const SolverResult& r, const MeasureSpec& measure, int indent) {
  json j;
  j["measure"] = measure.name();
  j["w"] = vec_json(r.w);
  j["alpha_p"] = r.alpha_p;
  j["alpha_n"] = r.alpha_n;
  j["q_value"] = r.q_value;
  j["rounds"] = r.trace.rounds.size();
  j["result_round"] = r.result_round;
  j["converged"] = r.converged;
  j["stop_reason"] = to_string(r.reason);
  j["inner_capped"] = r.inner_capped;
  return dump(j, indent);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out.flush()) throw DataError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw DataError("cannot replace '" + path.string() + "'");
  }
}

}  // namespace mpmf
