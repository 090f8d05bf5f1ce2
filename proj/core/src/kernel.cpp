#include "mpmf/kernel.hpp"

#include "mpmf/error.hpp"
#include "mpmf/format.hpp"
#include "mpmf/linear_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <vector>

namespace mpmf {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DomainError("bad kernel " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& x, std::optional<std::size_t> cap,
                          std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (!cap || *cap >= n) return x;
  if (*cap == 0) throw DomainError("subsample size must be positive");
  std::vector<std::size_t> idx = seeded_permutation(n, seed);
  idx.resize(*cap);
  std::sort(idx.begin(), idx.end());
  Eigen::MatrixXd out(static_cast<Eigen::Index>(*cap), x.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(idx[i]));
  }
  return out;
}

}  // namespace

KernelSpec KernelSpec::linear() {
  KernelSpec s;
  s.kind = KernelKind::Linear;
  return s;
}

KernelSpec KernelSpec::rbf(double gamma) {
  KernelSpec s;
  s.kind = KernelKind::Rbf;
  s.gamma = gamma;
  s.validate();
  return s;
}

KernelSpec KernelSpec::polynomial(int degree, double coef0) {
  KernelSpec s;
  s.kind = KernelKind::Polynomial;
  s.degree = degree;
  s.coef0 = coef0;
  s.validate();
  return s;
}

void KernelSpec::validate() const {
  if (kind == KernelKind::Rbf && !(gamma > 0.0 && std::isfinite(gamma))) {
    throw DomainError("rbf gamma must be positive");
  }
  if (kind == KernelKind::Polynomial && (degree < 1 || !std::isfinite(coef0))) {
    throw DomainError("polynomial degree must be positive");
  }
}

double KernelSpec::operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  switch (kind) {
    case KernelKind::Linear: return x.dot(y);
    case KernelKind::Rbf: return std::exp(-gamma * (x - y).squaredNorm());
    case KernelKind::Polynomial: return std::pow(x.dot(y) + coef0, degree);
  }
  return 0.0;
}

std::string KernelSpec::name() const {
  switch (kind) {
    case KernelKind::Linear: return "linear";
    case KernelKind::Rbf: return "rbf:" + format_double(gamma);
    case KernelKind::Polynomial:
      return "poly:" + std::to_string(degree) + ":" + format_double(coef0);
  }
  return "?";
}

KernelSpec parse_kernel(std::string_view text, double default_gamma) {
  const std::string s = lower(text);
  std::vector<std::string_view> parts;
  std::string_view rest = s;
  while (true) {
    const auto colon = rest.find(':');
    parts.push_back(rest.substr(0, colon));
    if (colon == std::string_view::npos) break;
    rest.remove_prefix(colon + 1);
  }
  if (parts[0] == "linear" && parts.size() == 1) return KernelSpec::linear();
  if (parts[0] == "rbf" && parts.size() <= 2) {
    return KernelSpec::rbf(parts.size() == 2 ? parse_number<double>(parts[1], "gamma")
                                             : default_gamma);
  }
  if ((parts[0] == "poly" || parts[0] == "polynomial") && parts.size() <= 3) {
    const int degree = parts.size() >= 2 ? parse_number<int>(parts[1], "degree") : 2;
    const double coef0 = parts.size() == 3 ? parse_number<double>(parts[2], "coef0") : 1.0;
    return KernelSpec::polynomial(degree, coef0);
  }
  throw DomainError("unknown kernel '" + std::string(text) + "'");
}

GramBlocks gram(const KernelSpec& spec, const Eigen::MatrixXd& x_pos,
                const Eigen::MatrixXd& x_neg) {
  spec.validate();
  if (x_pos.rows() == 0 || x_neg.rows() == 0) throw DataError("gram: a class is empty");
  if (x_pos.cols() != x_neg.cols()) throw DimensionError("gram: classes differ in dimension");
  const Eigen::Index np = x_pos.rows();
  const Eigen::Index n = np + x_neg.rows();
  Eigen::MatrixXd all(n, x_pos.cols());
  all << x_pos, x_neg;
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd xi = all.row(i).transpose();
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = spec(xi, all.row(j).transpose());
      if (!std::isfinite(v)) throw DataError("gram: kernel value is not finite");
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return {k.topRows(np), k.bottomRows(n - np)};
}

CenteredFactors centered_factors(const GramBlocks& blocks) {
  if (blocks.k_p.cols() != blocks.k_n.cols()) {
    throw DimensionError("centered_factors: Gram blocks differ in width");
  }
  CenteredFactors f;
  f.l_p = blocks.k_p.colwise().mean().transpose();
  f.l_n = blocks.k_n.colwise().mean().transpose();
  f.L_p = (blocks.k_p.rowwise() - f.l_p.transpose()) /
          std::sqrt(static_cast<double>(blocks.k_p.rows()));
  f.L_n = (blocks.k_n.rowwise() - f.l_n.transpose()) /
          std::sqrt(static_cast<double>(blocks.k_n.rows()));
  return f;
}

double default_gamma(const Eigen::MatrixXd& x, std::uint64_t seed) {
  const Eigen::Index n = x.rows();
  if (n < 2) throw DataError("default_gamma: need at least two rows");
  std::vector<double> d;
  const auto total = static_cast<unsigned long long>(n) * static_cast<unsigned long long>(n - 1) / 2;
  if (total <= 1000) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) d.push_back((x.row(i) - x.row(j)).squaredNorm());
    }
  } else {
    std::mt19937_64 rng(seed);
    const auto un = static_cast<std::uint64_t>(n);
    auto draw = [&] {
      // rejection sampling keeps the draw platform independent
      const std::uint64_t limit = rng.max() - rng.max() % un;
      std::uint64_t r;
      do r = rng(); while (r >= limit);
      return static_cast<Eigen::Index>(r % un);
    };
    while (d.size() < 1000) {
      const Eigen::Index i = draw();
      const Eigen::Index j = draw();
      if (i != j) d.push_back((x.row(i) - x.row(j)).squaredNorm());
    }
  }
  const auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  std::nth_element(d.begin(), mid, d.end());
  double median = *mid;
  if (d.size() % 2 == 0) {
    median = (median + *std::max_element(d.begin(), mid)) / 2.0;
  }
  if (!(median > 0.0)) throw DataError("default_gamma: rows coincide; pass gamma explicitly");
  return 1.0 / median;
}

double KernelModel::score(const Eigen::VectorXd& x) const {
  if (x.size() != support_pos.cols()) {
    throw DimensionError("sample dimension does not match the kernel model");
  }
  double s = 0.0;
  const Eigen::Index np = support_pos.rows();
  for (Eigen::Index i = 0; i < np; ++i) s += dual_weights(i) * spec(support_pos.row(i).transpose(), x);
  for (Eigen::Index i = 0; i < support_neg.rows(); ++i) {
    s += dual_weights(np + i) * spec(support_neg.row(i).transpose(), x);
  }
  return s - bias;
}

int KernelModel::predict(const Eigen::VectorXd& x) const { return score(x) > 0.0 ? 1 : -1; }

Eigen::VectorXd KernelModel::scores(const Eigen::MatrixXd& X) const {
  if (X.cols() != support_pos.cols()) {
    throw DimensionError("data dimension does not match the kernel model");
  }
  Eigen::VectorXd out(X.rows());
  for (Eigen::Index r = 0; r < X.rows(); ++r) out(r) = score(X.row(r).transpose());
  return out;
}

void KernelModel::validate() const {
  spec.validate();
  if (dual_weights.size() != support_pos.rows() + support_neg.rows()) {
    throw DimensionError("dual weights do not match the support counts");
  }
  if (support_pos.cols() != support_neg.cols()) {
    throw DimensionError("support sets differ in dimension");
  }
  if (std::abs(dual_weights.norm() - 1.0) > 1e-10) throw DataError("dual weights are not unit norm");
}

KernelFit solve_kernel(const KernelSpec& spec, const BinaryDataset& train,
                       const MeasureSpec& measure, const SolverOptions& options,
                       std::optional<std::size_t> subsample, std::uint64_t seed, double jitter) {
  if (train.n_pos == 0 || train.n_neg == 0) throw DataError("training data needs both classes");
  Eigen::MatrixXd x_pos = take_rows(train.class_rows(1), subsample, seed);
  Eigen::MatrixXd x_neg = take_rows(train.class_rows(-1), subsample, seed + 1);

  const CenteredFactors f = centered_factors(gram(spec, x_pos, x_neg));
  MomentProblem problem;
  problem.mean_gap = f.l_p - f.l_n;
  if (problem.mean_gap.norm() <= 1e-12) {
    throw SolverError("minimal probability decision problem has no solution (l_p = l_n)");
  }
  problem.form_p = QuadraticForm::factored(f.L_p, jitter);
  problem.form_n = QuadraticForm::factored(f.L_n, jitter);
  problem.p = static_cast<double>(train.n_pos) / static_cast<double>(train.n_pos + train.n_neg);
  problem.spec = measure;

  KernelFit fit;
  fit.result = solve(problem, options);
  fit.model.spec = spec;
  fit.model.dual_weights = fit.result.w;
  fit.model.bias = mpmf::bias(f.l_p, problem.form_p, fit.result.w, fit.result.alpha_p);
  fit.model.support_pos = std::move(x_pos);
  fit.model.support_neg = std::move(x_neg);
  return fit;
}

}  // namespace mpmf
