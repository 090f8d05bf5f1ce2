#include "cli/cli.hpp"

#include <mpmf/mpmf.hpp>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <sstream>

namespace mpmf::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto log = std::make_shared<spdlog::logger>("mpmf", sink);
  log->set_pattern("[%l] %v");
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("MPMF_LOG")) {
    level = spdlog::level::from_str(env);
    // from_str maps unknown names to off
    if (level == spdlog::level::off && std::string_view(env) != "off") level = spdlog::level::warn;
  }
  log->set_level(level);
  return log;
}

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void require_file(const std::string& path, const char* flag) {
  if (path.empty()) throw UsageError(std::string(flag) + " is required");
  if (!fs::is_regular_file(path)) throw UsageError(std::string(flag) + ": no such file '" + path + "'");
}

Dataset load_data(const RunConfig& cfg, const std::string& path) {
  std::string format = cfg.format;
  if (format == "auto") format = fs::path(path).extension() == ".csv" ? "csv" : "libsvm";
  if (format == "csv") return load_csv(path, cfg.label_column);
  return load_sparse(path);
}

MeasureSpec resolve_measure(const std::string& text, double beta) {
  try {
    return parse_measure(text.empty() ? "f1" : text, beta);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

SolverOptions solver_options(const RunConfig& cfg, SolverOptions base = {}) {
  if (cfg.grid_points) {
    base.grid_points = *cfg.grid_points;
    base.grid_step = 0.0;
  }
  if (cfg.grid_step) base.grid_step = *cfg.grid_step;
  if (cfg.max_rounds) base.max_rounds = *cfg.max_rounds;
  try {
    base.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  return base;
}

std::optional<KernelSpec> resolve_kernel(const RunConfig& cfg) {
  if (cfg.kernel == "none") return std::nullopt;
  try {
    KernelSpec spec = parse_kernel(cfg.kernel, 1.0);
    if (cfg.gamma) {
      if (spec.kind != KernelKind::Rbf) throw UsageError("--gamma applies to the rbf kernel only");
      spec = KernelSpec::rbf(*cfg.gamma);
    }
    return spec;
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

bool kernel_needs_gamma(const RunConfig& cfg) {
  return !cfg.gamma && (cfg.kernel == "rbf" || cfg.kernel == "RBF");
}

std::string csv_cell(double v) { return format_double(v); }

json measures_json(const Rates& rates, double p, const MeasureSpec& primary) {
  json j = json::object();
  for (auto kind : {MeasureKind::AR, MeasureKind::AM, MeasureKind::QM, MeasureKind::HM,
                    MeasureKind::GM, MeasureKind::GTPPR, MeasureKind::JAC}) {
    j[MeasureSpec::of(kind).name()] = p_measure(MeasureSpec::of(kind), rates, p).value;
  }
  j["f1"] = p_measure(MeasureSpec::fbeta(1.0), rates, p).value;
  j[primary.name()] = p_measure(primary, rates, p).value;
  return j;
}

json metrics_block(const Eigen::VectorXd& scores, const std::vector<int>& labels,
                   const MeasureSpec& spec) {
  std::vector<int> preds(labels.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    preds[i] = scores(static_cast<Eigen::Index>(i)) > 0.0 ? 1 : -1;
  }
  const Rates rates = confusion_rates(preds, labels);
  std::size_t n_pos = std::count(labels.begin(), labels.end(), 1);
  const double p = static_cast<double>(n_pos) / static_cast<double>(labels.size());
  const MeasureValue primary = p_measure(spec, rates, p);
  json j;
  j["measure"] = spec.name();
  j["value"] = primary.value;
  j["degenerate"] = primary.degenerate;
  j["p"] = p;
  j["fnr"] = rates.fnr;
  j["fpr"] = rates.fpr;
  j["tp"] = rates.counts->tp;
  j["fp"] = rates.counts->fp;
  j["tn"] = rates.counts->tn;
  j["fn"] = rates.counts->fn;
  j["measures"] = measures_json(rates, p, spec);
  return j;
}

void emit(std::ostream& out, const json& summary, bool pretty) {
  if (!pretty) {
    out << summary.dump() << '\n';
    return;
  }
  for (const auto& [key, value] : summary.items()) {
    std::ostringstream cell;
    if (value.is_number_float()) {
      cell << value.get<double>();
    } else if (value.is_string()) {
      cell << value.get<std::string>();
    } else {
      cell << value.dump();
    }
    out << key << std::string(key.size() < 16 ? 16 - key.size() : 1, ' ') << cell.str() << '\n';
  }
}

fs::path out_dir(const RunConfig& cfg) {
  fs::path dir(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw UsageError("--out: cannot create directory '" + cfg.out + "'");
  return dir;
}

struct Trained {
  StoredModel model;
  std::optional<SolverResult> result;
  std::optional<MpmResult> mpm;
};

Trained train_on(const RunConfig& cfg, const BinaryDataset& train, const MeasureSpec& spec,
                 spdlog::logger& log) {
  Trained t;
  t.model.measure = spec;
  std::optional<KernelSpec> kernel = resolve_kernel(cfg);
  if (kernel) {
    if (cfg.method != "mpmf") throw UsageError("--kernel requires --method mpmf");
    if (kernel_needs_gamma(cfg)) {
      Eigen::MatrixXd all = train.features;
      kernel = KernelSpec::rbf(default_gamma(all, cfg.seed));
      log.info("rbf gamma set to {}", kernel->gamma);
    }
    std::optional<std::size_t> cap;
    if (cfg.subsample > 0) cap = cfg.subsample;
    KernelFit fit = solve_kernel(*kernel, train, spec, solver_options(cfg), cap, cfg.seed, cfg.jitter);
    t.model.type = ModelType::Kernel;
    t.model.kernel = std::move(fit.model);
    t.result = std::move(fit.result);
    return t;
  }
  ClassMoments moments = estimate_moments(train);
  if (cfg.method == "mpm") {
    t.mpm = solve_mpm(regularize(moments, cfg.jitter));
    t.model.type = ModelType::Mpm;
    t.model.measure = MeasureSpec::of(MeasureKind::AR);
    t.model.linear = t.mpm->model;
    t.model.alpha_star = t.mpm->alpha_star;
    return t;
  }
  LinearFit fit = train_linear(moments, spec, solver_options(cfg), cfg.jitter);
  t.model.linear = fit.model;
  t.result = std::move(fit.result);
  return t;
}

void check_method(const RunConfig& cfg) {
  if (cfg.method != "mpmf" && cfg.method != "mpm") throw UsageError("--method must be mpmf or mpm");
}

int positive_label_or_throw(const RunConfig& cfg) {
  if (!cfg.positive_label) throw UsageError("--positive-label is required");
  return *cfg.positive_label;
}

int cmd_train(const RunConfig& cfg, std::ostream& out, spdlog::logger& log) {
  check_method(cfg);
  const MeasureSpec spec = resolve_measure(cfg.measure, cfg.beta);
  resolve_kernel(cfg);
  if (cfg.moments.empty()) {
    require_file(cfg.data, "--data");
    positive_label_or_throw(cfg);
  } else {
    require_file(cfg.moments, "--moments");
    if (!cfg.data.empty()) throw UsageError("--moments and --data are exclusive");
    if (cfg.kernel != "none") throw UsageError("--kernel needs --data");
  }
  if (cfg.train_fraction && cfg.moments.size()) throw UsageError("--train-fraction needs --data");
  const fs::path dir = out_dir(cfg);

  const auto start = Clock::now();
  Trained t;
  json summary;
  if (!cfg.moments.empty()) {
    ClassMoments moments = moments_from_json(read_text(cfg.moments));
    t.model.measure = spec;
    if (cfg.method == "mpm") {
      t.mpm = solve_mpm(regularize(moments, cfg.jitter));
      t.model.type = ModelType::Mpm;
      t.model.measure = MeasureSpec::of(MeasureKind::AR);
      t.model.linear = t.mpm->model;
      t.model.alpha_star = t.mpm->alpha_star;
    } else {
      LinearFit fit = train_linear(moments, spec, solver_options(cfg), cfg.jitter);
      t.model.linear = fit.model;
      t.result = std::move(fit.result);
    }
  } else {
    const BinaryDataset all = binarize_one_vs_all(load_data(cfg, cfg.data), *cfg.positive_label);
    if (cfg.train_fraction) {
      auto [train, held_out] = split(all, *cfg.train_fraction, cfg.seed);
      t = train_on(cfg, train, spec, log);
      const Eigen::VectorXd s = t.model.scores(held_out.features);
      summary["test_value"] = evaluate(std::span<const double>(s.data(), static_cast<std::size_t>(s.size())),
                                       held_out.labels, t.model.measure).value;
    } else {
      t = train_on(cfg, all, spec, log);
    }
  }
  const double wall_ms = elapsed_ms(start);

  write_atomic(dir / "model.json", model_to_json(t.model, 2));
  summary["method"] = cfg.method;
  summary["measure"] = t.model.measure.name();
  if (t.result) {
    write_atomic(dir / "trace.csv", t.result->trace.to_csv());
    summary["q_value"] = t.result->q_value;
    summary["alpha_p"] = t.result->alpha_p;
    summary["alpha_n"] = t.result->alpha_n;
    summary["rounds"] = t.result->trace.rounds.size();
    summary["stop_reason"] = to_string(t.result->reason);
    if (t.result->inner_capped) log.info("inner ascent reached its step cap in some round");
  } else {
    summary["alpha_star"] = t.mpm->alpha_star;
    summary["kappa_star"] = t.mpm->kappa_star;
    summary["steps"] = t.mpm->steps;
  }
  summary["wall_ms"] = wall_ms;
  emit(out, summary, cfg.pretty);
  return kOk;
}

int cmd_predict(const RunConfig& cfg, std::ostream& out) {
  require_file(cfg.model, "--model");
  const std::string& path = cfg.test.empty() ? cfg.data : cfg.test;
  require_file(path, "--test");
  const fs::path dir = out_dir(cfg);
  const StoredModel model = model_from_json(read_text(cfg.model));
  const Dataset data = load_data(cfg, path);
  if (data.rows() > 0 && data.feature_dim() != model.feature_dim()) {
    throw DimensionError("data has " + std::to_string(data.feature_dim()) +
                         " features, model expects " + std::to_string(model.feature_dim()));
  }
  const Eigen::VectorXd s = model.scores(data.features);
  std::string csv = "score,label\n";
  std::size_t positives = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const int label = s(i) > 0.0 ? 1 : -1;
    positives += label == 1;
    csv += csv_cell(s(i)) + ',' + std::to_string(label) + '\n';
  }
  write_atomic(dir / "predictions.csv", csv);
  json summary;
  summary["rows"] = s.size();
  summary["positives"] = positives;
  emit(out, summary, cfg.pretty);
  return kOk;
}

// Padding a short test set with zeros would hide a genuine mismatch, so
// narrower data only passes when it is LIBSVM (trailing zero features are
// simply absent there).
Eigen::MatrixXd fit_width(const RunConfig& cfg, const Dataset& data, Eigen::Index width,
                          const std::string& path) {
  const bool sparse = cfg.format == "libsvm" ||
                      (cfg.format == "auto" && fs::path(path).extension() != ".csv");
  if (data.feature_dim() == width) return data.features;
  if (sparse && data.feature_dim() < width) {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(data.rows(), width);
    x.leftCols(data.feature_dim()) = data.features;
    return x;
  }
  throw DimensionError("data has " + std::to_string(data.feature_dim()) +
                       " features, model expects " + std::to_string(width));
}

int cmd_evaluate(const RunConfig& cfg, std::ostream& out, spdlog::logger& log) {
  check_method(cfg);
  require_file(cfg.test, "--test");
  const fs::path dir = out_dir(cfg);
  json report;

  if (cfg.one_vs_all) {
    require_file(cfg.data, "--data");
    const MeasureSpec spec = resolve_measure(cfg.measure, cfg.beta);
    resolve_kernel(cfg);
    const Dataset train = load_data(cfg, cfg.data);
    const Dataset test = load_data(cfg, cfg.test);
    const Eigen::Index width = std::max(train.feature_dim(), test.feature_dim());
    Dataset train_w{fit_width(cfg, train, width, cfg.data), train.labels};
    Dataset test_w{fit_width(cfg, test, width, cfg.test), test.labels};
    json classes = json::array();
    double sum = 0.0;
    for (int label : distinct_labels(train.labels)) {
      const BinaryDataset tr = binarize_one_vs_all(train_w, label);
      const BinaryDataset te = binarize_one_vs_all(test_w, label);
      Trained t = train_on(cfg, tr, spec, log);
      json entry = metrics_block(t.model.scores(te.features), te.labels, t.model.measure);
      entry["label"] = label;
      sum += entry["value"].get<double>();
      classes.push_back(std::move(entry));
    }
    report["classes"] = classes;
    report["macro"] = sum / static_cast<double>(classes.size());
    write_atomic(dir / "metrics.json", report.dump(2) + "\n");
    json summary;
    summary["classes"] = classes.size();
    summary["macro"] = report["macro"];
    summary["measure"] = spec.name();
    emit(out, summary, cfg.pretty);
    return kOk;
  }

  require_file(cfg.model, "--model");
  const int positive = positive_label_or_throw(cfg);
  StoredModel model = model_from_json(read_text(cfg.model));
  const MeasureSpec spec =
      cfg.measure.empty() ? model.measure : resolve_measure(cfg.measure, cfg.beta);
  const Dataset test_raw = load_data(cfg, cfg.test);
  const BinaryDataset test = binarize_one_vs_all(
      Dataset{fit_width(cfg, test_raw, model.feature_dim(), cfg.test), test_raw.labels}, positive);
  const Eigen::VectorXd scores = model.scores(test.features);
  report["raw"] = metrics_block(scores, test.labels, spec);

  if (cfg.tune_bias) {
    const std::string& vpath = cfg.validation.empty() ? cfg.data : cfg.validation;
    require_file(vpath, "--validation");
    const Dataset vraw = load_data(cfg, vpath);
    const BinaryDataset val = binarize_one_vs_all(
        Dataset{fit_width(cfg, vraw, model.feature_dim(), vpath), vraw.labels}, positive);
    const double b = model.type == ModelType::Kernel ? model.kernel.bias : model.linear.b;
    const Eigen::VectorXd proj = model.scores(val.features).array() + b;
    const double tuned = tune_bias(std::span<const double>(proj.data(), static_cast<std::size_t>(proj.size())),
                                   val.labels, spec, b);
    const Eigen::VectorXd shifted = scores.array() + (b - tuned);
    report["tuned"] = metrics_block(shifted, test.labels, spec);
    report["bias"] = b;
    report["tuned_bias"] = tuned;
  }
  write_atomic(dir / "metrics.json", report.dump(2) + "\n");
  json summary;
  summary["measure"] = spec.name();
  summary["value"] = report["raw"]["value"];
  if (cfg.tune_bias) summary["tuned_value"] = report["tuned"]["value"];
  emit(out, summary, cfg.pretty);
  return kOk;
}

struct SyntheticRow {
  double p;
  double beta;
};

int cmd_reproduce_synthetic(const RunConfig& cfg, std::ostream& out) {
  const fs::path dir = out_dir(cfg);
  ClassMoments m;
  m.mu_p = Eigen::Vector2d(3.0, 1.0);
  m.mu_n = Eigen::Vector2d(-1.0, -2.0);
  m.sigma_p = (Eigen::Matrix2d() << 1.0, 0.5, 0.5, 1.0).finished();
  m.sigma_n = (Eigen::Matrix2d() << 1.0, 1.0 / 3.0, 1.0 / 3.0, 1.0).finished();
  const SolverOptions options = solver_options(cfg, SolverOptions::literal());

  const auto start = Clock::now();
  std::string table = "p,beta,alpha_p,alpha_n,q_value,rounds\n";
  std::string traces = "p,beta,round,alpha_p,alpha_n,q_before,q_after,lambda,inner_steps\n";
  std::size_t rows = 0;
  for (double beta : {1.0, 3.0}) {
    for (double p : {0.5, 0.4, 0.3, 0.2, 0.1, 0.05, 0.01}) {
      m.p = p;
      const SolverResult r = solve(MomentProblem::from_moments(m, MeasureSpec::fbeta(beta)), options);
      const std::string key = csv_cell(p) + ',' + csv_cell(beta);
      table += key + ',' + csv_cell(r.alpha_p) + ',' + csv_cell(r.alpha_n) + ',' +
               csv_cell(r.q_value) + ',' + std::to_string(r.trace.rounds.size()) + '\n';
      for (const RoundRecord& rec : r.trace.rounds) {
        traces += key + ',' + std::to_string(rec.round) + ',' + csv_cell(rec.alpha_p) + ',' +
                  csv_cell(rec.alpha_n) + ',' + csv_cell(rec.q_before) + ',' +
                  csv_cell(rec.q_after) + ',' + csv_cell(rec.lambda) + ',' +
                  std::to_string(rec.inner_steps) + '\n';
      }
      ++rows;
    }
  }
  write_atomic(dir / "table.csv", table);
  write_atomic(dir / "traces.csv", traces);
  json summary;
  summary["rows"] = rows;
  summary["wall_ms"] = elapsed_ms(start);
  if (cfg.pretty) {
    out << table;
  } else {
    emit(out, summary, false);
  }
  return kOk;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

int cmd_bench(const RunConfig& cfg, std::ostream& out, spdlog::logger& log) {
  check_method(cfg);
  std::vector<std::string> paths = cfg.bench_data;
  if (!cfg.data.empty()) paths.insert(paths.begin(), cfg.data);
  if (paths.empty()) throw UsageError("--data is required");
  for (const auto& path : paths) require_file(path, "--data");
  positive_label_or_throw(cfg);
  if (cfg.repeats < 1) throw UsageError("--repeats must be at least 1");
  std::vector<MeasureSpec> specs;
  for (const auto& name : split_list(cfg.measures)) specs.push_back(resolve_measure(name, cfg.beta));
  if (specs.empty()) throw UsageError("--measures is empty");
  resolve_kernel(cfg);
  const fs::path dir = out_dir(cfg);

  std::string csv = "dataset,measure,median_ms,repeats,low_confidence\n";
  std::size_t cells = 0;
  for (const auto& path : paths) {
    const BinaryDataset data = binarize_one_vs_all(load_data(cfg, path), *cfg.positive_label);
    for (const MeasureSpec& spec : specs) {
      std::vector<double> times;
      for (int r = 0; r < cfg.repeats; ++r) {
        const auto start = Clock::now();
        train_on(cfg, data, spec, log);
        times.push_back(elapsed_ms(start));
      }
      std::sort(times.begin(), times.end());
      const std::size_t n = times.size();
      const double median = n % 2 ? times[n / 2] : (times[n / 2 - 1] + times[n / 2]) / 2.0;
      csv += fs::path(path).filename().string() + ',' + spec.name() + ',' + csv_cell(median) + ',' +
             std::to_string(cfg.repeats) + ',' + (cfg.repeats == 1 ? "true" : "false") + '\n';
      ++cells;
    }
  }
  if (cfg.repeats == 1) log.warn("repeats=1: timings are single measurements (low confidence)");
  write_atomic(dir / "timing.csv", csv);
  json summary;
  summary["rows"] = cells;
  summary["repeats"] = cfg.repeats;
  emit(out, summary, cfg.pretty);
  return kOk;
}

void add_shared_options(CLI::App& app, RunConfig& cfg) {
  app.add_option("--data", cfg.data, "Training data (LIBSVM or CSV)");
  app.add_option("--bench-data", cfg.bench_data, "Extra datasets for bench");
  app.add_option("--test", cfg.test, "Test data");
  app.add_option("--validation", cfg.validation, "Validation data for --tune-bias");
  app.add_option("--moments", cfg.moments, "Class moments JSON (instead of --data)");
  app.add_option("--model", cfg.model, "Model JSON written by train");
  app.add_option("--format", cfg.format, "Data format")->check(CLI::IsMember({"auto", "libsvm", "csv"}));
  app.add_option("--label-column", cfg.label_column, "CSV label column (0-based)");
  app.add_option("--positive-label", cfg.positive_label, "Label treated as the positive class");
  app.add_option("--measure", cfg.measure, "ar, am, qm, f1, f2, fbeta[:b], hm, gm, gtppr, jac");
  app.add_option("--beta", cfg.beta, "Beta for a bare 'fbeta'");
  app.add_option("--measures", cfg.measures, "Comma-separated measures for bench");
  app.add_option("--kernel", cfg.kernel, "none, linear, rbf[:gamma], poly[:degree[:coef0]]");
  app.add_option("--gamma", cfg.gamma, "rbf gamma (default: 1 / median squared distance)");
  app.add_option("--subsample", cfg.subsample, "Support points per class for kernels (0: all)");
  app.add_option("--seed", cfg.seed, "Seed for splits and subsampling");
  app.add_option("--grid-points", cfg.grid_points, "alpha_P grid size");
  app.add_option("--grid-step", cfg.grid_step, "alpha_P grid step (overrides --grid-points)");
  app.add_option("--max-rounds", cfg.max_rounds, "Outer round limit");
  app.add_option("--train-fraction", cfg.train_fraction, "Stratified train share; rest is held out");
  app.add_option("--jitter", cfg.jitter, "Relative diagonal jitter on the quadratic forms");
  app.add_option("--method", cfg.method, "mpmf or mpm");
  app.add_flag("--one-vs-all", cfg.one_vs_all, "Train and evaluate one classifier per class");
  app.add_flag("--tune-bias", cfg.tune_bias, "Re-tune the threshold on validation data");
  app.add_option("--repeats", cfg.repeats, "Bench repetitions (median reported)");
  app.add_option("--out", cfg.out, "Output directory");
  app.add_flag("--pretty", cfg.pretty, "Human-readable output instead of JSON");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto log = make_logger(err);
  RunConfig cfg;
  CLI::App app{"Minimax probability machines for non-decomposable measures", "mpmf"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key=value file; flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);
  add_shared_options(app, cfg);
  for (const char* name : {"train", "predict", "evaluate", "reproduce-synthetic", "bench"}) {
    app.add_subcommand(name)->fallthrough();
  }
  app.get_subcommand("train")->description("Fit a model and write model.json and trace.csv");
  app.get_subcommand("predict")->description("Score data with a saved model");
  app.get_subcommand("evaluate")->description("Compute measures of a model on test data");
  app.get_subcommand("reproduce-synthetic")->description("Solve the synthetic moment table");
  app.get_subcommand("bench")->description("Time training per measure and dataset");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run 'mpmf --help' for usage\n";
    return kUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    if (cfg.command == "train") return cmd_train(cfg, out, *log);
    if (cfg.command == "predict") return cmd_predict(cfg, out);
    if (cfg.command == "evaluate") return cmd_evaluate(cfg, out, *log);
    if (cfg.command == "reproduce-synthetic") return cmd_reproduce_synthetic(cfg, out);
    return cmd_bench(cfg, out, *log);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const DomainError& e) {
    err << "solver failure: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const Error& e) {
    err << "data error: " << e.what() << "\n";
    return kDataMismatch;
  }
}

}  // namespace mpmf::cli
