// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Usage: mpmf_acceptance <scratch-dir> <data-dir>

#include "cli/cli.hpp"
#include "oracles.hpp"

#include <mpmf/mpmf.hpp>

#include <Eigen/Cholesky>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace mpmf;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const Outcome& o) {
  std::printf("[%s] %2d %-26s %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

int run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int rc = cli::run(args, out, err);
  if (rc != 0) std::fprintf(stderr, "mpmf %s -> %d: %s\n", args[0].c_str(), rc, err.str().c_str());
  return rc;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

ClassMoments synthetic_moments(double p) {
  ClassMoments m;
  m.mu_p = Eigen::Vector2d(3.0, 1.0);
  m.mu_n = Eigen::Vector2d(-1.0, -2.0);
  m.sigma_p = (Eigen::Matrix2d() << 1.0, 0.5, 0.5, 1.0).finished();
  m.sigma_n = (Eigen::Matrix2d() << 1.0, 1.0 / 3.0, 1.0 / 3.0, 1.0).finished();
  m.p = p;
  return m;
}

// Reference (p, beta) -> (alpha_P, alpha_N) for the synthetic moments.
const std::map<std::pair<double, double>, std::pair<double, double>> kReference = {
    {{0.5, 1}, {0.1646, 0.1995}},  {{0.4, 1}, {0.1847, 0.1762}},  {{0.3, 1}, {0.2047, 0.1592}},
    {{0.2, 1}, {0.2347, 0.1406}},  {{0.1, 1}, {0.2847, 0.1203}},  {{0.05, 1}, {0.3247, 0.1093}},
    {{0.01, 1}, {0.3747, 0.0992}}, {{0.5, 3}, {0.0846, 0.5447}},  {{0.4, 3}, {0.0946, 0.4436}},
    {{0.3, 3}, {0.1146, 0.3224}},  {{0.2, 3}, {0.1246, 0.2847}},  {{0.1, 3}, {0.1646, 0.1995}},
    {{0.05, 3}, {0.1947, 0.1671}}, {{0.01, 3}, {0.2947, 0.1172}},
};

Outcome synthetic_table(const fs::path& dir) {
  const auto start = std::chrono::steady_clock::now();
  if (run_cli({"reproduce-synthetic", "--out", dir.string()}) != 0) return {false, "command failed"};
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto rows = read_csv(dir / "table.csv");
  double worst = 0.0;
  std::string where;
  std::size_t matched = 0;
  for (const auto& r : rows) {
    const double p = std::stod(r[0]);
    const double beta = std::stod(r[1]);
    const auto it = kReference.find({p, beta});
    if (it == kReference.end()) continue;
    ++matched;
    const double dev = std::max(std::abs(std::stod(r[2]) - it->second.first),
                                std::abs(std::stod(r[3]) - it->second.second));
    if (dev > worst) {
      worst = dev;
      where = "p=" + r[0] + " beta=" + r[1];
    }
  }
  Outcome o;
  o.pass = matched == kReference.size() && worst <= 0.01 && seconds < 10.0;
  o.detail = std::to_string(matched) + "/14 rows, max |dev| " + fmt("%.2e", worst) + " (" + where +
             ") in " + fmt("%.3f s", seconds);
  return o;
}

bool bit_equal(const SolverResult& a, const SolverResult& b) {
  return a.w.size() == b.w.size() &&
         std::memcmp(a.w.data(), b.w.data(), sizeof(double) * a.w.size()) == 0 &&
         std::memcmp(&a.alpha_p, &b.alpha_p, sizeof(double)) == 0 &&
         std::memcmp(&a.alpha_n, &b.alpha_n, sizeof(double)) == 0;
}

Outcome tau_invariance(const fs::path& table_dir) {
  const auto rows = read_csv(table_dir / "table.csv");
  std::vector<std::string> a, b;
  for (const auto& r : rows) {
    if (r[0] == "0.5" && r[1] == "1") a = {r[2], r[3]};
    if (r[0] == "0.1" && r[1] == "3") b = {r[2], r[3]};
  }
  bool table_equal = !a.empty() && a == b;
  bool solver_equal = true;
  for (const SolverOptions& opt : {SolverOptions::literal(), SolverOptions{}}) {
    const auto r1 = solve(MomentProblem::from_moments(synthetic_moments(0.5), MeasureSpec::fbeta(1)), opt);
    const auto r3 = solve(MomentProblem::from_moments(synthetic_moments(0.1), MeasureSpec::fbeta(3)), opt);
    solver_equal = solver_equal && bit_equal(r1, r3);
  }
  return {table_equal && solver_equal,
          std::string("table rows ") + (table_equal ? "identical" : "differ") +
              ", solver (w, alpha_P, alpha_N) " + (solver_equal ? "bit-identical" : "differ") +
              " under both option sets"};
}

struct Solved {
  MomentProblem problem;
  SolverResult result;
};

MeasureSpec rotating_measure(int i, std::mt19937_64& rng) {
  static const MeasureKind kinds[] = {MeasureKind::FBeta, MeasureKind::AR, MeasureKind::AM,
                                      MeasureKind::QM,    MeasureKind::HM, MeasureKind::GM,
                                      MeasureKind::GTPPR, MeasureKind::JAC};
  const MeasureKind k = kinds[i % 8];
  if (k != MeasureKind::FBeta) return MeasureSpec::of(k);
  static const double betas[] = {0.5, 1.0, 2.0, 3.0};
  return MeasureSpec::fbeta(betas[rng() % 4]);
}

Outcome monotonicity(std::vector<Solved>& solved) {
  std::mt19937_64 rng(20240601);
  int violations = 0;
  double worst = 0.0;
  std::size_t rounds = 0;
  for (int i = 0; i < 50; ++i) {
    const int dim = 2 + static_cast<int>(rng() % 9);
    ClassMoments m = oracle::random_moments(dim, rng);
    const MeasureSpec spec = rotating_measure(i, rng);
    MomentProblem problem = MomentProblem::from_moments(m, spec);
    SolverResult r = solve(problem);
    const auto& t = r.trace.rounds;
    rounds += t.size();
    for (std::size_t k = 0; k < t.size(); ++k) {
      const double d1 = t[k].q_after - t[k].q_before;
      worst = std::max(worst, d1);
      if (d1 > 1e-12) ++violations;
      if (k + 1 < t.size()) {
        const double d2 = t[k + 1].q_before - t[k].q_after;
        worst = std::max(worst, d2);
        if (d2 > 1e-12) ++violations;
      }
    }
    solved.push_back({std::move(problem), std::move(r)});
  }
  return {violations == 0, std::to_string(violations) + " violations over " + std::to_string(rounds) +
                               " rounds, largest increase " + fmt("%.2e", worst)};
}

Outcome oracle_equivalence(std::vector<Solved>& solved) {
  std::mt19937_64 rng(777);
  double worst = -1.0;
  int fails = 0;
  for (int i = 0; i < 20; ++i) {
    ClassMoments m = oracle::random_moments(2, rng);
    static const double betas[] = {1.0, 2.0, 3.0};
    const MeasureSpec spec = MeasureSpec::fbeta(betas[i % 3]);
    MomentProblem problem = MomentProblem::from_moments(m, spec);
    SolverResult r = solve(problem);
    const oracle::BruteForce bf = oracle::brute_force_2d(m.mean_gap(), m.sigma_p, m.sigma_n, spec, m.p);
    const double rel = (r.q_value - bf.q) / bf.q;
    worst = std::max(worst, rel);
    if (rel > 0.02) ++fails;
    solved.push_back({std::move(problem), std::move(r)});
  }
  return {fails == 0, std::to_string(20 - fails) + "/20 within 2%, worst relative excess " +
                          fmt("%.2e", worst)};
}

Outcome algebra() {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_identity = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double fnr = 0.99 * u(rng);
    const double fpr = u(rng);
    const double p = 0.01 + 0.98 * u(rng);
    const double beta = 0.1 + 4.9 * u(rng);
    const MeasureSpec spec = MeasureSpec::fbeta(beta);
    const double f = p_measure(spec, Rates::from_errors(fnr, fpr), p).value;
    const double rhs = 1.0 + q_objective(spec, fnr, fpr, p) / (p * (1.0 + beta * beta));
    worst_identity = std::max(worst_identity, std::abs(1.0 / f - rhs) / rhs);
  }
  std::string series_detail;
  bool series_ok = true;
  for (int k = 0; k < 8; ++k) {
    const MeasureSpec spec = k == 3 ? MeasureSpec::fbeta(2.0) : MeasureSpec::of(static_cast<MeasureKind>(k));
    double worst = 0.0;
    for (double p : {0.1, 0.5, 0.9}) {
      for (int i = 0; i <= 18; ++i) {
        for (int j = 0; j <= 18; ++j) {
          const double fnr = 0.05 * i;
          const double fpr = 0.05 * j;
          worst = std::max(worst, std::abs(q_objective(spec, fnr, fpr, p) -
                                           oracle::series_q(spec, fnr, fpr, p)));
        }
      }
    }
    if (worst > 1e-8) {
      series_ok = false;
      series_detail += " " + spec.name() + fmt("=%.2e", worst);
    }
  }
  Outcome o;
  o.pass = worst_identity <= 1e-12 && series_ok;
  o.detail = "identity max rel " + fmt("%.2e", worst_identity) + "; series " +
             (series_ok ? std::string("all rows within 1e-8") : "exceeds 1e-8:" + series_detail);
  return o;
}

Outcome constraint_fidelity(const std::vector<Solved>& solved) {
  double worst_res = 0.0;
  double worst_norm = 0.0;
  for (const auto& s : solved) {
    const double res = constraint_residual(s.problem, s.result.w, s.result.alpha_p, s.result.alpha_n);
    worst_res = std::max(worst_res, std::abs(res) / s.result.w.dot(s.problem.mean_gap));
    worst_norm = std::max(worst_norm, std::abs(s.result.w.norm() - 1.0));
  }
  return {worst_res <= 1e-6 && worst_norm <= 1e-10,
          std::to_string(solved.size()) + " problems, max relative residual " + fmt("%.2e", worst_res) +
              ", max | |w| - 1 | " + fmt("%.2e", worst_norm)};
}

Eigen::MatrixXd gaussian_rows(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma, int n,
                              std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::MatrixXd l = sigma.llt().matrixL();
  Eigen::MatrixXd x(n, mu.size());
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd z(mu.size());
    for (Eigen::Index j = 0; j < z.size(); ++j) z(j) = normal(rng);
    x.row(i) = (mu + l * z).transpose();
  }
  return x;
}

Outcome worst_case_bound() {
  const double p = 0.1;
  const ClassMoments m = synthetic_moments(p);
  const MeasureSpec spec = MeasureSpec::fbeta(1.0);
  const LinearFit fit = train_linear(m, spec);
  std::mt19937_64 rng(4242);
  const int n = 100000;
  const int n_pos = static_cast<int>(p * n);
  const Eigen::MatrixXd xp = gaussian_rows(m.mu_p, m.sigma_p, n_pos, rng);
  const Eigen::MatrixXd xn = gaussian_rows(m.mu_n, m.sigma_n, n - n_pos, rng);
  Eigen::VectorXd scores(n);
  scores << fit.model.scores(xp), fit.model.scores(xn);
  std::vector<int> labels(n, -1);
  std::fill(labels.begin(), labels.begin() + n_pos, 1);
  const double f = evaluate(std::span<const double>(scores.data(), n), labels, spec).value;
  const double bound = 2.0 * p / (fit.result.q_value + 2.0 * p);
  return {f >= bound - 0.02, "empirical F1 " + fmt("%.4f", f) + " vs bound " + fmt("%.4f", bound)};
}

double train_f1(const Eigen::VectorXd& scores, const BinaryDataset& d) {
  return evaluate(std::span<const double>(scores.data(), static_cast<std::size_t>(scores.size())),
                  d.labels, MeasureSpec::fbeta(1.0))
      .value;
}

Outcome kernel_separability() {
  const MeasureSpec f1 = MeasureSpec::fbeta(1.0);
  const BinaryDataset xr = oracle::xor_dataset(11);
  const KernelFit rbf = solve_kernel(KernelSpec::rbf(default_gamma(xr.features, 0)), xr, f1, {}, 200, 0, 1e-8);
  const LinearFit lin = train_linear(estimate_moments(xr), f1, {}, 1e-8);
  const double f_rbf = train_f1(rbf.model.scores(xr.features), xr);
  const double f_lin = train_f1(lin.model.scores(xr.features), xr);

  const BinaryDataset bl = oracle::blobs_dataset(12);
  const KernelFit klin = solve_kernel(KernelSpec::linear(), bl, f1, {}, 200, 0, 1e-8);
  const LinearFit blin = train_linear(estimate_moments(bl), f1, {}, 1e-8);
  const Eigen::VectorXd sk = klin.model.scores(bl.features);
  const Eigen::VectorXd sl = blin.model.scores(bl.features);
  int agree = 0;
  for (Eigen::Index i = 0; i < sk.size(); ++i) agree += (sk(i) > 0) == (sl(i) > 0);
  const double agreement = static_cast<double>(agree) / static_cast<double>(sk.size());
  return {f_rbf >= 0.9 && f_lin <= 0.7 && agreement >= 0.95,
          "xor rbf F1 " + fmt("%.4f", f_rbf) + ", linear F1 " + fmt("%.4f", f_lin) +
              "; blobs agreement " + fmt("%.4f", agreement) + ", kernel F1 " +
              fmt("%.4f", train_f1(sk, bl))};
}

Outcome mpm_baseline() {
  ClassMoments m;
  m.mu_p = Eigen::Vector2d(1, 0);
  m.mu_n = Eigen::Vector2d(-1, 0);
  m.sigma_p = Eigen::Matrix2d::Identity();
  m.sigma_n = Eigen::Matrix2d::Identity();
  m.p = 0.5;
  const MpmResult r = solve_mpm(m);
  const Eigen::VectorXd& w = r.model.w;
  const double angle = std::atan2(std::abs(w(1)), w(0));
  return {std::abs(r.alpha_star - 0.5) <= 1e-3 && angle <= 1e-3,
          "alpha* " + fmt("%.6f", r.alpha_star) + ", angle " + fmt("%.2e", angle) + " rad"};
}

Outcome real_data(const fs::path& data_dir) {
  const BinaryDataset all =
      binarize_one_vs_all(load_sparse(data_dir / "breast-cancer_scale.libsvm"), 4);
  const MeasureSpec f1 = MeasureSpec::fbeta(1.0);
  double sum = 0.0;
  double lo = 1.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto [train, test] = split(all, 462.0 / 681.0, seed);
    const LinearFit fit = train_linear(estimate_moments(train), f1, {}, 1e-8);
    const double f = train_f1(fit.model.scores(test.features), test);
    sum += f;
    lo = std::min(lo, f);
  }
  const double mean = sum / 20.0;
  return {mean >= 0.90 && mean <= 1.0,
          "mean held-out F1 " + fmt("%.4f", mean) + " over 20 splits (min " + fmt("%.4f", lo) + ")"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome determinism(const fs::path& work, const fs::path& data_dir) {
  const fs::path breast = data_dir / "breast-cancer_scale.libsvm";
  const fs::path xor_file = work / "xor.libsvm";
  fs::create_directories(work);
  {
    const BinaryDataset xr = oracle::xor_dataset(11);
    std::ofstream out(xor_file);
    write_sparse(out, Dataset{xr.features, xr.labels});
  }
  std::vector<std::string> files;
  for (const char* run : {"a", "b"}) {
    const fs::path d = work / run;
    const std::string s = d.string();
    bool ok = run_cli({"reproduce-synthetic", "--out", s + "/synthetic"}) == 0 &&
              run_cli({"train", "--data", breast.string(), "--positive-label", "4",
                       "--train-fraction", "0.6784140969", "--seed", "5", "--out", s + "/linear"}) == 0 &&
              run_cli({"train", "--data", breast.string(), "--positive-label", "4", "--method", "mpm",
                       "--out", s + "/mpm"}) == 0 &&
              run_cli({"train", "--data", xor_file.string(), "--positive-label", "1", "--kernel", "rbf",
                       "--subsample", "100", "--seed", "3", "--out", s + "/kernel"}) == 0 &&
              run_cli({"evaluate", "--model", s + "/linear/model.json", "--test", breast.string(),
                       "--positive-label", "4", "--tune-bias", "--validation", breast.string(),
                       "--out", s + "/eval"}) == 0 &&
              run_cli({"evaluate", "--one-vs-all", "--data", breast.string(), "--test", breast.string(),
                       "--out", s + "/ova"}) == 0 &&
              run_cli({"predict", "--model", s + "/kernel/model.json", "--test", xor_file.string(),
                       "--out", s + "/predict"}) == 0;
    if (!ok) return {false, "a command failed"};
  }
  int compared = 0;
  int differing = 0;
  for (const auto& entry : fs::recursive_directory_iterator(work / "a")) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), work / "a");
    ++compared;
    if (slurp(entry.path()) != slurp(work / "b" / rel)) {
      ++differing;
      std::fprintf(stderr, "differs: %s\n", rel.string().c_str());
    }
  }
  return {differing == 0 && compared >= 10,
          std::to_string(compared) + " artifacts compared, " + std::to_string(differing) + " differ"};
}

template <typename F>
Outcome guarded(F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: %s <scratch-dir> <data-dir>\n", argv[0]);
    return 2;
  }
  const fs::path work(argv[1]);
  const fs::path data_dir(argv[2]);
  fs::remove_all(work);
  fs::create_directories(work);

  std::vector<Solved> solved;
  report(1, "synthetic-table", guarded([&] { return synthetic_table(work / "c1"); }));
  report(2, "tau-invariance", guarded([&] { return tau_invariance(work / "c1"); }));
  report(3, "monotone-q", guarded([&] { return monotonicity(solved); }));
  report(4, "brute-force-oracle", guarded([&] { return oracle_equivalence(solved); }));
  report(5, "measure-algebra", guarded([&] { return algebra(); }));
  report(6, "constraint-fidelity", guarded([&] { return constraint_fidelity(solved); }));
  report(7, "worst-case-bound", guarded([&] { return worst_case_bound(); }));
  report(8, "kernel-separability", guarded([&] { return kernel_separability(); }));
  report(9, "mpm-baseline", guarded([&] { return mpm_baseline(); }));
  report(10, "breast-f1", guarded([&] { return real_data(data_dir); }));
  report(11, "determinism", guarded([&] { return determinism(work / "c11", data_dir); }));
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
