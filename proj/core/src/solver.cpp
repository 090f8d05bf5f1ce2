#include "mpmf/solver.hpp"

#include "mpmf/error.hpp"
#include "mpmf/format.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <sstream>

namespace mpmf {
namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie strictly inside (0, 1)");
}

// Form value and image at w, with the gradient term S w / sqrt(w'S w).
struct FormTerm {
  double root;
  Eigen::VectorXd image;
};

FormTerm form_term(const QuadraticForm& form, const Eigen::VectorXd& w) {
  auto e = form.evaluate(w);
  return {std::sqrt(e.value), std::move(e.image)};
}

struct Probe {
  double f;
  double lambda;
  Eigen::VectorXd grad;
};

Probe probe(const MomentProblem& problem, const Eigen::VectorXd& v, double tau, double eta) {
  const FormTerm tp = form_term(problem.form_p, v);
  const FormTerm tn = form_term(problem.form_n, v);
  const double c = v.dot(problem.mean_gap);
  Probe out;
  out.f = c - tau * tp.root - eta * tn.root;
  out.lambda = (c - tau * tp.root) / tn.root;
  out.grad = problem.mean_gap - (tau / tp.root) * tp.image - (eta / tn.root) * tn.image;
  if (!out.grad.allFinite()) {
    const char* which = tp.root == 0.0 ? "positive-class" : "negative-class";
    throw SolverError(std::string("gradient is not finite: the ") + which +
                      " quadratic form vanishes at the current direction (add jitter)");
  }
  return out;
}

}  // namespace

double kappa(double alpha) {
  check_alpha(alpha);
  return std::sqrt(alpha / (1.0 - alpha));
}

double inv_kappa(double alpha) {
  check_alpha(alpha);
  return std::sqrt((1.0 - alpha) / alpha);
}

MomentProblem MomentProblem::from_moments(const ClassMoments& moments, const MeasureSpec& spec,
                                          double jitter) {
  moments.validate();
  MomentProblem problem;
  problem.mean_gap = moments.mean_gap();
  problem.form_p = QuadraticForm::dense(moments.sigma_p, jitter);
  problem.form_n = QuadraticForm::dense(moments.sigma_n, jitter);
  problem.p = moments.p;
  problem.spec = spec;
  return problem;
}

void MomentProblem::validate() const {
  if (mean_gap.size() == 0) throw DimensionError("empty problem");
  if (!mean_gap.allFinite()) throw DataError("mean gap is not finite");
  if (mean_gap.norm() == 0.0) throw DataError("class means coincide (zero mean gap)");
  if (form_p.dim() != mean_gap.size() || form_n.dim() != mean_gap.size()) {
    throw DimensionError("quadratic forms do not match the mean-gap dimension");
  }
  if (!(p > 0.0 && p < 1.0)) throw DataError("positive proportion must lie in (0, 1)");
  if (!form_p.is_factored()) check_covariance(form_p.stored(), "positive-class form");
  if (!form_n.is_factored()) check_covariance(form_n.stored(), "negative-class form");
}

SolverOptions SolverOptions::literal() {
  SolverOptions o;
  o.grid_step = 0.01;
  o.carry_alpha = false;
  o.return_best = false;
  return o;
}

void SolverOptions::validate() const {
  if (grid_points < 1 || max_rounds < 1 || inner_max_steps < 1) {
    throw DomainError("solver counts must be positive");
  }
  if (grid_step < 0.0 || !(q_tol > 0.0) || !(grad_tol > 0.0)) {
    throw DomainError("solver tolerances must be positive");
  }
  if (!(alpha_ceiling > 0.0 && alpha_ceiling < 1.0)) {
    throw DomainError("alpha_ceiling must lie in (0, 1)");
  }
}

double alpha_lower_bound(double a, double c) { return a * a / (a * a + c * c); }

AlphaPair alpha_step(double a, double b, double c, const MeasureSpec& spec, double p,
                     const SolverOptions& options, std::optional<double> extra_candidate) {
  if (!(c > 0.0)) throw DomainError("direction violates mean-gap positivity (w'g <= 0)");
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DomainError("class spread along the direction is zero; regularize the forms");
  }
  const double lo = alpha_lower_bound(a, c);
  const double b2 = b * b;

  AlphaPair best;
  double best_score = std::numeric_limits<double>::infinity();
  bool found = false;
  auto consider = [&](double alpha_p) {
    if (!(alpha_p > 0.0 && alpha_p < 1.0)) return;
    // rounding can leave a tiny negative margin at the lower endpoint
    const double margin = std::max(c - inv_kappa(alpha_p) * a, 0.0);
    const double alpha_n = b2 / (b2 + margin * margin);
    if (!objective_defined(spec, alpha_p, alpha_n)) return;
    const double score = q_ranking(spec, alpha_p, alpha_n, p);
    if (score < best_score || (score == best_score && alpha_p < best.alpha_p)) {
      best_score = score;
      best.alpha_p = alpha_p;
      best.alpha_n = alpha_n;
      found = true;
    }
  };

  const double top = options.alpha_ceiling;
  if (lo >= top) {
    consider(lo);
  } else if (options.grid_step > 0.0) {
    for (long i = 0;; ++i) {
      const double alpha_p = lo + static_cast<double>(i) * options.grid_step;
      if (alpha_p >= 1.0 || alpha_p > top) break;
      consider(alpha_p);
    }
  } else if (options.grid_points == 1) {
    consider(lo);
  } else {
    const double span = top - lo;
    const double last = static_cast<double>(options.grid_points - 1);
    for (int i = 0; i < options.grid_points; ++i) {
      consider(i + 1 == options.grid_points ? top : lo + span * (static_cast<double>(i) / last));
    }
  }
  if (extra_candidate && *extra_candidate >= lo) consider(*extra_candidate);

  if (!found) throw SolverError("no admissible alpha_P on the grid for " + spec.name());
  best.q = q_objective(spec, best.alpha_p, best.alpha_n, p);
  return best;
}

double lambda_value(const MomentProblem& problem, const Eigen::VectorXd& w, double tau) {
  const double denom = std::sqrt(problem.form_n.value(w));
  if (denom == 0.0) throw DomainError("lambda undefined: negative-class form vanishes at w");
  return (w.dot(problem.mean_gap) - tau * std::sqrt(problem.form_p.value(w))) / denom;
}

double ascent_objective(const MomentProblem& problem, const Eigen::VectorXd& w, double tau,
                        double eta) {
  return w.dot(problem.mean_gap) - tau * std::sqrt(problem.form_p.value(w)) -
         eta * std::sqrt(problem.form_n.value(w));
}

Eigen::VectorXd ascent_gradient(const MomentProblem& problem, const Eigen::VectorXd& w,
                                double tau, double eta) {
  return probe(problem, w, tau, eta).grad;
}

AscentResult ascend_direction(const MomentProblem& problem, const Eigen::VectorXd& w_start,
                              double tau, double eta, const SolverOptions& options,
                              bool keep_path) {
  AscentResult out;
  out.w = w_start;
  if (keep_path) out.path.push_back(w_start);

  Probe current = probe(problem, w_start, tau, eta);
  if (current.grad.norm() <= options.grad_tol) {
    out.stationary = true;
    return out;
  }
  const double start_lambda = current.lambda;

  Eigen::VectorXd v = w_start;
  Eigen::VectorXd best_v = w_start;
  double best_f = -std::numeric_limits<double>::infinity();
  bool have_best = false;

  for (int k = 1; k <= options.inner_max_steps; ++k) {
    out.inner_steps = k;
    double step = 1.0 / static_cast<double>(k);
    Eigen::VectorXd u = v + step * current.grad;
    for (int halvings = 0; u.norm() == 0.0 && halvings < 10; ++halvings) {
      step /= 2.0;
      u = v + step * current.grad;
    }
    const double u_norm = u.norm();
    if (u_norm == 0.0 || !std::isfinite(u_norm)) break;
    Eigen::VectorXd v_next = u / u_norm;
    Probe next = probe(problem, v_next, tau, eta);
    if (keep_path) out.path.push_back(v_next);

    if (next.f >= 0.0 && next.lambda >= start_lambda && next.f > best_f) {
      best_f = next.f;
      best_v = v_next;
      have_best = true;
    }
    const bool done =
        current.f >= 0.0 && next.f >= 0.0 && next.grad.norm() <= options.grad_tol;
    v = std::move(v_next);
    current = std::move(next);
    if (done) {
      if (current.lambda >= start_lambda) {
        out.w = v;
        out.reached_tolerance = true;
        return out;
      }
      break;
    }
  }

  if (have_best) {
    out.w = best_v;
  } else {
    out.w = w_start;
    out.stalled = true;
  }
  return out;
}

std::string SolverTrace::to_csv() const {
  std::ostringstream os;
  os << "round,alpha_p,alpha_n,q_before,q_after,lambda,inner_steps\n";
  for (const auto& r : rounds) {
    os << r.round << ',' << format_double(r.alpha_p) << ',' << format_double(r.alpha_n) << ','
       << format_double(r.q_before) << ',' << format_double(r.q_after) << ','
       << format_double(r.lambda) << ',' << r.inner_steps << '\n';
  }
  return os.str();
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::QTolerance: return "q_tolerance";
    case StopReason::Stationary: return "stationary";
    case StopReason::MaxRounds: return "max_rounds";
  }
  return "?";
}

SolverResult solve(const MomentProblem& problem, const SolverOptions& options,
                   const std::optional<Eigen::VectorXd>& w_init) {
  problem.validate();
  options.validate();

  Eigen::VectorXd w;
  if (w_init) {
    if (w_init->size() != problem.dim()) throw DimensionError("initial direction has wrong size");
    if (w_init->norm() == 0.0) throw DomainError("initial direction is zero");
    w = *w_init / w_init->norm();
  } else {
    w = problem.mean_gap / problem.mean_gap.norm();
  }

  struct State {
    Eigen::VectorXd w;
    double alpha_p;
    double alpha_n;
    double q;
    int round;
  };
  std::optional<State> best;
  std::optional<State> last;
  auto offer = [&](State s) {
    if (!best || s.q < best->q) best = s;
    last = std::move(s);
  };

  SolverResult result;
  std::optional<double> carried;
  for (int t = 1; t <= options.max_rounds; ++t) {
    const double a = std::sqrt(problem.form_p.value(w));
    const double b = std::sqrt(problem.form_n.value(w));
    const double c = w.dot(problem.mean_gap);
    if (!(c > 0.0)) throw SolverError("direction violates mean-gap positivity (w'g <= 0)");
    if (!(a > 0.0) || !(b > 0.0)) {
      throw SolverError("class spread along the direction is zero; regularize the forms");
    }

    const AlphaPair pair = alpha_step(a, b, c, problem.spec, problem.p, options, carried);
    const double tau = inv_kappa(pair.alpha_p);
    const double eta = (c - tau * a) / b;

    AscentResult ascent = ascend_direction(problem, w, tau, eta, options);
    const double lambda = lambda_value(problem, ascent.w, tau);
    const double alpha_n_after = 1.0 / (1.0 + lambda * lambda);
    if (!objective_defined(problem.spec, pair.alpha_p, alpha_n_after)) {
      throw SolverError("objective diverges after the direction update");
    }
    const double q_after = q_objective(problem.spec, pair.alpha_p, alpha_n_after, problem.p);
    if (!std::isfinite(pair.q) || !std::isfinite(q_after)) {
      throw SolverError("objective is not finite");
    }

    result.trace.rounds.push_back({t, pair.alpha_p, pair.alpha_n, alpha_n_after, pair.q, q_after,
                                   lambda, ascent.inner_steps, ascent.stalled});
    if (!ascent.stationary && !ascent.reached_tolerance) result.inner_capped = true;

    offer({w, pair.alpha_p, pair.alpha_n, pair.q, t});
    offer({ascent.w, pair.alpha_p, alpha_n_after, q_after, t});

    w = std::move(ascent.w);
    if (options.carry_alpha) carried = pair.alpha_p;

    if (ascent.stationary) {
      result.converged = true;
      result.reason = StopReason::Stationary;
      break;
    }
    if (pair.q - q_after <= options.q_tol) {
      result.converged = true;
      result.reason = StopReason::QTolerance;
      break;
    }
  }

  const State& chosen = options.return_best ? *best : *last;
  result.w = chosen.w;
  result.alpha_p = chosen.alpha_p;
  result.alpha_n = chosen.alpha_n;
  result.q_value = chosen.q;
  result.result_round = chosen.round;
  return result;
}

double constraint_residual(const MomentProblem& problem, const Eigen::VectorXd& w,
                           double alpha_p, double alpha_n) {
  return inv_kappa(alpha_n) * std::sqrt(problem.form_n.value(w)) +
         inv_kappa(alpha_p) * std::sqrt(problem.form_p.value(w)) - w.dot(problem.mean_gap);
}

AlphaFloors alpha_floors(const MomentProblem& problem, const Eigen::VectorXd& w) {
  const double a2 = problem.form_p.value(w);
  const double b2 = problem.form_n.value(w);
  const double c = w.dot(problem.mean_gap);
  auto min_eigen = [](const QuadraticForm& form) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(form.to_dense(), Eigen::EigenvaluesOnly);
    return std::max(eig.eigenvalues().minCoeff(), 0.0);
  };
  const double lp = min_eigen(problem.form_p);
  const double ln = min_eigen(problem.form_n);
  AlphaFloors f;
  f.direct_p = a2 / (a2 + c * c);
  f.direct_n = b2 / (b2 + c * c);
  f.eigen_p = lp / (lp + c * c);
  f.eigen_n = ln / (ln + c * c);
  return f;
}

}  // namespace mpmf
