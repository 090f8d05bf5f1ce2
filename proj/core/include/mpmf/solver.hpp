#pragma once

#include "mpmf/measures.hpp"
#include "mpmf/moments.hpp"
#include "mpmf/quadratic_form.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace mpmf {

/// kappa(alpha) = sqrt(alpha / (1 - alpha)); alpha must lie in (0, 1).
double kappa(double alpha);
/// 1 / kappa(alpha) = sqrt((1 - alpha) / alpha).
double inv_kappa(double alpha);

/// Abstract solver input: a mean-gap vector and two PSD quadratic forms.
/// The linear path fills it from class moments, the kernel path from
/// centered Gram factors.
struct MomentProblem {
  Eigen::VectorXd mean_gap;
  QuadraticForm form_p;
  QuadraticForm form_n;
  double p = 0.5;
  MeasureSpec spec;

  static MomentProblem from_moments(const ClassMoments& moments, const MeasureSpec& spec,
                                    double jitter = 0.0);

  Eigen::Index dim() const { return mean_gap.size(); }
  /// Non-zero gap, matching shapes, 0 < p < 1, dense forms probe-checked PSD.
  void validate() const;
};

struct SolverOptions {
  int grid_points = 4096;
  /// When positive, alpha_P candidates are lo, lo + step, lo + 2 step, ...
  /// (below 1 and alpha_ceiling) and grid_points is ignored.
  double grid_step = 0.0;
  int max_rounds = 200;
  int inner_max_steps = 1000;
  double q_tol = 1e-4;
  double grad_tol = 1e-4;
  double alpha_ceiling = 1.0 - 1e-6;
  /// Offer the previous round's alpha_P as an extra grid candidate. This makes
  /// Q non-increasing across rounds, not only within a round.
  bool carry_alpha = true;
  /// Return the lowest-Q state seen; otherwise the state of the last round.
  bool return_best = true;

  /// The alternating descent exactly as originally stated: 0.01-step alpha
  /// grid from the lower bound, no carried candidate, last-round result.
  static SolverOptions literal();

  void validate() const;
};

struct AlphaPair {
  double alpha_p = 0.0;
  double alpha_n = 0.0;
  double q = 0.0;  // q_objective at the pair
};

/// A^2 / (A^2 + C^2), the smallest alpha_P compatible with C - pi(alpha_P) A >= 0.
double alpha_lower_bound(double a, double c);

/// Grid search over alpha_P with alpha_N = B^2 / (B^2 + (C - pi(alpha_P) A)^2).
/// Ties go to the smallest alpha_P. `extra_candidate` joins the grid when it
/// lies in [lower bound, 1).
AlphaPair alpha_step(double a, double b, double c, const MeasureSpec& spec, double p,
                     const SolverOptions& options,
                     std::optional<double> extra_candidate = std::nullopt);

/// (w'g - tau sqrt(w'S_P w)) / sqrt(w'S_N w).
double lambda_value(const MomentProblem& problem, const Eigen::VectorXd& w, double tau);

/// f(w) = w'g - tau sqrt(w'S_P w) - eta sqrt(w'S_N w), concave in w.
double ascent_objective(const MomentProblem& problem, const Eigen::VectorXd& w, double tau,
                        double eta);
Eigen::VectorXd ascent_gradient(const MomentProblem& problem, const Eigen::VectorXd& w,
                                double tau, double eta);

struct AscentResult {
  Eigen::VectorXd w;
  int inner_steps = 0;
  bool stationary = false;  // gradient already below tolerance at the start
  bool reached_tolerance = false;
  bool stalled = false;     // no improving direction found; w is the start point
  /// Iterates visited (start point first), kept only when requested.
  std::vector<Eigen::VectorXd> path;
};

/// Projected gradient ascent on f over the unit sphere with step 1/k.
/// The returned direction never has a smaller lambda than `w_start`.
AscentResult ascend_direction(const MomentProblem& problem, const Eigen::VectorXd& w_start,
                              double tau, double eta, const SolverOptions& options,
                              bool keep_path = false);

struct RoundRecord {
  int round = 0;
  double alpha_p = 0.0;
  double alpha_n = 0.0;        // from the grid step, before the direction update
  double alpha_n_after = 0.0;  // 1 / (1 + lambda^2) after the direction update
  double q_before = 0.0;
  double q_after = 0.0;
  double lambda = 0.0;         // lambda at the updated direction
  int inner_steps = 0;
  bool stalled = false;
};

struct SolverTrace {
  std::vector<RoundRecord> rounds;

  /// Header: round,alpha_p,alpha_n,q_before,q_after,lambda,inner_steps
  std::string to_csv() const;
};

enum class StopReason { QTolerance, Stationary, MaxRounds };
std::string to_string(StopReason reason);

struct SolverResult {
  Eigen::VectorXd w;
  double alpha_p = 0.0;
  double alpha_n = 0.0;
  double q_value = 0.0;
  SolverTrace trace;
  bool converged = false;
  StopReason reason = StopReason::MaxRounds;
  int result_round = 0;  // round whose state is returned
  bool inner_capped = false;  // some inner loop hit inner_max_steps
};

/// Alternating descent: grid step on (alpha_P, alpha_N), then a direction
/// update that raises lambda, until Q drops by at most q_tol in a round.
/// Default start is mean_gap / |mean_gap|.
SolverResult solve(const MomentProblem& problem, const SolverOptions& options = {},
                   const std::optional<Eigen::VectorXd>& w_init = std::nullopt);

/// pi(alpha_N) sqrt(w'S_N w) + pi(alpha_P) sqrt(w'S_P w) - w'g.
double constraint_residual(const MomentProblem& problem, const Eigen::VectorXd& w,
                           double alpha_p, double alpha_n);

/// Lower bounds on the error levels at direction w (unit norm).
/// `direct_*` are A^2/(A^2+C^2) and B^2/(B^2+C^2). `eigen_*` replace the form
/// by its smallest eigenvalue, 1 / (1 + C^2 / lambda_min), reading the
/// unnamed distance in that bound as C = w'g. Diagnostic only.
struct AlphaFloors {
  double direct_p = 0.0;
  double direct_n = 0.0;
  double eigen_p = 0.0;
  double eigen_n = 0.0;
};
AlphaFloors alpha_floors(const MomentProblem& problem, const Eigen::VectorXd& w);

}  // namespace mpmf
