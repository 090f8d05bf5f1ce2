#pragma once

#include "mpmf/measures.hpp"
#include "mpmf/moments.hpp"
#include "mpmf/quadratic_form.hpp"
#include "mpmf/solver.hpp"

#include <Eigen/Dense>

#include <span>

namespace mpmf {

/// b = w' m - pi(alpha_P) sqrt(w' S_P w), where m is the positive-class mean
/// (or l_p on the kernel path).
double bias(const Eigen::VectorXd& positive_mean, const QuadraticForm& form_p,
            const Eigen::VectorXd& w, double alpha_p);
double bias(const ClassMoments& moments, const Eigen::VectorXd& w, double alpha_p);

struct LinearModel {
  Eigen::VectorXd w;
  double b = 0.0;

  /// w'x - b.
  double score(const Eigen::VectorXd& x) const;
  /// +1 iff score > 0.
  int predict(const Eigen::VectorXd& x) const;
  /// Scores for every row of X.
  Eigen::VectorXd scores(const Eigen::MatrixXd& X) const;
};

struct LinearFit {
  LinearModel model;
  SolverResult result;
};

/// Solves the moment problem and attaches the bias. `jitter` regularizes both
/// covariances before solving; the bias uses the regularized positive form.
LinearFit train_linear(const ClassMoments& moments, const MeasureSpec& spec,
                       const SolverOptions& options = {}, double jitter = 0.0);

/// Threshold sweep on validation projections w'x. Candidates are the
/// midpoints between consecutive distinct values plus one point below the
/// minimum and one above the maximum. Returns the threshold b maximizing the
/// measure of sign(w'x - b); ties go to the candidate nearest
/// `reference_bias`. Throws DataError if labels hold a single class.
double tune_bias(std::span<const double> projections, std::span<const int> labels,
                 const MeasureSpec& spec, double reference_bias);

}  // namespace mpmf
