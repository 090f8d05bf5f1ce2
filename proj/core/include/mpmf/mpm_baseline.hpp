#pragma once

#include "mpmf/linear_model.hpp"
#include "mpmf/moments.hpp"

#include <Eigen/Dense>

namespace mpmf {

struct MpmResult {
  LinearModel model;     // w on the affine set w'(mu_P - mu_N) = 1
  double alpha_star = 0.0;
  double kappa_star = 0.0;
  double h = 0.0;        // sqrt(w'S_P w) + sqrt(w'S_N w)
  int steps = 0;
};

/// Accuracy-rate minimax probability machine: minimizes h(w) over the
/// affine set by projected subgradient with step 1/k, halving any step that
/// raises h. Stops when an accepted step moves h by at most `tol` or after
/// `max_steps`. Throws DataError on a zero mean gap and SolverError on
/// divergence.
MpmResult solve_mpm(const ClassMoments& moments, int max_steps = 20000, double tol = 1e-12);

}  // namespace mpmf
