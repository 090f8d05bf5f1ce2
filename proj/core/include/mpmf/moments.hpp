#pragma once

#include "mpmf/dataset.hpp"

#include <Eigen/Dense>

#include <string_view>

namespace mpmf {

/// First and second moments of both classes plus the positive-class proportion.
/// This is everything the linear solver ever sees of the data.
struct ClassMoments {
  Eigen::VectorXd mu_p;
  Eigen::MatrixXd sigma_p;
  Eigen::VectorXd mu_n;
  Eigen::MatrixXd sigma_n;
  double p = 0.5;

  Eigen::Index dim() const { return mu_p.size(); }
  Eigen::VectorXd mean_gap() const { return mu_p - mu_n; }

  /// True when the class means coincide exactly; the solver rejects such input.
  bool has_zero_mean_gap() const { return (mu_p.array() == mu_n.array()).all(); }

  /// Shapes agree, 0 < p < 1, both covariances symmetric and PSD (probe-checked).
  /// Throws DataError / DimensionError.
  void validate() const;
};

/// Sample means and unbiased (N-1) covariances per class; p = n_pos / n.
/// Accumulation is pairwise over rows in a fixed order, so results are
/// bitwise reproducible for a given row order. Needs >= 2 samples per class.
ClassMoments estimate_moments(const BinaryDataset& data);

/// Adds jitter * trace(S) / dim to the diagonal of each covariance.
/// A zero covariance stays zero.
ClassMoments regularize(ClassMoments moments, double jitter);

/// w' S w, with rounding residue in [-1e-12, 0) clamped to 0.
/// Throws DimensionError on shape mismatch and DomainError when clearly negative.
double quadratic_form(const Eigen::MatrixXd& sigma, const Eigen::VectorXd& w);

/// Symmetry to 1e-12 relative and no quadratic form below -1e-10 on 100
/// fixed-seed random unit probes. Throws DataError naming `what`.
void check_covariance(const Eigen::MatrixXd& sigma, std::string_view what);

}  // namespace mpmf
