#pragma once

#include <Eigen/Dense>

namespace mpmf {

/// A positive-semidefinite quadratic form w -> w' S w, stored either as S
/// itself (linear path: class covariance) or as a factor L with S = L'L
/// (kernel path: centered Gram block). An optional diagonal shift
/// `jitter * trace(S) / dim` is applied on top.
class QuadraticForm {
 public:
  QuadraticForm() = default;

  static QuadraticForm dense(Eigen::MatrixXd sigma, double jitter = 0.0);
  static QuadraticForm factored(Eigen::MatrixXd factor, double jitter = 0.0);

  Eigen::Index dim() const { return is_factored_ ? matrix_.cols() : matrix_.rows(); }
  bool is_factored() const { return is_factored_; }

  /// w' S w, never negative (rounding residue is clamped).
  double value(const Eigen::VectorXd& w) const;
  /// S w.
  Eigen::VectorXd apply(const Eigen::VectorXd& w) const;

  struct Evaluation {
    double value;
    Eigen::VectorXd image;  // S w
  };
  /// value(w) and apply(w) sharing one product.
  Evaluation evaluate(const Eigen::VectorXd& w) const;
  double trace() const;
  /// Materialized S (including the shift); O(dim^2) memory.
  Eigen::MatrixXd to_dense() const;

  /// The stored matrix (S or L) and the diagonal shift in effect.
  const Eigen::MatrixXd& stored() const { return matrix_; }
  double shift() const { return shift_; }

 private:
  Eigen::MatrixXd matrix_;
  double shift_ = 0.0;
  bool is_factored_ = false;
};

}  // namespace mpmf
