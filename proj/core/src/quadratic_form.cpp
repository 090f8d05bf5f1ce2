#include "mpmf/quadratic_form.hpp"

#include "mpmf/error.hpp"
#include "mpmf/moments.hpp"

#include <string>

namespace mpmf {
namespace {

double shift_for(double jitter, double trace, Eigen::Index dim) {
  if (jitter < 0.0) throw DomainError("jitter must be non-negative");
  if (jitter == 0.0 || dim == 0) return 0.0;
  return jitter * trace / static_cast<double>(dim);
}

}  // namespace

QuadraticForm QuadraticForm::dense(Eigen::MatrixXd sigma, double jitter) {
  if (sigma.rows() != sigma.cols()) throw DimensionError("quadratic form matrix is not square");
  QuadraticForm f;
  f.shift_ = shift_for(jitter, sigma.trace(), sigma.rows());
  f.matrix_ = std::move(sigma);
  return f;
}

QuadraticForm QuadraticForm::factored(Eigen::MatrixXd factor, double jitter) {
  QuadraticForm f;
  f.is_factored_ = true;
  f.shift_ = shift_for(jitter, factor.squaredNorm(), factor.cols());
  f.matrix_ = std::move(factor);
  return f;
}

double QuadraticForm::value(const Eigen::VectorXd& w) const {
  if (w.size() != dim()) {
    throw DimensionError("quadratic form of dimension " + std::to_string(dim()) +
                         " applied to vector of size " + std::to_string(w.size()));
  }
  const double base = is_factored_ ? (matrix_ * w).squaredNorm() : quadratic_form(matrix_, w);
  return base + shift_ * w.squaredNorm();
}

Eigen::VectorXd QuadraticForm::apply(const Eigen::VectorXd& w) const {
  if (w.size() != dim()) throw DimensionError("quadratic form applied to vector of wrong size");
  Eigen::VectorXd out = is_factored_ ? Eigen::VectorXd(matrix_.transpose() * (matrix_ * w))
                                     : Eigen::VectorXd(matrix_ * w);
  if (shift_ != 0.0) out += shift_ * w;
  return out;
}

QuadraticForm::Evaluation QuadraticForm::evaluate(const Eigen::VectorXd& w) const {
  if (w.size() != dim()) throw DimensionError("quadratic form applied to vector of wrong size");
  Evaluation out;
  if (is_factored_) {
    const Eigen::VectorXd lw = matrix_ * w;
    out.value = lw.squaredNorm();
    out.image = matrix_.transpose() * lw;
  } else {
    out.image = matrix_ * w;
    out.value = w.dot(out.image);
    if (out.value < 0.0 && out.value >= -1e-12) out.value = 0.0;
  }
  if (shift_ != 0.0) {
    out.value += shift_ * w.squaredNorm();
    out.image += shift_ * w;
  }
  return out;
}

double QuadraticForm::trace() const {
  const double base = is_factored_ ? matrix_.squaredNorm() : matrix_.trace();
  return base + shift_ * static_cast<double>(dim());
}

Eigen::MatrixXd QuadraticForm::to_dense() const {
  Eigen::MatrixXd s = is_factored_ ? Eigen::MatrixXd(matrix_.transpose() * matrix_) : matrix_;
  s.diagonal().array() += shift_;
  return s;
}

}  // namespace mpmf
