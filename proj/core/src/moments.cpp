#include "mpmf/moments.hpp"

#include "mpmf/error.hpp"

#include <cmath>
#include <random>
#include <string>

namespace mpmf {
namespace {

constexpr Eigen::Index kMeanLeaf = 16;
constexpr Eigen::Index kCovLeaf = 64;

// Pairwise row sum over [begin, end): halves are summed recursively, leaves
// left to right. The split points depend only on the range, never on data.
Eigen::VectorXd pairwise_row_sum(const Eigen::MatrixXd& x, Eigen::Index begin, Eigen::Index end) {
  const Eigen::Index len = end - begin;
  if (len <= kMeanLeaf) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(x.cols());
    for (Eigen::Index r = begin; r < end; ++r) acc += x.row(r).transpose();
    return acc;
  }
  const Eigen::Index mid = begin + len / 2;
  return pairwise_row_sum(x, begin, mid) + pairwise_row_sum(x, mid, end);
}

Eigen::MatrixXd pairwise_scatter(const Eigen::MatrixXd& centered, Eigen::Index begin,
                                 Eigen::Index end) {
  const Eigen::Index len = end - begin;
  if (len <= kCovLeaf) {
    const auto block = centered.middleRows(begin, len);
    return block.transpose() * block;
  }
  const Eigen::Index mid = begin + len / 2;
  return pairwise_scatter(centered, begin, mid) + pairwise_scatter(centered, mid, end);
}

void class_moments(const Eigen::MatrixXd& rows, Eigen::VectorXd& mean, Eigen::MatrixXd& cov) {
  const auto n = rows.rows();
  mean = pairwise_row_sum(rows, 0, n) / static_cast<double>(n);
  const Eigen::MatrixXd centered = rows.rowwise() - mean.transpose();
  Eigen::MatrixXd scatter = pairwise_scatter(centered, 0, n);
  cov = (scatter + scatter.transpose()) / (2.0 * static_cast<double>(n - 1));
}

}  // namespace

void check_covariance(const Eigen::MatrixXd& sigma, std::string_view what) {
  const std::string name(what);
  if (sigma.rows() != sigma.cols()) throw DimensionError(name + " is not square");
  if (!sigma.allFinite()) throw DataError(name + " has non-finite entries");
  const double scale = std::max(sigma.cwiseAbs().maxCoeff(), 1e-300);
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DataError(name + " is not symmetric");
  }
  std::mt19937_64 engine(0x5eed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd probe(sigma.rows());
  for (int k = 0; k < 100 && sigma.rows() > 0; ++k) {
    for (Eigen::Index i = 0; i < probe.size(); ++i) probe[i] = normal(engine);
    probe.normalize();
    if (probe.dot(sigma * probe) < -1e-10) throw DataError(name + " is not positive semidefinite");
  }
}

void ClassMoments::validate() const {
  const auto d = mu_p.size();
  if (d == 0) throw DimensionError("moments have dimension 0");
  if (mu_n.size() != d || sigma_p.rows() != d || sigma_p.cols() != d || sigma_n.rows() != d ||
      sigma_n.cols() != d) {
    throw DimensionError("class moment shapes disagree");
  }
  if (!mu_p.allFinite() || !mu_n.allFinite()) throw DataError("class means are not finite");
  if (!(p > 0.0 && p < 1.0)) throw DataError("positive proportion must lie in (0, 1)");
  check_covariance(sigma_p, "positive covariance");
  check_covariance(sigma_n, "negative covariance");
}

ClassMoments estimate_moments(const BinaryDataset& data) {
  if (data.n_pos < 2 || data.n_neg < 2) {
    throw DataError("moment estimation needs at least 2 samples per class (got " +
                    std::to_string(data.n_pos) + " positive, " + std::to_string(data.n_neg) +
                    " negative)");
  }
  ClassMoments m;
  class_moments(data.class_rows(1), m.mu_p, m.sigma_p);
  class_moments(data.class_rows(-1), m.mu_n, m.sigma_n);
  m.p = static_cast<double>(data.n_pos) / static_cast<double>(data.n_pos + data.n_neg);
  return m;
}

ClassMoments regularize(ClassMoments moments, double jitter) {
  if (jitter < 0.0) throw DomainError("jitter must be non-negative");
  if (jitter == 0.0) return moments;
  for (Eigen::MatrixXd* s : {&moments.sigma_p, &moments.sigma_n}) {
    if (s->rows() == 0) continue;
    const double shift = jitter * s->trace() / static_cast<double>(s->rows());
    s->diagonal().array() += shift;
  }
  return moments;
}

double quadratic_form(const Eigen::MatrixXd& sigma, const Eigen::VectorXd& w) {
  if (sigma.rows() != w.size() || sigma.cols() != w.size()) {
    throw DimensionError("quadratic form: matrix is " + std::to_string(sigma.rows()) + "x" +
                         std::to_string(sigma.cols()) + ", vector has " +
                         std::to_string(w.size()) + " entries");
  }
  const double value = w.dot(sigma * w);
  if (value >= 0.0) return value;
  if (value >= -1e-12) return 0.0;
  throw DomainError("quadratic form is negative (" + std::to_string(value) + ")");
}

}  // namespace mpmf
