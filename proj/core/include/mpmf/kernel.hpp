#pragma once

#include "mpmf/dataset.hpp"
#include "mpmf/measures.hpp"
#include "mpmf/solver.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace mpmf {

enum class KernelKind { Linear, Rbf, Polynomial };

struct KernelSpec {
  KernelKind kind = KernelKind::Rbf;
  double gamma = 1.0;   // rbf: exp(-gamma |x - y|^2)
  int degree = 2;       // polynomial: (x'y + coef0)^degree
  double coef0 = 1.0;

  static KernelSpec linear();
  static KernelSpec rbf(double gamma);
  static KernelSpec polynomial(int degree, double coef0);

  double operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

  /// linear, rbf:<gamma>, poly:<degree>:<coef0>.
  std::string name() const;
  /// Throws DomainError on a non-positive gamma or degree.
  void validate() const;
};

/// Parses "linear", "rbf", "rbf:<gamma>", "poly", "poly:<degree>",
/// "poly:<degree>:<coef0>". A bare "rbf" takes `default_gamma`.
KernelSpec parse_kernel(std::string_view text, double default_gamma = 1.0);

/// Rows of the full Gram matrix over [positives; negatives], split by class.
struct GramBlocks {
  Eigen::MatrixXd k_p;  // N_P x (N_P + N_N)
  Eigen::MatrixXd k_n;  // N_N x (N_P + N_N)
};

GramBlocks gram(const KernelSpec& spec, const Eigen::MatrixXd& x_pos,
                const Eigen::MatrixXd& x_neg);

struct CenteredFactors {
  Eigen::VectorXd l_p;  // column means of K_P
  Eigen::VectorXd l_n;
  Eigen::MatrixXd L_p;  // (K_P - 1 l_p') / sqrt(N_P)
  Eigen::MatrixXd L_n;
};

CenteredFactors centered_factors(const GramBlocks& blocks);

/// 1 / median squared distance over up to 1000 seeded random pairs of rows.
double default_gamma(const Eigen::MatrixXd& x, std::uint64_t seed = 0);

struct KernelModel {
  KernelSpec spec;
  Eigen::VectorXd dual_weights;  // positives first
  double bias = 0.0;
  Eigen::MatrixXd support_pos;
  Eigen::MatrixXd support_neg;

  /// sum_i w_i K(s_i, x) - b.
  double score(const Eigen::VectorXd& x) const;
  int predict(const Eigen::VectorXd& x) const;
  Eigen::VectorXd scores(const Eigen::MatrixXd& X) const;
  /// Weight-vector length matches the support counts and |w| = 1.
  void validate() const;
};

struct KernelFit {
  KernelModel model;
  SolverResult result;
};

/// Builds the kernel moment problem on (optionally subsampled) training rows
/// and solves it. `subsample` caps each class, drawn uniformly without
/// replacement from `seed`. `jitter` shifts both factored forms.
KernelFit solve_kernel(const KernelSpec& spec, const BinaryDataset& train,
                       const MeasureSpec& measure, const SolverOptions& options = {},
                       std::optional<std::size_t> subsample = 200, std::uint64_t seed = 0,
                       double jitter = 0.0);

}  // namespace mpmf
