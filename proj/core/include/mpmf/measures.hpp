#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace mpmf {

enum class MeasureKind { AR, AM, QM, FBeta, HM, GM, GTPPR, JAC };

/// A non-decomposable performance measure. `beta` is only meaningful for FBeta.
struct MeasureSpec {
  MeasureKind kind = MeasureKind::FBeta;
  double beta = 1.0;

  static MeasureSpec fbeta(double beta);
  static MeasureSpec of(MeasureKind kind);

  /// Canonical name: ar, am, qm, f1, f2, fbeta:<b>, hm, gm, gtppr, jac.
  std::string name() const;

  friend bool operator==(const MeasureSpec&, const MeasureSpec&) = default;
};

/// Case-insensitive parse of ar, am, qm, f1, f2, fbeta:<beta>, hm, gm, gtppr, jac.
/// Plain "fbeta" takes `default_beta`. Throws DomainError on anything else.
MeasureSpec parse_measure(std::string_view text, double default_beta = 1.0);

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
};

/// Error and success rates of a classifier. tpr == 1 - fnr, tnr == 1 - fpr exactly.
struct Rates {
  double fnr = 0.0;
  double fpr = 0.0;
  double tpr = 1.0;
  double tnr = 1.0;
  std::optional<ConfusionCounts> counts;

  static Rates from_errors(double fnr, double fpr);
};

/// Measure value; `degenerate` marks a 0/0 form that was defined as 0.
struct MeasureValue {
  double value = 0.0;
  bool degenerate = false;
};

/// The measure itself as a function of the rates (larger is better).
/// FBeta and GTPPR are degenerate when nothing is predicted positive
/// (p*TPR + (1-p)*FPR == 0), HM when TPR + TNR == 0.
MeasureValue p_measure(const MeasureSpec& spec, const Rates& rates, double p);

/// The equivalent minimization objective as a closed form in (FNR, FPR).
/// Smaller is better. Throws DomainError "objective diverges" when a series
/// form leaves its domain (fnr == 1; fpr == 1 for HM and GM).
double q_objective(const MeasureSpec& spec, double fnr, double fpr, double p);

/// False where q_objective would throw "objective diverges".
bool objective_defined(const MeasureSpec& spec, double fnr, double fpr);

/// Same minimizer as q_objective, possibly rescaled by a positive constant
/// that depends only on (spec, p). For FBeta this is
/// (fpr + tau * fnr) / (1 - fnr) with tau = beta^2 p / (1 - p), so problems
/// sharing tau rank candidates identically, bit for bit.
double q_ranking(const MeasureSpec& spec, double fnr, double fpr, double p);

/// beta^2 p / (1 - p).
double fbeta_tau(double beta, double p);

/// Counts and rates; labels and predictions are +1/-1 and labels must contain both.
Rates confusion_rates(std::span<const int> predictions, std::span<const int> labels);

/// Thresholds scores at 0 (strictly greater predicts +1) and applies p_measure.
/// p comes from the labels unless overridden.
MeasureValue evaluate(std::span<const double> scores, std::span<const int> labels,
                      const MeasureSpec& spec, std::optional<double> p_override = std::nullopt);

}  // namespace mpmf
