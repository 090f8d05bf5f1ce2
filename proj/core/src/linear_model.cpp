#include "mpmf/linear_model.hpp"

#include "mpmf/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace mpmf {

double bias(const Eigen::VectorXd& positive_mean, const QuadraticForm& form_p,
            const Eigen::VectorXd& w, double alpha_p) {
  if (positive_mean.size() != w.size() || form_p.dim() != w.size()) {
    throw DimensionError("bias: direction does not match the moments");
  }
  return w.dot(positive_mean) - inv_kappa(alpha_p) * std::sqrt(form_p.value(w));
}

double bias(const ClassMoments& moments, const Eigen::VectorXd& w, double alpha_p) {
  return bias(moments.mu_p, QuadraticForm::dense(moments.sigma_p), w, alpha_p);
}

double LinearModel::score(const Eigen::VectorXd& x) const {
  if (x.size() != w.size()) throw DimensionError("sample dimension does not match the model");
  return w.dot(x) - b;
}

int LinearModel::predict(const Eigen::VectorXd& x) const { return score(x) > 0.0 ? 1 : -1; }

Eigen::VectorXd LinearModel::scores(const Eigen::MatrixXd& X) const {
  if (X.cols() != w.size()) throw DimensionError("data dimension does not match the model");
  return (X * w).array() - b;
}

LinearFit train_linear(const ClassMoments& moments, const MeasureSpec& spec,
                       const SolverOptions& options, double jitter) {
  if (moments.has_zero_mean_gap()) throw DataError("class means coincide (zero mean gap)");
  const MomentProblem problem = MomentProblem::from_moments(moments, spec, jitter);
  LinearFit fit;
  fit.result = solve(problem, options);
  fit.model.w = fit.result.w;
  fit.model.b = bias(moments.mu_p, problem.form_p, fit.result.w, fit.result.alpha_p);
  return fit;
}

double tune_bias(std::span<const double> projections, std::span<const int> labels,
                 const MeasureSpec& spec, double reference_bias) {
  if (projections.size() != labels.size()) {
    throw DimensionError("tune_bias: scores and labels differ in length");
  }
  std::size_t n_pos = 0;
  for (int y : labels) {
    if (y != 1 && y != -1) throw DataError("tune_bias: labels must be +1 or -1");
    if (y == 1) ++n_pos;
  }
  const std::size_t n = labels.size();
  if (n_pos == 0 || n_pos == n) throw DataError("tune_bias: validation labels hold one class");
  const std::size_t n_neg = n - n_pos;
  const double p = static_cast<double>(n_pos) / static_cast<double>(n);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return projections[a] < projections[b]; });

  auto measure_at = [&](std::size_t fn, std::size_t tn) {
    Rates r;
    r.counts = ConfusionCounts{n_pos - fn, n_neg - tn, tn, fn};
    r.fnr = static_cast<double>(fn) / static_cast<double>(n_pos);
    r.tpr = static_cast<double>(n_pos - fn) / static_cast<double>(n_pos);
    r.fpr = static_cast<double>(n_neg - tn) / static_cast<double>(n_neg);
    r.tnr = static_cast<double>(tn) / static_cast<double>(n_neg);
    return p_measure(spec, r, p).value;
  };

  const double lo = projections[order.front()];
  const double hi = projections[order.back()];
  double best_value = measure_at(0, 0);
  double best_threshold = lo - 1.0;
  auto offer = [&](double threshold, double value) {
    if (value > best_value ||
        (value == best_value &&
         std::abs(threshold - reference_bias) < std::abs(best_threshold - reference_bias))) {
      best_value = value;
      best_threshold = threshold;
    }
  };

  // Threshold t predicts +1 iff projection > t; walk t upward through the gaps.
  std::size_t fn = 0;
  std::size_t tn = 0;
  std::size_t i = 0;
  while (i < n) {
    const double v = projections[order[i]];
    while (i < n && projections[order[i]] == v) {
      if (labels[order[i]] == 1) ++fn; else ++tn;
      ++i;
    }
    const double threshold = i < n ? v + (projections[order[i]] - v) / 2.0 : hi + 1.0;
    offer(threshold, measure_at(fn, tn));
  }
  return best_threshold;
}

}  // namespace mpmf
