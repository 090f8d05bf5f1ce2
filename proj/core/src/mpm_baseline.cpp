#include "mpmf/mpm_baseline.hpp"

#include "mpmf/error.hpp"

#include <cmath>

namespace mpmf {

MpmResult solve_mpm(const ClassMoments& moments, int max_steps, double tol) {
  moments.validate();
  if (max_steps < 1 || !(tol >= 0.0)) throw DomainError("solve_mpm: bad step budget or tolerance");
  const Eigen::VectorXd g = moments.mean_gap();
  const double g2 = g.squaredNorm();
  if (g2 == 0.0) throw DataError("class means coincide (zero mean gap)");
  const QuadraticForm sp = QuadraticForm::dense(moments.sigma_p);
  const QuadraticForm sn = QuadraticForm::dense(moments.sigma_n);

  auto h_of = [&](const Eigen::VectorXd& w) {
    return std::sqrt(sp.value(w)) + std::sqrt(sn.value(w));
  };
  auto subgradient = [&](const Eigen::VectorXd& w) {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(w.size());
    const auto ep = sp.evaluate(w);
    const auto en = sn.evaluate(w);
    if (ep.value > 0.0) d += ep.image / std::sqrt(ep.value);
    if (en.value > 0.0) d += en.image / std::sqrt(en.value);
    return Eigen::VectorXd(d - (d.dot(g) / g2) * g);
  };
  // pull back onto w'g = 1 after each step so rounding cannot drift
  auto project = [&](Eigen::VectorXd w) {
    w += ((1.0 - w.dot(g)) / g2) * g;
    return w;
  };

  Eigen::VectorXd w = g / g2;
  double h = h_of(w);
  const double scale = std::sqrt(g2);
  int rises = 0;
  int k = 1;
  for (; k <= max_steps; ++k) {
    const Eigen::VectorXd d = subgradient(w);
    const double dn = d.norm();
    if (dn == 0.0) break;
    // the 1/k step is taken in units of the natural length 1/|g|
    double step = 1.0 / (static_cast<double>(k) * scale);
    Eigen::VectorXd next = project(w - (step / dn) * d);
    double h_next = h_of(next);
    int halvings = 0;
    while (h_next > h && halvings < 60) {
      step /= 2.0;
      next = project(w - (step / dn) * d);
      h_next = h_of(next);
      ++halvings;
    }
    if (h_next > h) {
      if (++rises >= 50) throw SolverError("solve_mpm diverged");
      continue;
    }
    rises = 0;
    const double change = h - h_next;
    w = std::move(next);
    h = h_next;
    if (change <= tol * std::max(h, 1.0)) break;
  }
  if (!(h > 0.0)) throw SolverError("solve_mpm: both class forms vanish on the solution");

  MpmResult out;
  out.steps = std::min(k, max_steps);
  out.h = h;
  out.kappa_star = 1.0 / h;
  out.alpha_star = out.kappa_star * out.kappa_star / (1.0 + out.kappa_star * out.kappa_star);
  out.model.w = w;
  out.model.b = w.dot(moments.mu_p) - out.kappa_star * std::sqrt(sp.value(w));
  return out;
}

}  // namespace mpmf
