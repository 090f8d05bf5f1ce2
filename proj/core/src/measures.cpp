#include "mpmf/measures.hpp"

#include "mpmf/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <vector>

namespace mpmf {
namespace {

void check_p(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("class proportion p must lie in (0, 1)");
}

void check_rate(double r, const char* name) {
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError(std::string(name) + " must lie in [0, 1]");
}

[[noreturn]] void diverges(const MeasureSpec& spec) {
  throw DomainError("objective diverges: " + spec.name() + " series leaves its domain");
}

std::string format_beta(double beta) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), beta);
  return std::string(buf, ptr);
}

}  // namespace

MeasureSpec MeasureSpec::fbeta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be positive");
  return {MeasureKind::FBeta, beta};
}

MeasureSpec MeasureSpec::of(MeasureKind kind) { return {kind, 1.0}; }

std::string MeasureSpec::name() const {
  switch (kind) {
    case MeasureKind::AR: return "ar";
    case MeasureKind::AM: return "am";
    case MeasureKind::QM: return "qm";
    case MeasureKind::FBeta:
      if (beta == 1.0) return "f1";
      if (beta == 2.0) return "f2";
      return "fbeta:" + format_beta(beta);
    case MeasureKind::HM: return "hm";
    case MeasureKind::GM: return "gm";
    case MeasureKind::GTPPR: return "gtppr";
    case MeasureKind::JAC: return "jac";
  }
  return "?";
}

MeasureSpec parse_measure(std::string_view text, double default_beta) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "ar") return MeasureSpec::of(MeasureKind::AR);
  if (s == "am") return MeasureSpec::of(MeasureKind::AM);
  if (s == "qm") return MeasureSpec::of(MeasureKind::QM);
  if (s == "hm") return MeasureSpec::of(MeasureKind::HM);
  if (s == "gm") return MeasureSpec::of(MeasureKind::GM);
  if (s == "gtppr" || s == "gtp") return MeasureSpec::of(MeasureKind::GTPPR);
  if (s == "jac") return MeasureSpec::of(MeasureKind::JAC);
  if (s == "f1") return MeasureSpec::fbeta(1.0);
  if (s == "f2") return MeasureSpec::fbeta(2.0);
  if (s == "fbeta") return MeasureSpec::fbeta(default_beta);
  if (s.rfind("fbeta:", 0) == 0) {
    const std::string_view num = std::string_view(s).substr(6);
    double beta = 0.0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), beta);
    if (ec == std::errc() && ptr == num.data() + num.size()) return MeasureSpec::fbeta(beta);
  }
  throw DomainError("unknown measure '" + std::string(text) + "'");
}

Rates Rates::from_errors(double fnr, double fpr) {
  check_rate(fnr, "fnr");
  check_rate(fpr, "fpr");
  Rates r;
  r.fnr = fnr;
  r.fpr = fpr;
  r.tpr = 1.0 - fnr;
  r.tnr = 1.0 - fpr;
  return r;
}

double fbeta_tau(double beta, double p) {
  check_p(p);
  return beta * beta * p / (1.0 - p);
}

MeasureValue p_measure(const MeasureSpec& spec, const Rates& r, double p) {
  check_p(p);
  const double tpr = r.tpr;
  const double tnr = r.tnr;
  const double fnr = r.fnr;
  const double fpr = r.fpr;
  switch (spec.kind) {
    case MeasureKind::AR: return {p * tpr + (1.0 - p) * tnr, false};
    case MeasureKind::AM: return {(tpr + tnr) / 2.0, false};
    case MeasureKind::QM: return {1.0 - (fnr * fnr + fpr * fpr) / 2.0, false};
    case MeasureKind::FBeta: {
      if (p * tpr + (1.0 - p) * fpr == 0.0) return {0.0, true};
      const double b2 = spec.beta * spec.beta;
      const double num = (1.0 + b2) * p * tpr;
      return {num / (num + (1.0 - p) * fpr + b2 * p * fnr), false};
    }
    case MeasureKind::HM:
      if (tpr + tnr == 0.0) return {0.0, true};
      return {2.0 * tpr * tnr / (tpr + tnr), false};
    case MeasureKind::GM: return {std::sqrt(tpr * tnr), false};
    case MeasureKind::GTPPR: {
      const double predicted_pos = p * tpr + (1.0 - p) * fpr;
      if (predicted_pos == 0.0) return {0.0, true};
      return {std::sqrt(tpr * (p * tpr / predicted_pos)), false};
    }
    case MeasureKind::JAC: return {p * tpr / (p * tpr + p * fnr + (1.0 - p) * fpr), false};
  }
  return {0.0, true};
}

double q_objective(const MeasureSpec& spec, double fnr, double fpr, double p) {
  check_p(p);
  check_rate(fnr, "fnr");
  check_rate(fpr, "fpr");
  switch (spec.kind) {
    case MeasureKind::AR: return p * fnr + (1.0 - p) * fpr;
    case MeasureKind::AM: return (fnr + fpr) / 2.0;
    case MeasureKind::QM: return (fnr * fnr + fpr * fpr) / 2.0;
    case MeasureKind::FBeta: {
      if (fnr >= 1.0) diverges(spec);
      const double b2 = spec.beta * spec.beta;
      return ((1.0 - p) * fpr + b2 * p * fnr) / (1.0 - fnr);
    }
    case MeasureKind::HM:
      if (fnr >= 1.0 || fpr >= 1.0) diverges(spec);
      return 1.0 / (1.0 - fnr) + 1.0 / (1.0 - fpr);
    case MeasureKind::GM:
      if (fnr >= 1.0 || fpr >= 1.0) diverges(spec);
      return 1.0 / ((1.0 - fnr) * (1.0 - fpr));
    case MeasureKind::GTPPR: {
      if (fnr >= 1.0) diverges(spec);
      const double s = 1.0 - fnr;
      return p / s + (1.0 - p) * fpr / (s * s);
    }
    case MeasureKind::JAC:
      if (fnr >= 1.0) diverges(spec);
      return (p * fnr + (1.0 - p) * fpr) / (1.0 - fnr);
  }
  return 0.0;
}

bool objective_defined(const MeasureSpec& spec, double fnr, double fpr) {
  switch (spec.kind) {
    case MeasureKind::AR:
    case MeasureKind::AM:
    case MeasureKind::QM: return true;
    case MeasureKind::HM:
    case MeasureKind::GM: return fnr < 1.0 && fpr < 1.0;
    default: return fnr < 1.0;
  }
}

double q_ranking(const MeasureSpec& spec, double fnr, double fpr, double p) {
  if (spec.kind != MeasureKind::FBeta) return q_objective(spec, fnr, fpr, p);
  check_rate(fnr, "fnr");
  check_rate(fpr, "fpr");
  if (fnr >= 1.0) diverges(spec);
  return (fpr + fbeta_tau(spec.beta, p) * fnr) / (1.0 - fnr);
}

Rates confusion_rates(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.size() != labels.size()) {
    throw DimensionError("predictions and labels differ in length");
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int y = labels[i];
    const int yhat = predictions[i];
    if ((y != 1 && y != -1) || (yhat != 1 && yhat != -1)) {
      throw DataError("labels and predictions must be +1 or -1");
    }
    if (y == 1) {
      (yhat == 1 ? c.tp : c.fn)++;
    } else {
      (yhat == 1 ? c.fp : c.tn)++;
    }
  }
  const std::size_t pos = c.tp + c.fn;
  const std::size_t neg = c.fp + c.tn;
  if (pos == 0 || neg == 0) throw DataError("labels must contain both classes");
  Rates r = Rates::from_errors(static_cast<double>(c.fn) / static_cast<double>(pos),
                               static_cast<double>(c.fp) / static_cast<double>(neg));
  r.counts = c;
  return r;
}

MeasureValue evaluate(std::span<const double> scores, std::span<const int> labels,
                      const MeasureSpec& spec, std::optional<double> p_override) {
  std::vector<int> predictions(scores.size());
  std::transform(scores.begin(), scores.end(), predictions.begin(),
                 [](double s) { return s > 0.0 ? 1 : -1; });
  const Rates rates = confusion_rates(predictions, labels);
  const auto& c = *rates.counts;
  const double p = p_override.value_or(static_cast<double>(c.tp + c.fn) /
                                       static_cast<double>(labels.size()));
  return p_measure(spec, rates, p);
}

}  // namespace mpmf
