#include "cvdj/params.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "cvdj/errors.hpp"

namespace cvdj {

double ProcedureParams::containment_ratio() const {
  return (big_t - std::abs(x0)) / delta;
}

ProcedureParams ProcedureParams::coherent(double big_t) {
  const double delta = 1.0 / std::numbers::sqrt2;
  return ProcedureParams{0.0, delta, big_t, 3.0 / (2.0 * delta), std::nullopt};
}

bool ValidationReport::ok() const {
  return std::none_of(issues.begin(), issues.end(),
                      [](const ValidationIssue& i) { return i.severity == Severity::kError; });
}

bool ValidationReport::has_warnings() const {
  return std::any_of(issues.begin(), issues.end(),
                     [](const ValidationIssue& i) { return i.severity == Severity::kWarning; });
}

bool ValidationReport::has(const std::string& code) const {
  return std::any_of(issues.begin(), issues.end(),
                     [&](const ValidationIssue& i) { return i.code == code; });
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void require_positive(ValidationReport& r, double v, const char* code, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    r.issues.push_back({Severity::kError, code, std::string(name) + " must be positive and finite, got " + fmt(v)});
  }
}

}  // namespace

ValidationReport validate_params(const ProcedureParams& p) {
  ValidationReport report;
  require_positive(report, p.delta, "delta_nonpositive", "delta");
  require_positive(report, p.big_t, "big_t_nonpositive", "T");
  require_positive(report, p.big_p, "big_p_nonpositive", "P");
  require_positive(report, p.eps(), "epsilon_nonpositive", "epsilon");
  if (!std::isfinite(p.x0)) {
    report.issues.push_back({Severity::kError, "x0_nonfinite", "x0 must be finite"});
  }
  if (!report.ok()) return report;

  if (!p.contained()) {
    report.issues.push_back(
        {Severity::kWarning, "containment",
         "(T - |x0|)/delta = " + fmt(p.containment_ratio()) + " < " + fmt(kContainmentRatio) +
             "; the Gaussian is truncated by the finite domain and closed forms do not apply"});
  }
  // Relative slack so that P = 3/(2 delta) in floating point is not flagged.
  if (p.p_delta() < kIdealPDelta * (1.0 - 1e-9)) {
    report.issues.push_back({Severity::kWarning, "low_p_delta",
                             "P*delta = " + fmt(p.p_delta()) + " < 1.5; erf^2(2 P delta) = " +
                                 fmt(std::pow(std::erf(2.0 * p.p_delta()), 2)) + " is noticeably below 1"});
  }
  if (std::abs(p.eps() - p.delta) > 1e-12 * p.delta) {
    report.issues.push_back({Severity::kWarning, "epsilon_mismatch",
                             "epsilon != delta; closed-form statistics assume the optimal measurement epsilon = delta"});
  }
  report.issues.push_back({Severity::kInfo, "p_t_product",
                           "2 P T = " + fmt(2.0 * p.big_p * p.big_t) +
                               " (T and P are treated as independent domain sizes)"});
  return report;
}

void require_valid(const ProcedureParams& p) {
  const auto report = validate_params(p);
  if (report.ok()) return;
  std::string msg = "invalid procedure parameters:";
  for (const auto& issue : report.issues) {
    if (issue.severity == Severity::kError) msg += " " + issue.message + ";";
  }
  throw std::invalid_argument(msg);
}

void require_contained(const ProcedureParams& p) {
  require_valid(p);
  if (!p.contained()) {
    throw RegimeError("register Gaussian not contained in [-T, T]: (T - |x0|)/delta = " +
                      fmt(p.containment_ratio()) + " < " + fmt(kContainmentRatio));
  }
}

double norm_x_sq(const ProcedureParams& p) {
  const double d = p.delta;
  return std::sqrt(std::numbers::pi * d * d) / 2.0 *
         (std::erf((p.big_t + p.x0) / d) + std::erf((p.big_t - p.x0) / d));
}

double norm_p_sq(const ProcedureParams& p, double p0) {
  const double d = p.delta;
  return std::sqrt(std::numbers::pi / (4.0 * d * d)) / 2.0 *
         (std::erf(2.0 * (p.big_p + p0) * d) + std::erf(2.0 * (p.big_p - p0) * d));
}

NormalizationConstants normalization_constants(const ProcedureParams& p) {
  return {norm_x_sq(p), norm_p_sq(p)};
}

MeasurementDistribution MeasurementDistribution::from_p_x0(double p_x0) {
  const double a = std::clamp(p_x0, 0.0, 1.0);
  return MeasurementDistribution(a, 1.0 - a);
}

}  // namespace cvdj
