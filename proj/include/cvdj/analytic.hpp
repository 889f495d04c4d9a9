#pragma once

#include <optional>

#include "cvdj/binary_function.hpp"
#include "cvdj/params.hpp"

namespace cvdj {

/// E = erf^2(2 P delta) and G = erf^2(2 |r| delta), the two factors every
/// closed-form probability is built from.
struct ErfFactors {
  double e;
  double g;
};

ErfFactors erf_factors(const ProcedureParams& p, double r);

/// How a Fisher value was obtained.
enum class LimitStatus {
  kRegular,
  /// p(1-p) vanishes at this point; the value is the limit of the
  /// quadratic-over-linear ratio, which is the same from every direction.
  kRemovableSingularity,
  /// The ratio has no unique limit; the value is the documented one-sided limit.
  kDirectionalLimit,
};

const char* to_string(LimitStatus s);

struct FisherReport {
  double fisher = 0.0;
  LimitStatus status = LimitStatus::kRegular;
  /// 16 (Delta H)^2 with H = f.
  double variance_bound = 0.0;
  /// 4 <H>^2 with H = f. Diagnostic only, not a valid bound under this convention.
  double mean_bound_diagnostic = 0.0;
  /// 4 <H>^2 with H = 2 f.
  double mean_bound_doubled = 0.0;
  /// Error-propagation delta phi; present for r = 0 away from sin(2 phi) = 0.
  std::optional<double> delta_phi;
};

struct FisherValue {
  double value = 0.0;
  LimitStatus status = LimitStatus::kRegular;
};

struct GeneratorMoments {
  double mean;
  double variance;
};

/// p(x0|phi) = (E + G)/2 + (E - G)/2 cos(2 phi) for a step at r.
/// Negative r is folded by symmetry. Throws RegimeError when the register
/// Gaussian is not contained in [-T, T] and std::invalid_argument for |r| > P.
MeasurementDistribution prob_x0(const ProcedureParams& p, double r, double phi);

/// Exact p(x0|phi) for any piecewise-binary f via
/// (4 delta^2/pi) |int_{-P}^{P} exp(-4 delta^2 z^2) exp(2 i phi f(z)) dz|^2
/// with every segment integral written as an erf difference.
MeasurementDistribution prob_x0_factorized(const ProcedureParams& p, const PiecewiseBinaryFunction& f,
                                           double phi);

/// Classical Fisher information in phi of the two-outcome measurement.
FisherReport fisher_phi(const ProcedureParams& p, double r, double phi);

/// Fisher information in the step position r at fixed phi.
///
/// At r = 0 with cos(phi) = 0 the ratio is direction dependent (zero along
/// phi, 64 delta^2/pi along r); the r -> 0+ limit is returned with
/// kDirectionalLimit.
FisherValue fisher_r(const ProcedureParams& p, double r, double phi);

/// Mean and variance of f(x) in the momentum-space Gaussian for a step at r,
/// with r in [-P, P] (not folded: r = -P is the constant-1 function).
GeneratorMoments generator_moments(const ProcedureParams& p, double r);

/// delta phi = sqrt(<X>(1 - <X>)) / (E |sin 2 phi|) for the balanced step.
/// Throws SingularityError where sin(2 phi) vanishes.
double delta_phi(const ProcedureParams& p, double phi);

/// Error-propagation delta phi = sqrt(p(1-p)) / |dp/dphi| for a step at r.
/// Throws SingularityError where dp/dphi vanishes.
double delta_phi_step(const ProcedureParams& p, double r, double phi);

/// Deutsch-Jozsa statistics at phi = pi/2: p(x0) = erf^2(2 r delta).
MeasurementDistribution dj_statistics(const ProcedureParams& p, double r);

}  // namespace cvdj
