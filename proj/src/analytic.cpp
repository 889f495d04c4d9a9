#include "cvdj/analytic.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "cvdj/errors.hpp"

namespace cvdj {

namespace {

// Half-angle squares from cos(2 phi) so that phi = pi/2 gives exactly
// cos^2 = 0 and phi = 0, pi give exactly sin^2 = 0.
struct HalfAngle {
  double cos_sq;
  double sin_sq;
};

HalfAngle half_angle(double phi) {
  const double c = std::cos(2.0 * phi);
  return {(1.0 + c) / 2.0, (1.0 - c) / 2.0};
}

double folded_r(const ProcedureParams& p, double r) {
  const double a = std::abs(r);
  if (!(a <= p.big_p)) throw std::invalid_argument("step position r must lie in [-P, P]");
  return a;
}

// p = G + (E - G) cos^2(phi).
double step_probability(const ErfFactors& k, const HalfAngle& h) { return k.g + (k.e - k.g) * h.cos_sq; }

}  // namespace

const char* to_string(LimitStatus s) {
  switch (s) {
    case LimitStatus::kRegular:
      return "regular";
    case LimitStatus::kRemovableSingularity:
      return "removable";
    case LimitStatus::kDirectionalLimit:
      return "directional";
  }
  return "unknown";
}

ErfFactors erf_factors(const ProcedureParams& p, double r) {
  const double e = std::erf(2.0 * p.big_p * p.delta);
  const double g = std::erf(2.0 * std::abs(r) * p.delta);
  return {e * e, g * g};
}

MeasurementDistribution prob_x0(const ProcedureParams& p, double r, double phi) {
  require_contained(p);
  const double a = folded_r(p, r);
  return MeasurementDistribution::from_p_x0(step_probability(erf_factors(p, a), half_angle(phi)));
}

MeasurementDistribution prob_x0_factorized(const ProcedureParams& p, const PiecewiseBinaryFunction& f,
                                           double phi) {
  require_contained(p);
  const double two_d = 2.0 * p.delta;
  // Segment integrals are (sqrt(pi)/(4 delta)) [erf(2 delta hi) - erf(2 delta lo)];
  // the prefactor cancels against 4 delta^2/pi up to the 1/4 applied below.
  // The phase only depends on the value of f, so the amplitude is
  // m0 + m1 e^{2 i phi} and |.|^2 = (m0 - m1)^2 + 2 m0 m1 (1 + cos 2 phi),
  // which vanishes exactly for a balanced split at phi = pi/2.
  double mass[2] = {0.0, 0.0};
  for (const auto& seg : f.segments()) {
    mass[seg.value] += std::erf(two_d * seg.hi) - std::erf(two_d * seg.lo);
  }
  const double diff = mass[0] - mass[1];
  const double sq = diff * diff + 2.0 * mass[0] * mass[1] * (1.0 + std::cos(2.0 * phi));
  return MeasurementDistribution::from_p_x0(sq / 4.0);
}

FisherReport fisher_phi(const ProcedureParams& p, double r, double phi) {
  require_contained(p);
  const double a = folded_r(p, r);
  const ErfFactors k = erf_factors(p, a);
  const HalfAngle h = half_angle(phi);

  FisherReport report;
  const double diff = k.e - k.g;
  const double prob = step_probability(k, h);
  const double q = 1.0 - prob;
  if (diff == 0.0) {
    report.fisher = 0.0;
  } else if (k.g == 0.0) {
    // p = E cos^2; cancel cos^2 between numerator and p.
    if (k.e == 1.0) {
      report.fisher = 4.0;  // q = sin^2 cancels as well
    } else {
      report.fisher = 4.0 * k.e * h.sin_sq / (1.0 - k.e * h.cos_sq);
    }
    if (h.cos_sq == 0.0 || (k.e == 1.0 && h.sin_sq == 0.0)) report.status = LimitStatus::kRemovableSingularity;
  } else if (k.e == 1.0) {
    // q = (1 - G) sin^2; cancel sin^2.
    report.fisher = 4.0 * (1.0 - k.g) * h.cos_sq / prob;
    if (h.sin_sq == 0.0) report.status = LimitStatus::kRemovableSingularity;
  } else {
    report.fisher = 4.0 * diff * diff * h.sin_sq * h.cos_sq / (prob * q);
  }

  // The bounds use the signed r: the generator is f itself.
  const GeneratorMoments m = generator_moments(p, r);
  report.variance_bound = 16.0 * m.variance;
  report.mean_bound_diagnostic = 4.0 * m.mean * m.mean;
  report.mean_bound_doubled = 16.0 * m.mean * m.mean;
  if (a == 0.0 && std::abs(std::sin(2.0 * phi)) >= 1e-12) report.delta_phi = delta_phi(p, phi);
  return report;
}

FisherValue fisher_r(const ProcedureParams& p, double r, double phi) {
  require_contained(p);
  const double a = folded_r(p, r);
  const double d = p.delta;
  const ErfFactors k = erf_factors(p, a);
  const HalfAngle h = half_angle(phi);
  const double kScale = 64.0 * d * d / std::numbers::pi;  // (8 delta/sqrt(pi))^2
  const double gauss = std::exp(-4.0 * a * a * d * d);

  if (h.sin_sq == 0.0) return {0.0, LimitStatus::kRegular};
  const double prob = step_probability(k, h);
  const double q = 1.0 - prob;
  if (k.g == 0.0) {
    if (h.cos_sq == 0.0) return {kScale * h.sin_sq * h.sin_sq / (1.0 - k.e * h.cos_sq), LimitStatus::kDirectionalLimit};
    return {0.0, LimitStatus::kRegular};
  }
  if (q == 0.0) return {0.0, LimitStatus::kRemovableSingularity};
  if (h.cos_sq == 0.0) {
    // p = G; G'^2 / G = scale * gauss^2.
    return {kScale * gauss * gauss * h.sin_sq * h.sin_sq / q, LimitStatus::kRegular};
  }
  const double dg = std::sqrt(kScale) * std::sqrt(k.g) * gauss;  // G'(r)
  const double dp = dg * h.sin_sq;
  return {dp * dp / (prob * q), LimitStatus::kRegular};
}

GeneratorMoments generator_moments(const ProcedureParams& p, double r) {
  require_valid(p);
  if (!(std::abs(r) <= p.big_p)) throw std::invalid_argument("step position r must lie in [-P, P]");
  const double mean = 0.5 * (std::erf(2.0 * p.big_p * p.delta) - std::erf(2.0 * r * p.delta));
  return {mean, mean * (1.0 - mean)};
}

double delta_phi(const ProcedureParams& p, double phi) {
  require_contained(p);
  const double s = std::abs(std::sin(2.0 * phi));
  if (s < 1e-12) throw SingularityError("delta_phi: d<X>/dphi vanishes where sin(2 phi) = 0");
  const double e = erf_factors(p, 0.0).e;
  const double x = 0.5 * e * (1.0 + std::cos(2.0 * phi));
  return std::sqrt(x * (1.0 - x)) / (e * s);
}

double delta_phi_step(const ProcedureParams& p, double r, double phi) {
  require_contained(p);
  const double a = folded_r(p, r);
  const ErfFactors k = erf_factors(p, a);
  const double slope = std::abs((k.e - k.g) * std::sin(2.0 * phi));
  if (slope < 1e-12) throw SingularityError("delta_phi: dp/dphi vanishes");
  const double prob = step_probability(k, half_angle(phi));
  return std::sqrt(prob * (1.0 - prob)) / slope;
}

MeasurementDistribution dj_statistics(const ProcedureParams& p, double r) {
  require_valid(p);
  return MeasurementDistribution::from_p_x0(erf_factors(p, folded_r(p, r)).g);
}

}  // namespace cvdj
