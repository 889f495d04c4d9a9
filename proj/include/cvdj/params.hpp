#pragma once

#include <optional>
#include <string>
#include <vector>

// Units: hbar = 1/2 throughout, so [x, p] = i/2 and the Fourier kernel is
// exp(2ixy)/sqrt(pi).

namespace cvdj {

/// Minimum (T - |x0|) / delta for the register Gaussian to count as contained
/// in [-T, T]. erfc(4.2) ~ 3e-9, below every tolerance used downstream.
inline constexpr double kContainmentRatio = 4.2;

/// P * delta at which erf^2(2 P delta) is within ~4.4e-5 of one.
inline constexpr double kIdealPDelta = 1.5;

/// Physical configuration of one run of the procedure.
///
/// `epsilon` is the width of the measurement Gaussian; when left unset it is
/// taken equal to `delta`, the optimal measurement. All closed-form statistics
/// assume epsilon == delta.
struct ProcedureParams {
  double x0 = 0.0;
  double delta = 0.0;
  double big_t = 0.0;
  double big_p = 0.0;
  std::optional<double> epsilon;

  double eps() const { return epsilon.value_or(delta); }
  double p_delta() const { return big_p * delta; }
  double containment_ratio() const;
  bool contained() const { return containment_ratio() >= kContainmentRatio; }

  /// Delta = 1/sqrt(2) (coherent-state width), P = 3/(2 Delta), x0 = 0, with
  /// the supplied position half-domain.
  static ProcedureParams coherent(double big_t);
};

enum class Severity { kInfo, kWarning, kError };

struct ValidationIssue {
  Severity severity;
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const;            // no hard errors
  bool has_warnings() const;  // at least one warning
  bool has(const std::string& code) const;
};

ValidationReport validate_params(const ProcedureParams& p);

/// Throws std::invalid_argument listing every hard error in the report.
void require_valid(const ProcedureParams& p);

/// Throws RegimeError when the register Gaussian is not contained in [-T, T].
void require_contained(const ProcedureParams& p);

struct NormalizationConstants {
  double nx_sq;
  double np_sq;
};

/// N_x^2 = sqrt(pi delta^2)/2 [erf((T + x0)/delta) + erf((T - x0)/delta)].
double norm_x_sq(const ProcedureParams& p);

/// N_p^2 = sqrt(pi/(4 delta^2))/2 [erf(2(P + p0)delta) + erf(2(P - p0)delta)].
double norm_p_sq(const ProcedureParams& p, double p0 = 0.0);

NormalizationConstants normalization_constants(const ProcedureParams& p);

/// Two-outcome statistics {p(x0), p(not x0)} of the Gaussian POVM.
class MeasurementDistribution {
 public:
  /// Clamps into [0, 1]; the complement is formed as 1 - p_x0.
  static MeasurementDistribution from_p_x0(double p_x0);

  double p_x0() const { return p_x0_; }
  double p_not_x0() const { return p_not_x0_; }

 private:
  MeasurementDistribution(double a, double b) : p_x0_(a), p_not_x0_(b) {}
  double p_x0_;
  double p_not_x0_;
};

}  // namespace cvdj
