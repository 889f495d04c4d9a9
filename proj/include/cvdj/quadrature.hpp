#pragma once

#include <optional>

#include "cvdj/binary_function.hpp"
#include "cvdj/params.hpp"

namespace cvdj {

struct QuadratureSpec {
  /// Requested absolute tolerance on p(x0|phi); must lie in (0, 1e-6].
  double abs_tol = 1e-13;
  /// Cap on bisections per segment; must be >= 64.
  int max_subdivisions = 1024;

  void validate() const;
};

struct QuadratureResult {
  double value;
  double error_estimate;
};

/// Numerical p(x0|phi) for an arbitrary piecewise-binary f.
///
/// The double integral over (z, y) is evaluated as (4 delta^2/pi) |I|^2 with
/// I = int_{-P}^{P} exp(-4 delta^2 z^2) exp(2 i phi f(z)) dz. The integral is
/// split at the breakpoints of f and each piece integrated with adaptive
/// 15-point Gauss-Kronrod; the error budget is shared in proportion to each
/// piece's Gaussian mass. No erf is evaluated on this path.
///
/// Throws QuadratureError (carrying the best estimate) if the propagated
/// error estimate exceeds spec.abs_tol.
QuadratureResult prob_x0_quadrature(const ProcedureParams& p, const PiecewiseBinaryFunction& f, double phi,
                                    const QuadratureSpec& spec = {});

struct StepHatGap {
  /// p_step - p_hat for step(0) and hat(-P/2, P/2).
  double signed_gap;
  double gap;
  /// |1 - cos 2 phi| (8/pi) (P delta)^6 |1 - 3 (P delta)^2|.
  double leading_order_prediction;
  /// gap / prediction; empty when the prediction is zero.
  std::optional<double> ratio;
};

/// Difference between the step and hat representations of a balanced
/// function. Requires P delta <= 0.5, where the small-(P delta) series holds.
StepHatGap step_hat_gap(const ProcedureParams& p, double phi, const QuadratureSpec& spec = {});

}  // namespace cvdj
