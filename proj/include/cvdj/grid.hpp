#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "cvdj/binary_function.hpp"
#include "cvdj/params.hpp"

namespace cvdj {

enum class Space { kPosition, kMomentum };

/// Sampled wavefunction. Amplitudes are continuum-normalised:
/// sum |a_j|^2 * grid_step = 1.
///
/// Position grids are x_j = -N dx/2 + j dx. Momentum grids are cell centred,
/// y_k = -N dy/2 + (k + 1/2) dy, so y = 0 and every multiple of dy fall on
/// cell boundaries. Conjugate steps satisfy dx * dy = pi / N.
struct GridState {
  std::vector<std::complex<double>> amplitudes;
  double grid_start = 0.0;
  double grid_step = 0.0;
  Space space = Space::kPosition;

  std::size_t size() const { return amplitudes.size(); }
  double coordinate(std::size_t j) const { return grid_start + static_cast<double>(j) * grid_step; }
  double norm() const;
};

/// What the black box does to momentum components outside [-P, P].
enum class MomentumDomain {
  /// f is extended by 0; the circuit stays unitary.
  kExtended,
  /// Components outside [-P, P] are removed, matching a register whose
  /// Fourier-transformed state lives on [-P, P] only. Not norm preserving.
  kTruncated,
};

/// Samples exp(-(x - x0)^2 / (2 delta^2)) on [-T, T) with n points and
/// renormalises. n must be a power of two >= 256. Throws RegimeError when the
/// Gaussian is not contained in [-T, T].
GridState prepare_gaussian(const ProcedureParams& p, std::size_t n);

/// Unitary transform with kernel sqrt(dx dy / pi) exp(2 i x_j y_k).
GridState fourier(const GridState& s);
GridState inverse_fourier(const GridState& s);

/// Multiplies momentum amplitudes by exp(-2 i phi f(y)). Throws
/// std::invalid_argument if the grid does not reach +-P.
GridState apply_blackbox(const GridState& s, const PiecewiseBinaryFunction& f, double phi,
                         MomentumDomain domain = MomentumDomain::kExtended);

/// Projects onto the normalised width-epsilon Gaussian at x0.
MeasurementDistribution measure_povm(const GridState& s, const ProcedureParams& p);

struct CircuitRun {
  MeasurementDistribution distribution;
  /// Discrete norm after preparation, F, U_f and F^-1.
  std::array<double, 4> stage_norms;
};

/// prepare -> F -> U_f(phi) -> F^-1 -> POVM.
CircuitRun run_circuit_traced(const ProcedureParams& p, const PiecewiseBinaryFunction& f, double phi, std::size_t n,
                              MomentumDomain domain = MomentumDomain::kExtended);

MeasurementDistribution run_circuit(const ProcedureParams& p, const PiecewiseBinaryFunction& f, double phi,
                                    std::size_t n, MomentumDomain domain = MomentumDomain::kExtended);

/// Half-domain T that puts every multiple of P/cells_per_p on a momentum cell
/// boundary: dy = pi/(2T) = P/cells_per_p.
double aligned_half_domain(double big_p, int cells_per_p);

struct KickbackDeviation {
  /// |arg(overlap) - (-pi f(x) applications)|, wrapped into [0, pi].
  double phase;
  /// 1 - |overlap|.
  double modulus;
};

/// Checks that the Fourier-transformed target |pi/2> is an eigenstate of the
/// controlled shift exp(-2 i f(x) p_t) with eigenvalue exp(-i pi f(x)).
///
/// The target is n_target points on a periodic grid of length target_length,
/// which must be an even integer so exp(i pi y) is periodic, with an integer
/// number of cells per unit shift. `applications` repeats the shift.
KickbackDeviation two_register_kickback_check(double x, const PiecewiseBinaryFunction& f, std::size_t n_target,
                                              double target_length = 2.0, int applications = 1);

}  // namespace cvdj
