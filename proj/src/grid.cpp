#include "cvdj/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "cvdj/errors.hpp"

namespace cvdj {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// FFTW's planner is not re-entrant; execution on distinct arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* plan) const {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
};
using PlanPtr = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// In place, unnormalised. FFTW_BACKWARD sums with exp(+2 pi i jk/n).
void dft_in_place(std::vector<cplx>& data, int sign) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  PlanPtr plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan.reset(fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf, sign, FFTW_ESTIMATE));
  }
  if (!plan) throw std::runtime_error("fftw: failed to create plan");
  fftw_execute(plan.get());
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

double sign_of_index(std::size_t k) { return (k & 1U) ? -1.0 : 1.0; }

double position_start(std::size_t n, double dx) { return -static_cast<double>(n) * dx / 2.0; }
double momentum_start(std::size_t n, double dy) { return -static_cast<double>(n) * dy / 2.0 + dy / 2.0; }

void require_layout(const GridState& s, Space space) {
  if (s.space != space) {
    throw std::invalid_argument(space == Space::kPosition ? "expected a position-space state"
                                                          : "expected a momentum-space state");
  }
  if (!is_power_of_two(s.size()) || !(s.grid_step > 0.0)) {
    throw std::invalid_argument("grid size must be a power of two with positive step");
  }
  const double expected = space == Space::kPosition ? position_start(s.size(), s.grid_step)
                                                    : momentum_start(s.size(), s.grid_step);
  if (std::abs(s.grid_start - expected) > 1e-12 * std::abs(expected)) {
    throw std::invalid_argument("grid_start does not match the standard conjugate-grid layout");
  }
}

// exp(i pi (n - 1)/2), exact for the four residues of n - 1 mod 4.
cplx global_phase(std::size_t n) {
  switch ((n - 1) % 4) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {0.0, 1.0};
    case 2:
      return {-1.0, 0.0};
    default:
      return {0.0, -1.0};
  }
}

}  // namespace

double GridState::norm() const {
  double sum = 0.0;
  for (const auto& a : amplitudes) sum += std::norm(a);
  return sum * grid_step;
}

GridState prepare_gaussian(const ProcedureParams& p, std::size_t n) {
  if (n < 256 || !is_power_of_two(n)) throw std::invalid_argument("grid size must be a power of two >= 256");
  require_contained(p);
  const double dx = 2.0 * p.big_t / static_cast<double>(n);
  GridState s;
  s.space = Space::kPosition;
  s.grid_step = dx;
  s.grid_start = position_start(n, dx);
  s.amplitudes.resize(n);
  const double two_var = 2.0 * p.delta * p.delta;
  for (std::size_t j = 0; j < n; ++j) {
    const double u = s.coordinate(j) - p.x0;
    s.amplitudes[j] = std::exp(-u * u / two_var);
  }
  const double scale = 1.0 / std::sqrt(s.norm());
  for (auto& a : s.amplitudes) a *= scale;
  return s;
}

// a'_k = (dx/sqrt(pi)) sum_j exp(2 i x_j y_k) a_j. With the standard layout
// the phase splits into e^{i pi (n-1)/2} (-1)^k (-1)^j e^{i pi j/n} e^{2 pi i jk/n}.
GridState fourier(const GridState& s) {
  require_layout(s, Space::kPosition);
  const std::size_t n = s.size();
  const double dx = s.grid_step;
  const double dy = kPi / (static_cast<double>(n) * dx);

  std::vector<cplx> buf(n);
  for (std::size_t j = 0; j < n; ++j) {
    buf[j] = s.amplitudes[j] * sign_of_index(j) * std::polar(1.0, kPi * static_cast<double>(j) / static_cast<double>(n));
  }
  dft_in_place(buf, FFTW_BACKWARD);
  const cplx pre = global_phase(n) * (dx / std::sqrt(kPi));
  for (std::size_t k = 0; k < n; ++k) buf[k] *= pre * sign_of_index(k);

  return GridState{std::move(buf), momentum_start(n, dy), dy, Space::kMomentum};
}

GridState inverse_fourier(const GridState& s) {
  require_layout(s, Space::kMomentum);
  const std::size_t n = s.size();
  const double dy = s.grid_step;
  const double dx = kPi / (static_cast<double>(n) * dy);

  std::vector<cplx> buf(n);
  for (std::size_t k = 0; k < n; ++k) buf[k] = s.amplitudes[k] * sign_of_index(k);
  dft_in_place(buf, FFTW_FORWARD);
  const cplx pre = std::conj(global_phase(n)) * (dy / std::sqrt(kPi));
  for (std::size_t j = 0; j < n; ++j) {
    buf[j] *= pre * sign_of_index(j) * std::polar(1.0, -kPi * static_cast<double>(j) / static_cast<double>(n));
  }
  return GridState{std::move(buf), position_start(n, dx), dx, Space::kPosition};
}

GridState apply_blackbox(const GridState& s, const PiecewiseBinaryFunction& f, double phi, MomentumDomain domain) {
  require_layout(s, Space::kMomentum);
  const double big_p = f.half_width();
  const double half_span = static_cast<double>(s.size()) * s.grid_step / 2.0;
  if (half_span < big_p) throw std::invalid_argument("momentum grid does not cover [-P, P]; increase N or decrease T");

  GridState out = s;
  const cplx kick = std::polar(1.0, -2.0 * phi);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double y = out.coordinate(k);
    if (std::abs(y) <= big_p) {
      if (f(y) == 1) out.amplitudes[k] *= kick;
    } else if (domain == MomentumDomain::kTruncated) {
      out.amplitudes[k] = 0.0;
    }
  }
  return out;
}

MeasurementDistribution measure_povm(const GridState& s, const ProcedureParams& p) {
  if (s.space != Space::kPosition) throw std::invalid_argument("measure_povm: expected a position-space state");
  const double two_var = 2.0 * p.eps() * p.eps();
  double g_norm = 0.0;
  cplx overlap{0.0, 0.0};
  for (std::size_t j = 0; j < s.size(); ++j) {
    const double u = s.coordinate(j) - p.x0;
    const double g = std::exp(-u * u / two_var);
    g_norm += g * g;
    overlap += g * s.amplitudes[j];
  }
  g_norm *= s.grid_step;
  overlap *= s.grid_step / std::sqrt(g_norm);
  return MeasurementDistribution::from_p_x0(std::norm(overlap));
}

CircuitRun run_circuit_traced(const ProcedureParams& p, const PiecewiseBinaryFunction& f, double phi, std::size_t n,
                              MomentumDomain domain) {
  const GridState prepared = prepare_gaussian(p, n);
  const GridState momentum = fourier(prepared);
  const GridState kicked = apply_blackbox(momentum, f, phi, domain);
  const GridState back = inverse_fourier(kicked);
  return {measure_povm(back, p), {prepared.norm(), momentum.norm(), kicked.norm(), back.norm()}};
}

MeasurementDistribution run_circuit(const ProcedureParams& p, const PiecewiseBinaryFunction& f, double phi,
                                    std::size_t n, MomentumDomain domain) {
  return run_circuit_traced(p, f, phi, n, domain).distribution;
}

double aligned_half_domain(double big_p, int cells_per_p) {
  if (!(big_p > 0.0) || cells_per_p < 1) throw std::invalid_argument("aligned_half_domain: need P > 0 and cells >= 1");
  return kPi * static_cast<double>(cells_per_p) / (2.0 * big_p);
}

KickbackDeviation two_register_kickback_check(double x, const PiecewiseBinaryFunction& f, std::size_t n_target,
                                              double target_length, int applications) {
  if (n_target < 2) throw std::invalid_argument("kickback: target grid needs at least two points");
  if (applications < 0) throw std::invalid_argument("kickback: applications must be non-negative");
  const double half_periods = target_length / 2.0;
  if (!(target_length > 0.0) || half_periods != std::floor(half_periods)) {
    throw std::invalid_argument("kickback: target length must be a positive even integer so exp(i pi y) is periodic");
  }
  const double cells_per_unit = static_cast<double>(n_target) / target_length;
  if (cells_per_unit != std::floor(cells_per_unit)) {
    throw std::invalid_argument("kickback: a unit shift must be an integer number of target cells");
  }

  const int fx = f(x);
  const double dy = target_length / static_cast<double>(n_target);
  std::vector<cplx> target(n_target);
  const double amp = 1.0 / std::sqrt(target_length);
  for (std::size_t j = 0; j < n_target; ++j) {
    const double y = -target_length / 2.0 + static_cast<double>(j) * dy;
    target[j] = amp * std::polar(1.0, kPi * y);
  }

  // exp(-2 i a p_t) translates the target by a: psi(y) -> psi(y - a).
  const auto shift = static_cast<std::size_t>(fx) * static_cast<std::size_t>(applications) *
                     static_cast<std::size_t>(cells_per_unit) % n_target;
  // Normalised by the discrete self-overlap, so shift 0 gives exactly 1.
  cplx overlap{0.0, 0.0};
  cplx self{0.0, 0.0};
  for (std::size_t j = 0; j < n_target; ++j) {
    overlap += std::conj(target[j]) * target[(j + n_target - shift) % n_target];
    self += std::conj(target[j]) * target[j];
  }
  overlap /= self;

  const double expected = -kPi * fx * applications;
  double diff = std::remainder(std::arg(overlap) - expected, 2.0 * kPi);
  return {std::abs(diff), 1.0 - std::abs(overlap)};
}

}  // namespace cvdj
