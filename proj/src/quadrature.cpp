#include "cvdj/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <vector>

#include "cvdj/errors.hpp"

namespace cvdj {

namespace {

// QUADPACK qk15 nodes and weights. Kronrod nodes at odd indices 1, 3, 5 and 7
// coincide with the 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel gauss_kronrod_15(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[static_cast<std::size_t>(j)];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kWgk[static_cast<std::size_t>(j)] * sum;
    if (j % 2 == 1) gauss += kWg[static_cast<std::size_t>(j / 2)] * sum;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

struct Adaptive {
  double value;
  double error;
  bool converged;
};

// Global adaptive bisection: always split the panel with the largest error.
template <class F>
Adaptive integrate_adaptive(const F& f, double a, double b, double budget, int max_subdivisions) {
  std::priority_queue<Panel> panels;
  panels.push(gauss_kronrod_15(f, a, b));
  double value = panels.top().value;
  double error = panels.top().error;
  int splits = 0;
  while (error > budget && splits < max_subdivisions) {
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = gauss_kronrod_15(f, worst.a, mid);
    const Panel right = gauss_kronrod_15(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++splits;
  }
  // Re-sum to shed the drift of the running totals.
  value = 0.0;
  error = 0.0;
  std::vector<Panel> done;
  while (!panels.empty()) {
    done.push_back(panels.top());
    panels.pop();
  }
  std::sort(done.begin(), done.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  for (const auto& pnl : done) {
    value += pnl.value;
    error += pnl.error;
  }
  return {value, error, error <= budget};
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0 && abs_tol <= 1e-6)) throw std::invalid_argument("QuadratureSpec: abs_tol must lie in (0, 1e-6]");
  if (max_subdivisions < 64) throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 64");
}

QuadratureResult prob_x0_quadrature(const ProcedureParams& p, const PiecewiseBinaryFunction& f, double phi,
                                    const QuadratureSpec& spec) {
  spec.validate();
  require_contained(p);
  const double k = 4.0 * p.delta * p.delta;
  const auto weight = [k](double z) { return std::exp(-k * z * z); };

  const auto segments = f.segments();
  std::vector<double> coarse(segments.size());
  double coarse_total = 0.0;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    coarse[i] = gauss_kronrod_15(weight, segments[i].lo, segments[i].hi).value;
    coarse_total += coarse[i];
  }

  // |I| <= sqrt(pi)/(2 delta), so dp <= (4 delta/sqrt(pi)) dI + O(dI^2);
  // spend half of abs_tol on I.
  const double prefactor = k / std::numbers::pi;
  const double budget_i = spec.abs_tol * std::sqrt(std::numbers::pi) / (8.0 * p.delta);

  const std::complex<double> phase = std::polar(1.0, 2.0 * phi);
  std::complex<double> integral{0.0, 0.0};
  double error_i = 0.0;
  bool converged = true;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const double share = coarse_total > 0.0 ? coarse[i] / coarse_total : 1.0 / static_cast<double>(segments.size());
    const auto piece = integrate_adaptive(weight, segments[i].lo, segments[i].hi, budget_i * share,
                                          spec.max_subdivisions);
    converged = converged && piece.converged;
    error_i += piece.error;
    integral += segments[i].value == 1 ? phase * piece.value : std::complex<double>(piece.value, 0.0);
  }

  const double value = prefactor * std::norm(integral);
  const double error = prefactor * (2.0 * std::abs(integral) * error_i + error_i * error_i);
  if (!converged || error > spec.abs_tol) {
    throw QuadratureError("prob_x0_quadrature: tolerance not reached within max_subdivisions", value, error);
  }
  return {value, error};
}

StepHatGap step_hat_gap(const ProcedureParams& p, double phi, const QuadratureSpec& spec) {
  const double pd = p.p_delta();
  if (!(pd <= 0.5)) throw std::invalid_argument("step_hat_gap: series regime requires P*delta <= 0.5");
  const double big_p = p.big_p;
  const auto step = prob_x0_quadrature(p, PiecewiseBinaryFunction::step(0.0, big_p), phi, spec);
  const auto hat = prob_x0_quadrature(p, PiecewiseBinaryFunction::hat(-big_p / 2.0, big_p / 2.0, big_p), phi, spec);

  StepHatGap out{};
  out.signed_gap = step.value - hat.value;
  out.gap = std::abs(out.signed_gap);
  out.leading_order_prediction = std::abs(1.0 - std::cos(2.0 * phi)) * (8.0 / std::numbers::pi) * std::pow(pd, 6) *
                                 std::abs(1.0 - 3.0 * pd * pd);
  if (out.leading_order_prediction > 0.0) out.ratio = out.gap / out.leading_order_prediction;
  return out;
}

}  // namespace cvdj
