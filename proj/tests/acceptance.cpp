// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance               run all criteria, exit 1 if any fails
//   acceptance --criterion N run one criterion
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "commands.hpp"
#include "cvdj/analytic.hpp"
#include "cvdj/experiments.hpp"
#include "cvdj/grid.hpp"
#include "cvdj/quadrature.hpp"
#include "oracle_values.hpp"

using namespace cvdj;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kSeed = 1;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

ProcedureParams preset() {
  const double d = 1.0 / std::numbers::sqrt2;
  const double big_p = 3.0 / (2.0 * d);
  return {0.0, d, aligned_half_domain(big_p, 256), big_p, std::nullopt};
}

ProcedureParams with_p_delta(double pd) {
  auto p = preset();
  p.big_p = pd / p.delta;
  return p;
}

std::vector<double> fig4_rs(double big_p) { return {0.0, big_p / 8.0, big_p / 4.0, big_p / 2.0, big_p}; }

std::vector<double> phi_axis(int count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = kPi * k / (count - 1);
  return out;
}

Outcome c1() {
  const double f = fisher_phi(preset(), 0.0, kPi / 2.0).fisher;
  const bool pass = std::abs(f - 4.0) <= 1e-3 && std::abs(f - oracle::kFourErf3Sq) <= 1e-12;
  return {pass, fmt("F(pi/2) = %.15f, 4 erf^2(3) = %.15f, |F - 4| = %.3e (tol 1e-3)", f, oracle::kFourErf3Sq,
                    std::abs(f - 4.0))};
}

Outcome c2() {
  const auto p = preset();
  double worst = 0.0;
  for (double phi : {kPi / 8.0, kPi / 4.0, 3.0 * kPi / 8.0}) {
    worst = std::max(worst, std::abs(delta_phi(p, phi) * std::sqrt(fisher_phi(p, 0.0, phi).fisher) - 1.0));
  }
  return {worst <= 1e-3, fmt("max |dphi sqrt(F) - 1| over {pi/8, pi/4, 3pi/8} = %.3e (tol 1e-3); dphi(pi/4) = %.9f",
                             worst, delta_phi(p, kPi / 4.0))};
}

Outcome c3() {
  const auto p = preset();
  const auto m = generator_moments(p, 0.0);
  double worst = -INFINITY;
  for (int i = -40; i <= 40; ++i) {
    const double r = p.big_p * i / 40.0;
    const double bound = 16.0 * generator_moments(p, r).variance;
    for (double phi : phi_axis(129)) worst = std::max(worst, fisher_phi(p, r, phi).fisher - bound);
  }
  const bool pass = std::abs(m.mean - oracle::kHalfErf3) <= 1e-12 && std::abs(m.variance - 0.25) <= 1e-6 &&
                    worst <= 1e-9;
  return {pass, fmt("<H> = %.12f (erf(3)/2 = %.12f), (dH)^2 = %.12f, max F - 16(dH)^2 = %.3e (tol 1e-9)", m.mean,
                    oracle::kHalfErf3, m.variance, worst)};
}

Outcome c4() {
  cli::SweepRequest req;
  req.params = preset();
  req.quantity = cli::Quantity::kProb;
  req.engine = cli::Engine::kAll;
  req.grid_n = 4096;
  req.rs = fig4_rs(req.params.big_p);
  req.phis = phi_axis(17);
  const auto t0 = std::chrono::steady_clock::now();
  const auto table = cli::run_sweep(req);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double aq = 0.0;
  for (const auto& row : table.rows()) {
    aq = std::max(aq, std::abs(row["p_analytic"].get<double>() - row["p_quadrature"].get<double>()));
  }
  const double all = cli::max_deviation(table);
  return {all <= 1e-4 && aq <= 1e-9 && secs < 60.0,
          fmt("max pairwise |dp| = %.3e (tol 1e-4), analytic vs quadrature = %.3e (tol 1e-9), %.2f s", all, aq, secs)};
}

Outcome c5() {
  const auto p = preset();
  const double p_bal = prob_x0(p, 0.0, kPi / 2.0).p_x0();
  const auto bal = dj_trials(p, 0.0, 100000, replica_seed(kSeed, 0));
  const auto con = dj_trials(p, p.big_p, 100000, replica_seed(kSeed, 1));
  const bool pass = p_bal == 0.0 && bal.classified_constant == 0 && *con.misclassification_rate <= 2e-4;
  return {pass, fmt("balanced p(x0) = %g, balanced misclassified = %g / 1e5, constant rate = %.2e (tol 2e-4, "
                    "analytic %.3e)",
                    p_bal, static_cast<double>(bal.classified_constant), *con.misclassification_rate,
                    con.analytic_constant_error)};
}

Outcome c6() {
  const auto p = preset();
  const auto s100 = estimation_study(p, 0.0, kPi / 4.0, 100, 2000, kSeed);
  const auto s64 = estimation_study(p, 0.0, kPi / 4.0, 64, 2000, kSeed);
  const auto s256 = estimation_study(p, 0.0, kPi / 4.0, 256, 2000, kSeed);
  const double ratio = s100.empirical_mse / s100.crb;
  const double scaling = s64.empirical_mse / s256.empirical_mse;
  const bool pass = ratio >= 1.0 && ratio <= 1.3 && scaling >= 3.2 && scaling <= 4.8;
  return {pass, fmt("seed 1: MSE/CRB = %.4f (window [1.0, 1.3]; exact binomial expectation %.4f), "
                    "MSE(64)/MSE(256) = %.3f (window [3.2, 4.8])",
                    ratio, s100.exact_mse / s100.crb, scaling)};
}

Outcome c7() {
  bool pass = true;
  std::string detail;
  const double frozen[] = {oracle::kGapPd005, oracle::kGapPd010};
  int i = 0;
  for (double pd : {0.05, 0.1}) {
    const auto g = step_hat_gap(with_p_delta(pd), kPi / 2.0);
    const double ratio = g.ratio.value_or(NAN);
    const double rel_oracle = std::abs(g.gap / frozen[i++] - 1.0);
    pass = pass && ratio >= 0.9 && ratio <= 1.1 && rel_oracle <= 1e-5;
    detail += fmt("P delta = %.2f: gap = %.6e, series = %.6e, ratio = %.6f; ", pd, g.gap, g.leading_order_prediction,
                  ratio);
  }
  return {pass, detail + "tol 10% relative"};
}

Outcome c8() {
  const auto p = preset();
  std::mt19937_64 rng(kSeed);
  std::normal_distribution<double> g;
  double round_trip = 0.0;
  for (std::size_t n : {256u, 1024u, 4096u}) {
    GridState s{std::vector<std::complex<double>>(n), -p.big_t, 2.0 * p.big_t / static_cast<double>(n),
                Space::kPosition};
    for (auto& a : s.amplitudes) a = {g(rng), g(rng)};
    const double norm = s.norm();
    for (auto& a : s.amplitudes) a /= std::sqrt(norm);
    const auto back = inverse_fourier(fourier(s));
    for (std::size_t j = 0; j < n; ++j) round_trip = std::max(round_trip, std::abs(back.amplitudes[j] - s.amplitudes[j]));
  }
  double stage = 0.0;
  double doubling = 0.0;
  for (double r : fig4_rs(p.big_p)) {
    const auto f = PiecewiseBinaryFunction::step(r, p.big_p);
    for (double phi : phi_axis(17)) {
      const auto run = run_circuit_traced(p, f, phi, 4096);
      for (double nrm : run.stage_norms) stage = std::max(stage, std::abs(nrm - 1.0));
      doubling = std::max(doubling, std::abs(run.distribution.p_x0() - run_circuit(p, f, phi, 8192).p_x0()));
    }
  }
  double kick = 0.0;
  const auto f = PiecewiseBinaryFunction::step(0.0, 1.0);
  for (double x : {-0.5, 0.5}) {
    for (int apps : {1, 2}) {
      const auto k = two_register_kickback_check(x, f, 1024, 2.0, apps);
      kick = std::max({kick, k.phase, std::abs(k.modulus)});
    }
  }
  const bool pass = round_trip <= 1e-10 && stage <= 1e-10 && doubling <= 1e-6 && kick <= 1e-10;
  return {pass, fmt("round trip %.2e, stage norms %.2e (tol 1e-10); N doubling %.2e (tol 1e-6); kickback %.2e "
                    "(tol 1e-10)",
                    round_trip, stage, doubling, kick)};
}

Outcome c9() {
  const auto p = preset();
  const double big_p = p.big_p;
  const auto rs = fig4_rs(big_p);
  const auto phis = phi_axis(129);
  auto fisher = [&](double r, double phi) { return fisher_phi(p, r, phi).fisher; };

  bool constant_zero = true;
  for (double phi : phis) constant_zero = constant_zero && fisher(big_p, phi) == 0.0;
  bool half_pi_order = true;
  bool quarter_pi_order = true;
  for (std::size_t i = 1; i < rs.size(); ++i) {
    half_pi_order = half_pi_order && fisher(rs[i], kPi / 2.0) <= fisher(rs[i - 1], kPi / 2.0);
    quarter_pi_order = quarter_pi_order && fisher(rs[i], kPi / 4.0) < fisher(rs[i - 1], kPi / 4.0);
  }
  const double e = erf_factors(p, 0.0).e;
  const bool dips = e < 1.0 && fisher(0.0, 0.0) == 0.0 && fisher(0.0, kPi) <= 1e-20 &&
                    fisher(0.0, phis[1]) < fisher(0.0, kPi / 4.0) && fisher(0.0, phis[127]) < fisher(0.0, 3 * kPi / 4);

  const std::vector<double> fig5 = {kPi / 2.0, 5.0 * kPi / 12.0, kPi / 3.0, kPi / 4.0, kPi / 8.0};
  bool fig5_dominance = true;
  for (int k = 1; k <= 100; ++k) {
    const double r = big_p * k / 101.0;
    if (r >= 0.9 * big_p) break;
    fig5_dominance = fig5_dominance && fisher_r(p, r, fig5.front()).value >= fisher_r(p, r, fig5.back()).value;
  }
  bool fig5_small_r = true;
  const double r_small = big_p / 101.0;
  for (std::size_t i = 1; i < fig5.size(); ++i) {
    fig5_small_r = fig5_small_r && fisher_r(p, r_small, fig5[i]).value < fisher_r(p, r_small, fig5[i - 1]).value;
  }
  const bool pass = constant_zero && half_pi_order && quarter_pi_order && dips && fig5_dominance && fig5_small_r;
  std::string detail = "fig4: r=P zero ";
  detail += constant_zero ? "yes" : "no";
  detail += ", pi/2 order ";
  detail += half_pi_order ? "yes" : "no";
  detail += ", pi/4 strict order ";
  detail += quarter_pi_order ? "yes" : "no";
  detail += ", r=0 dips ";
  detail += dips ? "yes" : "no";
  detail += fmt(" (E = %.9f); fig5: pi/2 >= pi/8 on (0, 0.9P) ", e);
  detail += fig5_dominance ? "yes" : "no";
  detail += ", small-r order ";
  detail += fig5_small_r ? "yes" : "no";
  return {pass, detail};
}

struct Criterion {
  const char* title;
  std::function<Outcome()> run;
};

const std::vector<Criterion> kCriteria = {
    {"optimal Fisher information", c1},   {"Heisenberg-limited dphi", c2},   {"generator moments and bound", c3},
    {"tri-engine agreement", c4},         {"Deutsch-Jozsa decisions", c5},   {"Cramer-Rao at desk scale", c6},
    {"step-hat error series", c7},        {"unitarity and convergence", c8}, {"figure shapes", c9},
};

bool report(std::size_t index) {
  const auto& c = kCriteria[index];
  Outcome o{false, ""};
  try {
    o = c.run();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  std::printf("%s  [%zu] %s: %s\n", o.pass ? "PASS" : "FAIL", index + 1, c.title, o.detail.c_str());
  std::fflush(stdout);
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc == 3 && std::string(argv[1]) == "--criterion") {
    const int n = std::atoi(argv[2]);
    if (n < 1 || n > static_cast<int>(kCriteria.size())) {
      std::fprintf(stderr, "criterion must be 1..%zu\n", kCriteria.size());
      return 2;
    }
    return report(static_cast<std::size_t>(n - 1)) ? 0 : 1;
  }
  if (argc != 1) {
    std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
    return 2;
  }
  bool all = true;
  for (std::size_t i = 0; i < kCriteria.size(); ++i) all = report(i) && all;
  return all ? 0 : 1;
}
