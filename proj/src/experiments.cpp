#include "cvdj/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "cvdj/errors.hpp"

namespace cvdj {

std::uint64_t replica_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

const char* to_string(Outcome o) { return o == Outcome::kX0 ? "x0" : "not_x0"; }
const char* to_string(FunctionClass c) { return c == FunctionClass::kConstant ? "constant" : "balanced"; }

std::vector<TrialRecord> sample_outcomes(const ProcedureParams& p, const PiecewiseBinaryFunction& f, double phi,
                                         std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample_outcomes: n must be >= 1");
  const double p_x0 = prob_x0_factorized(p, f, phi).p_x0();
  auto shared = std::make_shared<const PiecewiseBinaryFunction>(f);
  ShotStream stream(seed);
  std::vector<TrialRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({stream.bernoulli(p_x0) ? Outcome::kX0 : Outcome::kNotX0, phi, shared, seed});
  }
  return out;
}

FunctionClass dj_classify(const TrialRecord& rec) {
  if (std::abs(rec.true_phi - std::numbers::pi / 2.0) > 1e-12) {
    throw std::invalid_argument("dj_classify: trial was not taken at phi = pi/2");
  }
  return rec.outcome == Outcome::kX0 ? FunctionClass::kConstant : FunctionClass::kBalanced;
}

namespace {

struct Inversion {
  double a;
  double b;
};

Inversion inversion_coefficients(const ProcedureParams& p, double r) {
  require_contained(p);
  if (!(std::abs(r) <= p.big_p)) throw std::invalid_argument("step position r must lie in [-P, P]");
  const ErfFactors k = erf_factors(p, r);
  const Inversion inv{(k.e + k.g) / 2.0, (k.e - k.g) / 2.0};
  if (!(inv.b > 1e-9)) {
    throw UnidentifiableError("mle_phi: p(x0|phi) does not depend on phi (constant function, F = 0)");
  }
  return inv;
}

double invert(const Inversion& inv, double frequency) {
  return 0.5 * std::acos(std::clamp((frequency - inv.a) / inv.b, -1.0, 1.0));
}

double cramer_rao(const ProcedureParams& p, double r, double phi, std::size_t n) {
  const double fisher = fisher_phi(p, r, phi).fisher;
  return fisher > 0.0 ? 1.0 / (static_cast<double>(n) * fisher) : std::numeric_limits<double>::infinity();
}

}  // namespace

EstimationReport mle_phi(const std::vector<TrialRecord>& records, const ProcedureParams& p, double r) {
  if (records.empty()) throw std::invalid_argument("mle_phi: no records");
  const Inversion inv = inversion_coefficients(p, r);
  const double true_phi = records.front().true_phi;
  std::size_t hits = 0;
  for (const auto& rec : records) {
    if (rec.true_phi != true_phi) throw std::invalid_argument("mle_phi: records do not share one true phi");
    if (rec.outcome == Outcome::kX0) ++hits;
  }
  const std::size_t n = records.size();
  const double phi_hat = invert(inv, static_cast<double>(hits) / static_cast<double>(n));
  const double err = phi_hat - true_phi;
  return {phi_hat, n, err * err, cramer_rao(p, r, true_phi, n)};
}

EstimationStudy estimation_study(const ProcedureParams& p, double r, double phi_true, std::size_t shots,
                                 std::size_t replicas, std::uint64_t seed) {
  if (shots == 0 || replicas == 0) throw std::invalid_argument("estimation_study: shots and replicas must be >= 1");
  const Inversion inv = inversion_coefficients(p, r);
  const auto f = PiecewiseBinaryFunction::step(r, p.big_p);

  // Fixed-length per-replica results, reduced in index order.
  std::vector<double> estimates(replicas);
  for (std::size_t i = 0; i < replicas; ++i) {
    estimates[i] = mle_phi(sample_outcomes(p, f, phi_true, shots, replica_seed(seed, i)), p, r).phi_hat;
  }
  double sum = 0.0;
  double sq = 0.0;
  for (double e : estimates) {
    sum += e;
    sq += (e - phi_true) * (e - phi_true);
  }

  const double prob = prob_x0(p, r, phi_true).p_x0();
  double exact = 0.0;
  const double n = static_cast<double>(shots);
  for (std::size_t k = 0; k <= shots; ++k) {
    const double kk = static_cast<double>(k);
    double log_pmf = std::lgamma(n + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(n - kk + 1.0);
    // 0 * log(0) = 0 at the boundaries.
    if (k > 0) log_pmf += kk * std::log(prob);
    if (k < shots) log_pmf += (n - kk) * std::log1p(-prob);
    const double err = invert(inv, kk / n) - phi_true;
    exact += std::exp(log_pmf) * err * err;
  }

  const double reps = static_cast<double>(replicas);
  return {phi_true, shots, replicas, sum / reps, sq / reps, cramer_rao(p, r, phi_true, shots), exact};
}

DjSummary dj_trials(const ProcedureParams& p, double r, std::size_t trials, std::uint64_t seed) {
  const double phi = std::numbers::pi / 2.0;
  const auto f = PiecewiseBinaryFunction::step(r, p.big_p);
  DjSummary s{};
  s.r = r;
  s.p_x0 = dj_statistics(p, r).p_x0();
  s.trials = trials;
  for (const auto& rec : sample_outcomes(p, f, phi, trials, seed)) {
    if (dj_classify(rec) == FunctionClass::kConstant) {
      ++s.classified_constant;
    } else {
      ++s.classified_balanced;
    }
  }
  const double t = static_cast<double>(trials);
  if (r == 0.0) {
    s.misclassification_rate = static_cast<double>(s.classified_constant) / t;
  } else if (std::abs(r) == p.big_p) {
    s.misclassification_rate = static_cast<double>(s.classified_balanced) / t;
  }
  s.analytic_constant_error = 1.0 - erf_factors(p, p.big_p).e;
  return s;
}

std::vector<AuditRow> heisenberg_audit(const ProcedureParams& p, double r, const std::vector<double>& phis) {
  std::vector<AuditRow> rows;
  rows.reserve(phis.size());
  for (double phi : phis) {
    AuditRow row{phi, fisher_phi(p, r, phi), std::nullopt, false, false};
    const double fisher = row.fisher.fisher;
    if (fisher > 0.0) {
      try {
        const double dphi = r == 0.0 ? delta_phi(p, phi) : delta_phi_step(p, r, phi);
        row.crb_product = dphi * std::sqrt(fisher);
      } catch (const SingularityError&) {
      }
      row.qfi_saturated = fisher >= (1.0 - 1e-3) * row.fisher.variance_bound;
    }
    row.crb_saturated = row.crb_product && std::abs(*row.crb_product - 1.0) <= 1e-3;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace cvdj
