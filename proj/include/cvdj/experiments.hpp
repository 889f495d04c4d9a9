#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "cvdj/analytic.hpp"
#include "cvdj/binary_function.hpp"
#include "cvdj/params.hpp"

namespace cvdj {

/// Bernoulli shot source with a fixed, platform-independent algorithm:
/// std::mt19937_64 seeded with `seed`; each shot draws one 64-bit word w,
/// forms u = (w >> 11) * 2^-53 in [0, 1) and reports X0 iff u < p.
class ShotStream {
 public:
  explicit ShotStream(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finaliser applied to master + (index + 1) * 0x9E3779B97F4A7C15.
/// Gives every replica its own stream, independent of execution order.
std::uint64_t replica_seed(std::uint64_t master, std::uint64_t index);

enum class Outcome { kX0, kNotX0 };
enum class FunctionClass { kConstant, kBalanced };

const char* to_string(Outcome o);
const char* to_string(FunctionClass c);

struct TrialRecord {
  Outcome outcome;
  double true_phi;
  std::shared_ptr<const PiecewiseBinaryFunction> f_descriptor;
  std::uint64_t seed;
};

/// n independent shots with success probability prob_x0_factorized(p, f, phi).
std::vector<TrialRecord> sample_outcomes(const ProcedureParams& p, const PiecewiseBinaryFunction& f, double phi,
                                         std::size_t n, std::uint64_t seed);

/// X0 -> constant, otherwise balanced. The trial must have been taken at phi = pi/2.
FunctionClass dj_classify(const TrialRecord& rec);

struct EstimationReport {
  double phi_hat;
  std::size_t n_shots;
  /// (phi_hat - true_phi)^2 for a single record set; mean over replicas in a study.
  double empirical_mse;
  /// 1 / (n F(true_phi)).
  double crb;
};

/// Inverts p(x0|phi) = a + b cos(2 phi) on the principal branch [0, pi/2]:
/// phi_hat = acos(clamp((k/n - a)/b, -1, 1)) / 2. r is the step position of
/// the sampled function; throws UnidentifiableError when b <= 1e-9.
EstimationReport mle_phi(const std::vector<TrialRecord>& records, const ProcedureParams& p, double r);

struct EstimationStudy {
  double phi_true;
  std::size_t shots;
  std::size_t replicas;
  double mean_phi_hat;
  double empirical_mse;
  double crb;
  /// E[(phi_hat - phi)^2] by summing over the binomial law of k.
  double exact_mse;
};

/// Replicated MLE; replica i samples with replica_seed(seed, i).
EstimationStudy estimation_study(const ProcedureParams& p, double r, double phi_true, std::size_t shots,
                                 std::size_t replicas, std::uint64_t seed);

struct DjSummary {
  double r;
  double p_x0;
  std::size_t trials;
  std::size_t classified_constant;
  std::size_t classified_balanced;
  /// Error rate under the class implied by r (r = 0 balanced, |r| = P constant).
  std::optional<double> misclassification_rate;
  /// 1 - erf^2(2 P delta), the analytic error rate for a constant function.
  double analytic_constant_error;
};

/// Single-shot classification of step(r) repeated `trials` times at phi = pi/2.
DjSummary dj_trials(const ProcedureParams& p, double r, std::size_t trials, std::uint64_t seed);

struct AuditRow {
  double phi;
  FisherReport fisher;
  /// delta phi * sqrt(F); absent where either is undefined or F = 0.
  std::optional<double> crb_product;
  bool crb_saturated;
  /// F >= (1 - 1e-3) * 16 (Delta H)^2.
  bool qfi_saturated;
};

std::vector<AuditRow> heisenberg_audit(const ProcedureParams& p, double r, const std::vector<double>& phis);

}  // namespace cvdj
