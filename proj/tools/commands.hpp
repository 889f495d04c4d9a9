#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "cvdj/params.hpp"
#include "table.hpp"

namespace cvdj::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitTolerance = 3;

/// Parses "0.25", "pi/4", "3pi/8", "5*pi/12", "P/8", "-P" and similar.
/// `P` scales by big_p, `pi` by pi. Throws std::invalid_argument.
double parse_scaled(const std::string& token, double big_p);

/// "start:stop:count", endpoints inclusive, count >= 2.
std::vector<double> parse_axis(const std::string& spec, double big_p);

enum class Engine { kAnalytic, kQuadrature, kGrid, kAll };
enum class Quantity { kProb, kFisherPhi, kFisherR, kDj, kDeltaPhi, kAudit, kGap };

struct SweepRequest {
  Quantity quantity = Quantity::kProb;
  std::vector<double> phis;
  std::vector<double> rs;
  ProcedureParams params;
  Engine engine = Engine::kAnalytic;
  std::size_t grid_n = 4096;
};

/// Rows in grid order: r-major for phi sweeps, phi-major for r sweeps.
/// Multi-engine requests add one column per engine and max_pairwise_dev.
Table run_sweep(const SweepRequest& req);

/// Largest max_pairwise_dev in a table (nulls skipped).
double max_deviation(const Table& t);

/// Entry point shared by the executable and the tests.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cvdj::cli
