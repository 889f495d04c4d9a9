#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "cvdj/analytic.hpp"
#include "cvdj/errors.hpp"
#include "cvdj/experiments.hpp"
#include "cvdj/grid.hpp"
#include "cvdj/quadrature.hpp"

namespace cvdj::cli {

namespace {

using json = nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;
constexpr double kFiniteDifferenceStep = 1e-5;
constexpr int kDefaultCellsPerP = 256;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  if (pos != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
json opt(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

double parse_scaled(const std::string& token, double big_p) {
  std::string t = trim(token);
  if (t.empty()) throw std::invalid_argument("empty value");
  double den = 1.0;
  if (const auto slash = t.find('/'); slash != std::string::npos) {
    den = parse_number(trim(t.substr(slash + 1)));
    if (den == 0.0) throw std::invalid_argument("division by zero in '" + token + "'");
    t = trim(t.substr(0, slash));
  }
  double scale = 1.0;
  bool symbolic = false;
  if (ends_with(t, "pi")) {
    scale = kPi;
    symbolic = true;
    t.erase(t.size() - 2);
  } else if (ends_with(t, "P")) {
    scale = big_p;
    symbolic = true;
    t.pop_back();
  }
  if (symbolic && !t.empty() && t.back() == '*') t.pop_back();
  double coef = 1.0;
  if (symbolic) {
    if (t == "-") {
      coef = -1.0;
    } else if (!t.empty() && t != "+") {
      coef = parse_number(t);
    }
  } else {
    coef = parse_number(t);
  }
  return coef * scale / den;
}

std::vector<double> parse_axis(const std::string& spec, double big_p) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) throw std::invalid_argument("axis must be start:stop:count, got '" + spec + "'");
  const double start = parse_scaled(parts[0], big_p);
  const double stop = parse_scaled(parts[1], big_p);
  const double count_d = parse_number(trim(parts[2]));
  if (count_d < 2 || count_d != std::floor(count_d)) throw std::invalid_argument("axis count must be an integer >= 2");
  const auto count = static_cast<std::size_t>(count_d);
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = i + 1 == count ? stop : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return out;
}

namespace {

struct Engines {
  bool analytic = false;
  bool quadrature = false;
  bool grid = false;
  int count() const { return int(analytic) + int(quadrature) + int(grid); }
};

Engines select(Engine e) {
  switch (e) {
    case Engine::kAnalytic:
      return {true, false, false};
    case Engine::kQuadrature:
      return {false, true, false};
    case Engine::kGrid:
      return {false, false, true};
    case Engine::kAll:
      return {true, true, true};
  }
  return {};
}

std::optional<double> fd_fisher(const std::function<double(double)>& prob, double x, double h) {
  const double p0 = prob(x);
  const double v = p0 * (1.0 - p0);
  if (!(v > 0.0)) return std::nullopt;
  const double d = (prob(x + h) - prob(x - h)) / (2.0 * h);
  return d * d / v;
}

double max_pairwise(const std::vector<double>& v) {
  double m = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) m = std::max(m, std::abs(v[i] - v[j]));
  return m;
}

Table sweep_prob(const SweepRequest& req, const std::vector<double>& phis) {
  const Engines en = select(req.engine);
  std::vector<std::string> cols = {"phi", "r"};
  if (en.analytic) cols.push_back("p_analytic");
  if (en.quadrature) cols.push_back("p_quadrature");
  if (en.grid) cols.push_back("p_grid");
  if (en.count() > 1) cols.push_back("max_pairwise_dev");
  Table t(cols);
  const auto& p = req.params;
  for (double r : req.rs) {
    const auto f = PiecewiseBinaryFunction::step(r, p.big_p);
    for (double phi : phis) {
      json row = {{"phi", phi}, {"r", r}};
      std::vector<double> vals;
      if (en.analytic) vals.push_back(row["p_analytic"] = prob_x0(p, r, phi).p_x0());
      if (en.quadrature) vals.push_back(row["p_quadrature"] = prob_x0_quadrature(p, f, phi).value);
      if (en.grid) vals.push_back(row["p_grid"] = run_circuit(p, f, phi, req.grid_n).p_x0());
      if (en.count() > 1) row["max_pairwise_dev"] = max_pairwise(vals);
      t.add_row(std::move(row));
    }
  }
  return t;
}

Table sweep_fisher_phi(const SweepRequest& req) {
  const Engines en = select(req.engine);
  std::vector<std::string> cols = {"phi", "r", "fisher", "status", "variance_bound", "mean_bound_f", "mean_bound_2f",
                                   "delta_phi"};
  if (en.quadrature) cols.push_back("fisher_quadrature");
  if (en.grid) cols.push_back("fisher_grid");
  const bool compare = en.quadrature || en.grid;
  if (compare) cols.push_back("max_pairwise_dev");
  Table t(cols);
  const auto& p = req.params;
  for (double r : req.rs) {
    const auto f = PiecewiseBinaryFunction::step(r, p.big_p);
    for (double phi : req.phis) {
      const FisherReport rep = fisher_phi(p, r, phi);
      json row = {{"phi", phi},
                  {"r", r},
                  {"fisher", num(rep.fisher)},
                  {"status", to_string(rep.status)},
                  {"variance_bound", rep.variance_bound},
                  {"mean_bound_f", rep.mean_bound_diagnostic},
                  {"mean_bound_2f", rep.mean_bound_doubled},
                  {"delta_phi", opt(rep.delta_phi)}};
      std::vector<double> vals = {rep.fisher};
      bool comparable = rep.status == LimitStatus::kRegular;
      if (en.quadrature) {
        const auto fq = fd_fisher([&](double x) { return prob_x0_quadrature(p, f, x).value; }, phi,
                                  kFiniteDifferenceStep);
        row["fisher_quadrature"] = opt(fq);
        if (fq) vals.push_back(*fq);
        comparable = comparable && fq.has_value();
      }
      if (en.grid) {
        // Truncated momentum domain: F near its dips is set by the 1 - E mass
        // outside [-P, P], which the extended (unitary) grid would keep.
        const auto fg = fd_fisher(
            [&](double x) { return run_circuit(p, f, x, req.grid_n, MomentumDomain::kTruncated).p_x0(); }, phi,
            kFiniteDifferenceStep);
        row["fisher_grid"] = opt(fg);
        if (fg) vals.push_back(*fg);
        comparable = comparable && fg.has_value();
      }
      if (compare) row["max_pairwise_dev"] = comparable ? json(max_pairwise(vals)) : json(nullptr);
      t.add_row(std::move(row));
    }
  }
  return t;
}

Table sweep_fisher_r(const SweepRequest& req) {
  const Engines en = select(req.engine);
  if (req.engine == Engine::kGrid) {
    throw UsageError("fisher_r: the grid engine is piecewise constant in r between momentum nodes; use analytic or quadrature");
  }
  std::vector<std::string> cols = {"r", "phi", "fisher", "status"};
  if (en.quadrature) cols.insert(cols.end(), {"fisher_quadrature", "max_pairwise_dev"});
  Table t(cols);
  const auto& p = req.params;
  const double h = kFiniteDifferenceStep;
  for (double phi : req.phis) {
    for (double r : req.rs) {
      const FisherValue fv = fisher_r(p, r, phi);
      json row = {{"r", r}, {"phi", phi}, {"fisher", num(fv.value)}, {"status", to_string(fv.status)}};
      if (en.quadrature) {
        std::optional<double> fq;
        if (std::abs(r) + h <= p.big_p && std::abs(r) > h) {
          fq = fd_fisher(
              [&](double x) { return prob_x0_quadrature(p, PiecewiseBinaryFunction::step(x, p.big_p), phi).value; }, r,
              h);
        }
        row["fisher_quadrature"] = opt(fq);
        row["max_pairwise_dev"] =
            fq && fv.status == LimitStatus::kRegular ? json(std::abs(*fq - fv.value)) : json(nullptr);
      }
      t.add_row(std::move(row));
    }
  }
  return t;
}

Table sweep_delta_phi(const SweepRequest& req) {
  Table t({"phi", "delta_phi", "fisher", "crb_product"});
  for (double phi : req.phis) {
    const double fisher = fisher_phi(req.params, 0.0, phi).fisher;
    json row = {{"phi", phi}, {"delta_phi", nullptr}, {"fisher", fisher}, {"crb_product", nullptr}};
    try {
      const double d = delta_phi(req.params, phi);
      row["delta_phi"] = d;
      row["crb_product"] = d * std::sqrt(fisher);
    } catch (const SingularityError&) {
    }
    t.add_row(std::move(row));
  }
  return t;
}

Table sweep_audit(const SweepRequest& req) {
  Table t({"r", "phi", "fisher", "status", "variance_bound", "mean_bound_f", "mean_bound_2f", "delta_phi",
           "crb_product", "crb_saturated", "qfi_saturated"});
  for (double r : req.rs) {
    for (const auto& a : heisenberg_audit(req.params, r, req.phis)) {
      std::optional<double> dphi;
      if (a.crb_product && a.fisher.fisher > 0.0) dphi = *a.crb_product / std::sqrt(a.fisher.fisher);
      t.add_row({{"r", r},
                 {"phi", a.phi},
                 {"fisher", num(a.fisher.fisher)},
                 {"status", to_string(a.fisher.status)},
                 {"variance_bound", a.fisher.variance_bound},
                 {"mean_bound_f", a.fisher.mean_bound_diagnostic},
                 {"mean_bound_2f", a.fisher.mean_bound_doubled},
                 {"delta_phi", opt(dphi)},
                 {"crb_product", opt(a.crb_product)},
                 {"crb_saturated", a.crb_saturated},
                 {"qfi_saturated", a.qfi_saturated}});
    }
  }
  return t;
}

Table sweep_gap(const SweepRequest& req) {
  Table t({"phi", "p_delta", "signed_gap", "gap", "prediction", "ratio"});
  for (double phi : req.phis) {
    const StepHatGap g = step_hat_gap(req.params, phi);
    t.add_row({{"phi", phi},
               {"p_delta", req.params.p_delta()},
               {"signed_gap", g.signed_gap},
               {"gap", g.gap},
               {"prediction", g.leading_order_prediction},
               {"ratio", opt(g.ratio)}});
  }
  return t;
}

}  // namespace

Table run_sweep(const SweepRequest& req) {
  switch (req.quantity) {
    case Quantity::kProb:
      return sweep_prob(req, req.phis);
    case Quantity::kDj:
      return sweep_prob(req, {kPi / 2.0});
    case Quantity::kFisherPhi:
      return sweep_fisher_phi(req);
    case Quantity::kFisherR:
      return sweep_fisher_r(req);
    case Quantity::kDeltaPhi:
      return sweep_delta_phi(req);
    case Quantity::kAudit:
      return sweep_audit(req);
    case Quantity::kGap:
      return sweep_gap(req);
  }
  throw std::logic_error("unknown quantity");
}

double max_deviation(const Table& t) {
  double m = 0.0;
  for (const auto& row : t.rows()) {
    const auto it = row.find("max_pairwise_dev");
    if (it != row.end() && it->is_number()) m = std::max(m, it->get<double>());
  }
  return m;
}

// ---------------------------------------------------------------------------
// Command-line layer

namespace {

struct Options {
  double delta = 1.0 / std::numbers::sqrt2;
  // NaN marks "not given".
  double big_p = std::nan("");
  double big_t = std::nan("");
  double x0 = 0.0;
  double epsilon = std::nan("");
  std::vector<std::string> r;
  std::vector<std::string> phi;
  std::string r_range;
  std::string phi_range;
  std::size_t grid_n = 4096;
  std::size_t trials = 100000;
  std::size_t replicas = 2000;
  std::size_t shots = 100;
  std::uint64_t seed = 1;
  Engine engine = Engine::kAnalytic;
  Quantity quantity = Quantity::kProb;
  Format format = Format::kCsv;
  std::string out;
  double tol = 1e-4;
  bool fig4 = false;
  bool fig5 = false;
};

const std::map<std::string, Engine> kEngines = {
    {"analytic", Engine::kAnalytic}, {"quadrature", Engine::kQuadrature}, {"grid", Engine::kGrid}, {"all", Engine::kAll}};
const std::map<std::string, Format> kFormats = {{"csv", Format::kCsv}, {"json", Format::kJson}};
const std::map<std::string, Quantity> kQuantities = {
    {"prob", Quantity::kProb},       {"fisher_phi", Quantity::kFisherPhi}, {"fisher_r", Quantity::kFisherR},
    {"dj", Quantity::kDj},           {"delta_phi", Quantity::kDeltaPhi},   {"audit", Quantity::kAudit},
    {"gap", Quantity::kGap}};

void add_param_flags(CLI::App* app, Options& o) {
  app->add_option("--delta", o.delta, "Register Gaussian width (default 1/sqrt(2))");
  app->add_option("--big-p", o.big_p, "Momentum half-domain P (default 3/(2 delta))");
  app->add_option("--big-t", o.big_t, "Position half-domain T (default pi*256/(2P): momentum cells of P/256)");
  app->add_option("--x0", o.x0, "Centre of the register Gaussian");
  app->add_option("--epsilon", o.epsilon, "Measurement width (default delta)");
  app->add_option("--format", o.format, "Output format: csv or json")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
  app->add_option("--out", o.out, "Write the table to this file instead of stdout");
}

void add_r_flags(CLI::App* app, Options& o, const std::string& help) {
  app->add_option("--r", o.r, help + " (accepts P/8, -P, 0.3, ...)")->delimiter(',');
}

void add_phi_flags(CLI::App* app, Options& o, const std::string& help) {
  app->add_option("--phi", o.phi, help + " (accepts pi/4, 3pi/8, 0.7, ...)")->delimiter(',');
}

void add_engine_flags(CLI::App* app, Options& o) {
  app->add_option("--engine", o.engine, "analytic, quadrature, grid or all")
      ->transform(CLI::CheckedTransformer(kEngines, CLI::ignore_case));
  app->add_option("--grid-n", o.grid_n, "Grid points for the grid engine (power of two >= 256)");
}

ProcedureParams resolve_params(const Options& o, bool figure_preset) {
  ProcedureParams p;
  p.delta = figure_preset ? 1.0 / std::numbers::sqrt2 : o.delta;
  p.big_p = (!figure_preset && !std::isnan(o.big_p)) ? o.big_p : 3.0 / (2.0 * p.delta);
  p.big_t = !std::isnan(o.big_t) ? o.big_t : aligned_half_domain(p.big_p, kDefaultCellsPerP);
  p.x0 = o.x0;
  if (!std::isnan(o.epsilon)) p.epsilon = o.epsilon;
  const auto report = validate_params(p);
  if (!report.ok()) {
    std::string msg = "invalid parameters:";
    for (const auto& i : report.issues)
      if (i.severity == Severity::kError) msg += " " + i.message + ";";
    throw UsageError(msg);
  }
  return p;
}

std::vector<double> values_or(const std::vector<std::string>& tokens, const std::string& range,
                              const std::vector<double>& fallback, double big_p) {
  if (!tokens.empty() && !range.empty()) throw UsageError("give either explicit values or a range, not both");
  if (!range.empty()) return parse_axis(range, big_p);
  if (tokens.empty()) return fallback;
  std::vector<double> out;
  for (const auto& t : tokens) out.push_back(parse_scaled(t, big_p));
  return out;
}

std::vector<double> fig4_rs(double big_p) { return {0.0, big_p / 8.0, big_p / 4.0, big_p / 2.0, big_p}; }
std::vector<double> fig5_phis() { return {kPi / 2.0, 5.0 * kPi / 12.0, kPi / 3.0, kPi / 4.0, kPi / 8.0}; }

// 100 points strictly inside (0, P).
std::vector<double> open_r_grid(double big_p) {
  std::vector<double> out(100);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = big_p * static_cast<double>(k + 1) / 101.0;
  return out;
}

void emit(const Table& t, const Options& o, std::ostream& out) {
  if (o.out.empty()) {
    t.write(out, o.format);
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file " + o.out);
  t.write(file, o.format);
}

const char* truth_label(double r, double big_p) {
  if (r == 0.0) return "balanced";
  if (std::abs(r) == big_p) return "constant";
  return "neither";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"cvdj: phase estimation and Deutsch-Jozsa decisions with semi-Gaussian continuous variables"};
  app.name("cvdj");
  app.require_subcommand(1);
  Options o;

  auto* validate = app.add_subcommand("validate", "Check a parameter set and report regime warnings");
  add_param_flags(validate, o);

  auto* sweep = app.add_subcommand("sweep", "Tabulate one quantity over phi and/or r grids");
  add_param_flags(sweep, o);
  add_engine_flags(sweep, o);
  sweep->add_option("--quantity", o.quantity, "prob, fisher_phi, fisher_r, dj, delta_phi, audit or gap")
      ->transform(CLI::CheckedTransformer(kQuantities, CLI::ignore_case))
      ->required();
  add_r_flags(sweep, o, "Step positions");
  add_phi_flags(sweep, o, "Phase values");
  sweep->add_option("--r-range", o.r_range, "r axis as start:stop:count");
  sweep->add_option("--phi-range", o.phi_range, "phi axis as start:stop:count");

  auto* fphi = app.add_subcommand(
      "fisher-phi", "F(phi) curves. Columns: phi,r,fisher,status,variance_bound,mean_bound_f,mean_bound_2f,delta_phi"
                    "[,fisher_quadrature][,fisher_grid][,max_pairwise_dev]");
  add_param_flags(fphi, o);
  add_engine_flags(fphi, o);
  add_r_flags(fphi, o, "Step positions (default 0,P/8,P/4,P/2,P)");
  fphi->add_option("--phi-range", o.phi_range, "phi axis as start:stop:count (default 0:pi:129)");
  auto* fig4_flag = fphi->add_flag("--fig4", o.fig4, "delta = 1/sqrt(2), P = 3/(2 delta), r in {0,P/8,P/4,P/2,P}");
  fig4_flag->excludes("--delta")->excludes("--big-p")->excludes("--r");

  auto* fr = app.add_subcommand("fisher-r",
                                "F(r) curves. Columns: r,phi,fisher,status[,fisher_quadrature,max_pairwise_dev]");
  add_param_flags(fr, o);
  add_engine_flags(fr, o);
  add_phi_flags(fr, o, "Phase values (default pi/2,5pi/12,pi/3,pi/4,pi/8)");
  fr->add_option("--r-range", o.r_range, "r axis as start:stop:count (default 100 points inside (0, P))");
  auto* fig5_flag = fr->add_flag("--fig5", o.fig5, "delta = 1/sqrt(2), P = 3/(2 delta), five phi curves");
  fig5_flag->excludes("--delta")->excludes("--big-p")->excludes("--phi");

  auto* dj = app.add_subcommand(
      "dj", "Single-shot Deutsch-Jozsa decisions at phi = pi/2. Columns: r,truth,p_x0,trials,classified_constant,"
            "classified_balanced,misclassification_rate,analytic_constant_error");
  add_param_flags(dj, o);
  add_r_flags(dj, o, "Step positions (default 0,P)");
  dj->add_option("--trials", o.trials, "Shots per step position");
  dj->add_option("--seed", o.seed, "Master seed");

  auto* est = app.add_subcommand(
      "estimate", "Replicated maximum-likelihood estimation of phi. Columns: phi_true,r,shots,replicas,mean_phi_hat,"
                  "empirical_mse,crb,mse_over_crb,exact_mse");
  add_param_flags(est, o);
  add_r_flags(est, o, "Step position (default 0)");
  add_phi_flags(est, o, "True phase values (default pi/4)");
  est->add_option("--shots", o.shots, "Shots per replica");
  est->add_option("--replicas", o.replicas, "Number of replicas");
  est->add_option("--seed", o.seed, "Master seed");

  auto* cross = app.add_subcommand(
      "crosscheck", "Compare analytic, quadrature and grid p(x0|phi). Columns: phi,r,p_analytic,p_quadrature,p_grid,"
                    "max_pairwise_dev. Exit 3 if any deviation exceeds --tol");
  add_param_flags(cross, o);
  add_r_flags(cross, o, "Step positions (default 0,P/8,P/4,P/2,P)");
  add_phi_flags(cross, o, "Phase values");
  cross->add_option("--phi-range", o.phi_range, "phi axis as start:stop:count (default 0:pi:17)");
  cross->add_option("--grid-n", o.grid_n, "Grid points for the grid engine");
  cross->add_option("--tol", o.tol, "Maximum allowed pairwise deviation");

  std::vector<const char*> argv = {"cvdj"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (validate->parsed()) {
      const ProcedureParams p = resolve_params(o, false);
      Table t({"severity", "code", "message"});
      for (const auto& i : validate_params(p).issues) {
        const char* sev = i.severity == Severity::kError ? "error" : i.severity == Severity::kWarning ? "warning" : "info";
        t.add_row({{"severity", sev}, {"code", i.code}, {"message", i.message}});
      }
      emit(t, o, out);
      return kExitOk;
    }

    if (sweep->parsed() || fphi->parsed() || fr->parsed()) {
      SweepRequest req;
      req.params = resolve_params(o, o.fig4 || o.fig5);
      req.engine = o.engine;
      req.grid_n = o.grid_n;
      const double big_p = req.params.big_p;
      const auto default_phis = parse_axis("0:pi:129", big_p);
      if (fphi->parsed()) {
        req.quantity = Quantity::kFisherPhi;
        req.rs = values_or(o.r, "", fig4_rs(big_p), big_p);
        req.phis = values_or({}, o.phi_range, default_phis, big_p);
      } else if (fr->parsed()) {
        req.quantity = Quantity::kFisherR;
        req.phis = values_or(o.phi, "", fig5_phis(), big_p);
        req.rs = values_or({}, o.r_range, open_r_grid(big_p), big_p);
      } else {
        req.quantity = o.quantity;
        req.rs = values_or(o.r, o.r_range, req.quantity == Quantity::kFisherR ? open_r_grid(big_p) : fig4_rs(big_p),
                           big_p);
        req.phis = values_or(o.phi, o.phi_range, default_phis, big_p);
      }
      emit(run_sweep(req), o, out);
      return kExitOk;
    }

    if (dj->parsed()) {
      const ProcedureParams p = resolve_params(o, false);
      const auto rs = values_or(o.r, "", {0.0, p.big_p}, p.big_p);
      if (o.trials == 0) throw UsageError("--trials must be >= 1");
      Table t({"r", "truth", "p_x0", "trials", "classified_constant", "classified_balanced", "misclassification_rate",
               "analytic_constant_error"});
      for (std::size_t i = 0; i < rs.size(); ++i) {
        const DjSummary s = dj_trials(p, rs[i], o.trials, replica_seed(o.seed, i));
        t.add_row({{"r", s.r},
                   {"truth", truth_label(s.r, p.big_p)},
                   {"p_x0", s.p_x0},
                   {"trials", s.trials},
                   {"classified_constant", s.classified_constant},
                   {"classified_balanced", s.classified_balanced},
                   {"misclassification_rate", opt(s.misclassification_rate)},
                   {"analytic_constant_error", s.analytic_constant_error}});
      }
      emit(t, o, out);
      return kExitOk;
    }

    if (est->parsed()) {
      const ProcedureParams p = resolve_params(o, false);
      const auto rs = values_or(o.r, "", {0.0}, p.big_p);
      const auto phis = values_or(o.phi, "", {kPi / 4.0}, p.big_p);
      if (o.shots == 0 || o.replicas == 0) throw UsageError("--shots and --replicas must be >= 1");
      Table t({"phi_true", "r", "shots", "replicas", "mean_phi_hat", "empirical_mse", "crb", "mse_over_crb",
               "exact_mse"});
      for (double r : rs) {
        for (double phi : phis) {
          const EstimationStudy s = estimation_study(p, r, phi, o.shots, o.replicas, o.seed);
          t.add_row({{"phi_true", s.phi_true},
                     {"r", r},
                     {"shots", s.shots},
                     {"replicas", s.replicas},
                     {"mean_phi_hat", s.mean_phi_hat},
                     {"empirical_mse", s.empirical_mse},
                     {"crb", num(s.crb)},
                     {"mse_over_crb", num(s.empirical_mse / s.crb)},
                     {"exact_mse", s.exact_mse}});
        }
      }
      emit(t, o, out);
      return kExitOk;
    }

    if (cross->parsed()) {
      SweepRequest req;
      req.params = resolve_params(o, false);
      req.quantity = Quantity::kProb;
      req.engine = Engine::kAll;
      req.grid_n = o.grid_n;
      const double big_p = req.params.big_p;
      req.rs = values_or(o.r, "", fig4_rs(big_p), big_p);
      req.phis = values_or(o.phi, o.phi_range, parse_axis("0:pi:17", big_p), big_p);
      const Table t = run_sweep(req);
      emit(t, o, out);
      const double dev = max_deviation(t);
      err << "max pairwise deviation " << format_double(dev) << " (tol " << format_double(o.tol) << ")\n";
      return dev > o.tol ? kExitTolerance : kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace cvdj::cli
