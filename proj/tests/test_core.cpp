#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "cvdj/binary_function.hpp"
#include "cvdj/params.hpp"
#include "doctest.h"
#include "oracle_values.hpp"

using namespace cvdj;

namespace {

ProcedureParams preset() {
  const double d = 1.0 / std::numbers::sqrt2;
  return {0.0, d, 6.0, 3.0 / (2.0 * d), d};
}

}  // namespace

TEST_SUITE("core") {
  TEST_CASE("validate_params examples") {
    const auto ok = validate_params(preset());
    CHECK(ok.ok());
    CHECK_FALSE(ok.has_warnings());
    CHECK(ok.has("p_t_product"));

    auto zero = preset();
    zero.delta = 0.0;
    const auto bad = validate_params(zero);
    CHECK_FALSE(bad.ok());
    CHECK(bad.has("delta_nonpositive"));
    CHECK_THROWS_AS(require_valid(zero), std::invalid_argument);

    const ProcedureParams off{5.0, 1.0, 6.0, 1.5, std::nullopt};
    const auto warn = validate_params(off);
    CHECK(warn.ok());
    CHECK(warn.has("containment"));
    CHECK(off.containment_ratio() == doctest::Approx(1.0));
    CHECK_THROWS_AS(require_contained(off), std::domain_error);
  }

  TEST_CASE("validate_params flags every nonpositive field") {
    for (int field = 0; field < 4; ++field) {
      auto p = preset();
      (field == 0 ? p.delta : field == 1 ? p.big_t : field == 2 ? p.big_p : p.epsilon.emplace()) = -1.0;
      CHECK_FALSE(validate_params(p).ok());
    }
    auto p = preset();
    p.x0 = std::nan("");
    CHECK(validate_params(p).has("x0_nonfinite"));
  }

  TEST_CASE("regime warnings") {
    auto p = preset();
    p.big_p = 1.0;
    CHECK(validate_params(p).has("low_p_delta"));
    p = preset();
    p.epsilon = 0.3;
    CHECK(validate_params(p).has("epsilon_mismatch"));
    // Containment threshold sits exactly at 4.2.
    p = preset();
    p.big_t = 4.2 * p.delta;
    CHECK(p.contained());
    p.big_t = 4.19 * p.delta;
    CHECK_FALSE(p.contained());
  }

  TEST_CASE("default epsilon is delta") {
    ProcedureParams p{0.0, 0.3, 5.0, 5.0, std::nullopt};
    CHECK(p.eps() == 0.3);
  }

  TEST_CASE("normalization constants") {
    ProcedureParams p{0.0, 1.0, 1.0, 1.0, std::nullopt};
    CHECK(norm_x_sq(p) == doctest::Approx(oracle::kSqrtPiErf1).epsilon(1e-15));
    p.big_t = 0.0;
    CHECK(norm_x_sq(p) == 0.0);

    ProcedureParams wide{0.0, 0.5, 100.0, 100.0, std::nullopt};
    CHECK(norm_x_sq(wide) == doctest::Approx(std::sqrt(std::numbers::pi * 0.25)).epsilon(1e-15));
    CHECK(norm_p_sq(wide) == doctest::Approx(std::sqrt(std::numbers::pi / (4.0 * 0.25))).epsilon(1e-15));

    // Monotone in T and P, symmetric in x0.
    ProcedureParams q{0.4, 0.7, 1.0, 0.5, std::nullopt};
    double prev_x = 0.0;
    double prev_p = 0.0;
    for (int i = 1; i <= 20; ++i) {
      q.big_t = 0.25 * i;
      q.big_p = 0.25 * i;
      // Strict while the Gaussian still reaches the edges; erf saturates later.
      if (i <= 8) {
        CHECK(norm_x_sq(q) > prev_x);
        CHECK(norm_p_sq(q) > prev_p);
      }
      CHECK(norm_x_sq(q) >= prev_x);
      CHECK(norm_p_sq(q) >= prev_p);
      prev_x = norm_x_sq(q);
      prev_p = norm_p_sq(q);
      auto mirrored = q;
      mirrored.x0 = -q.x0;
      CHECK(norm_x_sq(mirrored) == doctest::Approx(norm_x_sq(q)).epsilon(1e-15));
    }
    const auto c = normalization_constants(preset());
    CHECK(c.nx_sq == norm_x_sq(preset()));
    CHECK(c.np_sq == norm_p_sq(preset()));
  }

  TEST_CASE("measurement distribution sums to one") {
    for (double v : {-0.5, 0.0, 0.3, 0.9999558, 1.0, 2.0}) {
      const auto d = MeasurementDistribution::from_p_x0(v);
      CHECK(d.p_x0() >= 0.0);
      CHECK(d.p_not_x0() >= 0.0);
      CHECK(d.p_x0() + d.p_not_x0() == 1.0);
    }
  }

  TEST_CASE("f_eval examples") {
    const double big_p = 2.0;
    const auto s0 = PiecewiseBinaryFunction::step(0.0, big_p);
    CHECK(f_eval(s0, 0.5) == 1);
    CHECK(f_eval(s0, -0.5) == 0);
    CHECK(f_eval(s0, 0.0) == 0);
    const auto sp = PiecewiseBinaryFunction::step(big_p, big_p);
    for (double y : {-2.0, -1.0, 0.0, 1.0, 2.0}) CHECK(f_eval(sp, y) == 0);
    const auto sm = PiecewiseBinaryFunction::step(-big_p, big_p);
    for (double y : {-1.999, 0.0, 2.0}) CHECK(f_eval(sm, y) == 1);
    CHECK(sm.measure_of_ones() == doctest::Approx(2.0 * big_p));
    const auto hat = PiecewiseBinaryFunction::hat(-big_p / 2.0, big_p / 2.0, big_p);
    CHECK(f_eval(hat, 0.0) == 1);
    CHECK(f_eval(hat, 0.9 * big_p) == 0);
    CHECK(f_eval(hat, big_p / 2.0) == 1);
    CHECK(f_eval(hat, -big_p / 2.0) == 0);
    CHECK_THROWS_AS(f_eval(s0, 2.5), std::out_of_range);
  }

  TEST_CASE("constructor validation") {
    CHECK_THROWS(PiecewiseBinaryFunction(1.0, {0.5, 0.2}, {0, 1, 0}));
    CHECK_THROWS(PiecewiseBinaryFunction(1.0, {1.5}, {0, 1}));
    CHECK_THROWS(PiecewiseBinaryFunction(1.0, {0.0}, {0, 2}));
    CHECK_THROWS(PiecewiseBinaryFunction(1.0, {0.0}, {0}));
    CHECK_THROWS(PiecewiseBinaryFunction(-1.0, {}, {0}));
    CHECK_THROWS(PiecewiseBinaryFunction::step(1.5, 1.0));
  }

  TEST_CASE("complement, balance and mirror properties") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
      const double r = u(rng);
      const auto f = PiecewiseBinaryFunction::step(r, 3.0);
      const auto g = PiecewiseBinaryFunction::reflected_step(r, 3.0);
      for (int k = 0; k < 40; ++k) {
        const double y = u(rng);
        CHECK(f_eval(f, y) + f_eval(g, y) == 1);
        CHECK(f_eval(f.complement(), y) == f_eval(g, y));
      }
      CHECK(f.measure_of_ones() + g.measure_of_ones() == doctest::Approx(6.0));
    }
    const auto b = PiecewiseBinaryFunction::step(0.0, 3.0);
    CHECK(b.measure_of_ones() == doctest::Approx(3.0));
    CHECK(b.complement().measure_of_ones() == doctest::Approx(3.0));
    // Mirroring step(r) puts the ones on y < -r.
    const auto m = PiecewiseBinaryFunction::step(1.0, 3.0).mirrored();
    CHECK(f_eval(m, -2.0) == 1);
    CHECK(f_eval(m, 0.0) == 0);
  }

  TEST_CASE("spurious breakpoint keeps values") {
    const auto f = PiecewiseBinaryFunction::hat(-0.5, 1.0, 2.0);
    const auto g = f.with_spurious_breakpoint(0.25);
    CHECK(g.breakpoints().size() == f.breakpoints().size() + 1);
    for (double y = -2.0; y <= 2.0; y += 0.01) CHECK(f_eval(f, y) == f_eval(g, y));
    CHECK(g.measure_of_ones() == doctest::Approx(f.measure_of_ones()));
    CHECK_FALSE(f.describe().empty());
  }

  TEST_CASE("segments cover the domain") {
    const auto f = PiecewiseBinaryFunction(2.0, {-1.0, 0.0, 1.5}, {1, 0, 1, 0});
    const auto segs = f.segments();
    REQUIRE(segs.size() == 4);
    CHECK(segs.front().lo == -2.0);
    CHECK(segs.back().hi == 2.0);
    for (std::size_t i = 1; i < segs.size(); ++i) CHECK(segs[i].lo == segs[i - 1].hi);
    CHECK(f.measure_of_ones() == doctest::Approx(1.0 + 1.5));
  }
}
