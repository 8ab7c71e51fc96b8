#include <doctest.h>

#include <cmath>
#include <numbers>

#include "binmodel/error.hpp"
#include "binmodel/experiments.hpp"
#include "binmodel/solve.hpp"

using namespace binmodel;
using doctest::Approx;
constexpr double pi = std::numbers::pi;

namespace {

double threshold(Study s, double x, const FixedParams& fx, const DetectionParams& p,
                 const QuadratureOptions& q = {}) {
  const PreparedCondition c(build_condition(s, x, fx), PeripheryFilter{}, q);
  return solve_threshold(c, p).threshold;
}

}  // namespace

TEST_CASE("N0Spi and N0S0 with the Robinson-Jeffress parameters") {
  const DetectionParams p{0.92, 0.31, 0.76, 1.0};
  FixedParams spi;
  spi.tone_ipd = pi;
  const PreparedCondition c(build_condition(Study::Robinson1963, 1.0, spi), PeripheryFilter{});
  const auto r = solve_threshold(c, p);
  CHECK(r.converged);
  CHECK_FALSE(r.clamped);
  CHECK(r.threshold == Approx(-25.021166436756335).epsilon(1e-8));
  CHECK(dprime_total(r.d_bin, r.d_mon) == Approx(1.0).epsilon(1e-9));
  CHECK(threshold(Study::Robinson1963, 1.0, {}, p) == Approx(-11.758024958726939).epsilon(1e-8));
}

TEST_CASE("Pollack correlation increment") {
  const DetectionParams p{0.92, 0.42, std::nullopt, 1.0};
  const PreparedCondition c(build_condition(Study::Pollack1959, 0.0), PeripheryFilter{});
  CHECK(c.ordinate() == Ordinate::DeltaRho);
  const auto r = solve_threshold(c, p);
  CHECK(r.threshold == Approx(0.43144612174464947).epsilon(1e-8));
  CHECK(r.d_mon == 0.0);
  // the largest increment still allowed at rho = 0.95 is too small
  const PreparedCondition high(build_condition(Study::Pollack1959, 0.95), PeripheryFilter{});
  CHECK_THROWS_AS(solve_threshold(high, p), NoThreshold);
}

TEST_CASE("ITD families against the reference values") {
  FixedParams spi;
  CHECK(threshold(Study::Langford1964, 1.5e-3, spi, {0.95, 0.33, 0.70, 1.0}) ==
        Approx(-20.652475762035728).epsilon(1e-8));
  FixedParams b20;
  b20.rho_n = 0.992;
  b20.bandwidth_hz = 100.0;
  CHECK(threshold(Study::Bernstein2020, 1e-3, b20, {0.89, 0.52, 0.93, 1.0}) ==
        Approx(-10.812839958447569).epsilon(1e-8));
}

TEST_CASE("threshold is invariant under quadrature refinement") {
  QuadratureOptions fine;
  fine.extra_doublings = 2;
  const DetectionParams p{0.95, 0.33, 0.70, 1.0};
  for (double dt : {0.7e-3, 3.3e-3, 8.9e-3}) {
    CHECK(threshold(Study::Langford1964, dt, {}, p, fine) ==
          Approx(threshold(Study::Langford1964, dt, {}, p)).epsilon(1e-9));
  }
}

TEST_CASE("bracket handling") {
  const DetectionParams p{0.92, 0.31, 0.76, 1.0};
  FixedParams spi;
  spi.tone_ipd = pi;
  const PreparedCondition c(build_condition(Study::Robinson1963, 1.0, spi), PeripheryFilter{});
  SolverOptions narrow;
  narrow.snr_lo_db = -20.0;
  const auto clamped = solve_threshold(c, p, narrow);
  CHECK(clamped.clamped);
  CHECK(clamped.threshold == -20.0);

  SolverOptions low;
  low.snr_hi_db = -40.0;
  CHECK(solve_threshold(c, p, low).threshold == Approx(-25.021166436756335).epsilon(1e-8));
  low.expand_db = 5.0;
  CHECK_THROWS_AS(solve_threshold(c, p, low), NoThreshold);

  DetectionParams bad = p;
  bad.rho_hat = 1.5;
  CHECK_THROWS_AS(solve_threshold(c, bad), InvalidParameter);
}

TEST_CASE("gamma at zero snr equals the reference") {
  const PreparedCondition c(build_condition(Study::Langford1964, 2.3e-3), PeripheryFilter{});
  CHECK(std::abs(c.gamma_target(-300.0).value() - c.gamma_reference().value()) < 1e-12);
  CHECK(c.gamma_reference().argument() == Approx(0.3 * pi));
}

TEST_CASE("d' is non-decreasing in snr for every built-in condition") {
  const RunOptions run;
  for (const auto& def : builtin_experiments()) {
    if (def.ordinate != Ordinate::SnrDb) continue;
    for (const auto& cond : def.conditions) {
      const auto p = condition_params(def.table1_params, cond);
      for (double x : def.sweep) {
        const PreparedCondition c(def.build(cond, x), run.filter, run.quadrature);
        double prev = -1.0;
        bool ok = true;
        for (double db = -60.0; db <= 20.0; db += 0.5) {
          const double d = c.dprime(db, p).total();
          if (d < prev - 1e-12) ok = false;
          prev = d;
        }
        CAPTURE(def.name);
        CAPTURE(cond.label);
        CAPTURE(x);
        CHECK(ok);
      }
    }
  }
}

TEST_CASE("dB conversions") {
  CHECK(db_to_linear(10.0) == Approx(10.0));
  CHECK(linear_to_db(0.01) == Approx(-20.0));
}

TEST_CASE("coherence is converged and bounded for every built-in condition") {
  QuadratureOptions fine;
  fine.extra_doublings = 1;
  for (const auto& def : builtin_experiments()) {
    for (const auto& cond : def.conditions) {
      for (double x : def.sweep) {
        const auto pair = def.build(cond, x);
        const PreparedCondition a(pair, PeripheryFilter{});
        const PreparedCondition b(pair, PeripheryFilter{}, fine);
        CAPTURE(def.name);
        CAPTURE(cond.label);
        CAPTURE(x);
        CHECK(std::abs(a.gamma_reference().value() - b.gamma_reference().value()) < 1e-8);
        CHECK(a.gamma_reference().modulus() <= 1.0 + 1e-12);
        CHECK(a.gamma_target(0.0).modulus() <= 1.0 + 1e-12);
      }
    }
  }
}
