#include <doctest.h>

#include <cmath>
#include <numbers>

#include "binmodel/coherence.hpp"
#include "binmodel/error.hpp"
#include "binmodel/oracle.hpp"

using namespace binmodel;
using doctest::Approx;
constexpr double pi = std::numbers::pi;

namespace {

TokenEnsemble itd_ensemble(double dt, int tokens = 100) {
  TokenEnsemble e;
  e.n_tokens = tokens;
  e.spec.noise_phase = WaveformItd{dt};
  e.spec.bandwidth_hz = 900.0;
  return e;
}

}  // namespace

TEST_CASE("ensemble validation") {
  TokenEnsemble e;
  CHECK_NOTHROW(validate(e));
  e.spec.bandwidth_hz = 20.0;  // 40 bins at 2 s
  CHECK_THROWS_AS(validate(e), InvalidStimulus);
  e = {};
  e.spec.bandwidth_hz = 4000.0;  // beyond Nyquist at 4 kHz sampling
  CHECK_THROWS_AS(validate(e), InvalidStimulus);
  e = {};
  e.spec.center_hz = 500.25;
  e.spec.tone_ipd = pi;
  e.spec.snr = 1.0;
  CHECK_THROWS_AS(validate(e), InvalidStimulus);
  CHECK_THROWS_AS(synthesize_pair(TokenEnsemble{}, 100), InvalidParameter);
}

TEST_CASE("tokens are deterministic") {
  const auto e = itd_ensemble(1e-3, 3);
  const auto a = synthesize_pair(e, 2);
  const auto b = synthesize_pair(e, 2);
  CHECK(a.left == b.left);
  CHECK(a.right == b.right);
  const auto c = synthesize_pair(e, 1);
  CHECK(a.left != c.left);
  TokenEnsemble other = e;
  other.seed = 2;
  CHECK(synthesize_pair(other, 2).left != a.left);
}

TEST_CASE("fully correlated diotic noise gives identical channels") {
  TokenEnsemble e;
  e.n_tokens = 4;
  const auto p = synthesize_filtered_pair(e, PeripheryFilter{}, 0);
  CHECK(p.left == p.right);
  const auto g = empirical_coherence(e, PeripheryFilter{}, 1);
  CHECK(g.gamma.real() == Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(g.gamma.imag()) < 1e-12);
}

TEST_CASE("independent noise decorrelates") {
  TokenEnsemble e;
  e.n_tokens = 1;
  e.duration = 16.0;
  e.spec.rho_n = 0.0;
  const auto p = synthesize_pair(e, 0);
  CHECK(token_coherence(p.left, p.right).modulus() < 0.05);
  const auto ipd = instantaneous_ipd(p.left, p.right);
  CHECK(ipd.resultant_length() < 0.05);
}

TEST_CASE("synthesized noise has unit power") {
  TokenEnsemble e;
  e.n_tokens = 1;
  e.duration = 8.0;
  const auto p = synthesize_pair(e, 0);
  double pw = 0.0;
  for (const auto& v : p.left) pw += std::norm(v);
  CHECK(pw / p.left.size() == Approx(1.0).epsilon(0.05));
}

TEST_CASE("constant phase shift gives a constant IPD trajectory") {
  TokenEnsemble e;
  e.n_tokens = 1;
  e.spec.noise_phase = ConstantPhase{0.9};
  const auto p = synthesize_pair(e, 0);
  const auto t = instantaneous_ipd(p.left, p.right);
  REQUIRE_FALSE(t.ipd.empty());
  for (std::size_t i = 0; i < t.ipd.size(); i += 97) CHECK(t.ipd[i] == Approx(0.9).epsilon(1e-9));
  CHECK(t.circular_mean() == Approx(0.9));
  CHECK(t.resultant_length() == Approx(1.0));
}

TEST_CASE("zero samples are excluded") {
  std::vector<std::complex<double>> l{{1, 0}, {0, 0}, {0, 1}}, r{{0, 1}, {1, 0}, {0, 1}};
  const auto t = instantaneous_ipd(l, r);
  CHECK(t.excluded == 1);
  REQUIRE(t.ipd.size() == 2);
  CHECK(t.ipd[0] == Approx(pi / 2));
  CHECK(t.ipd[1] == Approx(0.0));
  std::vector<std::complex<double>> shorter{{1, 0}};
  CHECK_THROWS_AS(instantaneous_ipd(l, shorter), InvalidParameter);
}

TEST_CASE("2.3 ms delay matches the analytic coherence") {
  const auto e = itd_ensemble(2.3e-3);
  const auto rec = compare(e, PeripheryFilter{});
  CHECK(rec.pass);
  CHECK(rec.deviation < 0.01);
  CHECK(rec.empirical.gamma.argument() == Approx(0.3 * pi).epsilon(0.01 * pi / (0.3 * pi)));
  CHECK(rec.analytic.argument() == Approx(0.3 * pi).epsilon(1e-9));
  for (const auto& g : rec.empirical.per_token) CHECK(g.modulus() <= 1.0 + 1e-12);
}

TEST_CASE("circular mean IPD equals arg of the coherence") {
  for (double dt : {0.4e-3, 2.3e-3, -1.1e-3}) {
    auto e = itd_ensemble(dt, 1);
    e.duration = 16.0;
    const auto p = synthesize_filtered_pair(e, PeripheryFilter{}, 0);
    const double mean = instantaneous_ipd(p.left, p.right).circular_mean();
    const double arg = token_coherence(p.left, p.right).argument();
    CAPTURE(dt);
    CHECK(std::abs(std::remainder(mean - arg, 2 * pi)) < 0.02);
  }
}

TEST_CASE("narrowband N0Spi at snr 1 is near zero") {
  TokenEnsemble e;
  e.spec.bandwidth_hz = 25.0;
  e.spec.tone_ipd = pi;
  e.spec.snr = 1.0;
  const auto rec = compare(e, PeripheryFilter{});
  CHECK(rec.pass);
  CHECK(std::abs(rec.empirical.gamma.real()) < 3 * rec.empirical.standard_error() + 0.02);
}

TEST_CASE("a mismatched filter is detected") {
  const auto e = itd_ensemble(2.3e-3);
  CompareOptions opts;
  opts.analytic_filter = PeripheryFilter(500.0, 4, 200.0);
  const auto rec = compare(e, PeripheryFilter{}, opts);
  CHECK_FALSE(rec.pass);
  CHECK(rec.deviation > 0.1);
}

TEST_CASE("results do not depend on the thread count") {
  const auto e = itd_ensemble(1.7e-3, 12);
  const auto a = empirical_coherence(e, PeripheryFilter{}, 1);
  const auto b = empirical_coherence(e, PeripheryFilter{}, 3);
  CHECK(a.gamma.value() == b.gamma.value());
  CHECK(a.se_re == b.se_re);
}

TEST_CASE("standard error scales with the inverse root of the token count") {
  auto rms_se = [](int tokens) {
    double s = 0.0;
    const int seeds = 8;
    for (int seed = 1; seed <= seeds; ++seed) {
      auto e = itd_ensemble(2.3e-3, tokens);
      e.seed = static_cast<std::uint64_t>(seed);
      e.duration = 1.0;
      const double se = empirical_coherence(e, PeripheryFilter{}).standard_error();
      s += se * se;
    }
    return std::sqrt(s / seeds);
  };
  const double s25 = rms_se(25), s100 = rms_se(100), s400 = rms_se(400);
  CHECK(s25 / s100 == Approx(2.0).epsilon(0.2));
  CHECK(s100 / s400 == Approx(2.0).epsilon(0.2));
}
