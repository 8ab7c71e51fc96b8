#include <doctest.h>

#include <cmath>
#include <numbers>

#include "binmodel/error.hpp"
#include "binmodel/stimulus.hpp"

using namespace binmodel;
using doctest::Approx;
constexpr double pi = std::numbers::pi;

TEST_CASE("phase spectra") {
  CHECK(phase_at(ConstantPhase{0.7}, 123.0, 500.0) == 0.7);
  CHECK(phase_at(WaveformItd{1e-3}, 500.0, 500.0) == Approx(pi));
  CHECK(phase_at(EnvelopeItd{1e-3}, 500.0, 500.0) == 0.0);
  CHECK(phase_at(EnvelopeItd{1e-3}, 750.0, 500.0) == Approx(pi / 2));
  CHECK(phase_cycles(ConstantPhase{1.0}, 900.0) == 0.0);
  CHECK(phase_cycles(WaveformItd{-2e-3}, 900.0) == Approx(1.8));
}

TEST_CASE("stimulus validation") {
  StimulusSpec s;
  CHECK_NOTHROW(validate(s));
  s.rho_n = 1.2;
  CHECK_THROWS_AS(validate(s), InvalidStimulus);
  s = {};
  s.bandwidth_hz = 0.0;
  CHECK_THROWS_AS(validate(s), InvalidStimulus);
  s = {};
  s.snr = -1.0;
  CHECK_THROWS_AS(validate(s), InvalidStimulus);
  s = {};
  s.noise_phase = WaveformItd{NAN};
  CHECK_THROWS_AS(validate(s), InvalidStimulus);
  s = {};
  s.tone_ipd = INFINITY;
  CHECK_THROWS_AS(validate(s), InvalidStimulus);
}

TEST_CASE("flat phase noise integral has modulus rho times gain") {
  PeripheryFilter f;
  for (double rho : {-1.0, -0.4, 0.0, 0.3, 1.0}) {
    StimulusSpec s;
    s.rho_n = rho;
    const auto t = cross_spectrum_terms(s, f);
    CHECK(std::abs(t.noise_integral) == Approx(std::abs(rho) * t.noise_gain).epsilon(1e-12));
    CHECK(t.power_per_side == t.noise_gain);
    CHECK(std::abs(t.tone_term) == 0.0);
  }
}

TEST_CASE("constant phase rotates the noise integral") {
  PeripheryFilter f;
  const auto u = unit_noise_integral(ConstantPhase{pi}, 500.0, 900.0, f);
  CHECK(u.real() == Approx(-0.08777764235936439).epsilon(1e-9));
  CHECK(std::abs(u.imag()) < 1e-12);
}

TEST_CASE("envelope delay keeps the real axis and the waveform delay modulus") {
  PeripheryFilter f;
  const auto env = unit_noise_integral(EnvelopeItd{2.3e-3}, 500.0, 900.0, f);
  const auto wf = unit_noise_integral(WaveformItd{2.3e-3}, 500.0, 900.0, f);
  CHECK(std::abs(env.imag()) < 1e-12);
  CHECK(std::abs(env) == Approx(std::abs(wf)).epsilon(1e-9));
  CHECK(std::arg(wf) == Approx(0.3 * pi).epsilon(1e-9));
}

TEST_CASE("tone term") {
  PeripheryFilter f;
  StimulusSpec s;
  s.tone_ipd = pi;
  s.snr = 2.0;
  const auto t = cross_spectrum_terms(s, f);
  CHECK(t.tone_term.real() == Approx(-2.0));
  CHECK(t.power_per_side == Approx(t.noise_gain + 2.0));
}

TEST_CASE("study names and aliases") {
  for (Study s : kAllStudies) CHECK(parse_study(study_name(s)) == s);
  CHECK(parse_study("rj1963") == Study::Robinson1963);
  CHECK(parse_study("VPK1999") == Study::VanDePar1999);
  CHECK_FALSE(parse_study("nosuch").has_value());
}

TEST_CASE("condition builder per family") {
  SUBCASE("pollack") {
    const auto c = build_condition(Study::Pollack1959, 0.5);
    CHECK(c.ordinate == Ordinate::DeltaRho);
    CHECK(c.reference.rho_n == 0.5);
    CHECK(c.reference.bandwidth_hz == 1000.0);
    CHECK_THROWS_AS(build_condition(Study::Pollack1959, 1.0), InvalidStimulus);
  }
  SUBCASE("robinson default tone is in phase") {
    const auto c = build_condition(Study::Robinson1963, -0.5);
    CHECK(c.ordinate == Ordinate::SnrDb);
    CHECK(*c.target.tone_ipd == 0.0);
    CHECK_FALSE(c.reference.has_tone());
    FixedParams fx;
    fx.tone_ipd = pi;
    CHECK(*build_condition(Study::Robinson1963, 0.0, fx).target.tone_ipd == pi);
    fx.rho_n = 0.5;
    CHECK_THROWS_AS(build_condition(Study::Robinson1963, 0.0, fx), InvalidStimulus);
  }
  SUBCASE("bernstein 2014 default tone is antiphasic") {
    FixedParams fx;
    fx.bandwidth_hz = 25.0;
    const auto c = build_condition(Study::Bernstein2014, 1.0, fx);
    CHECK(*c.target.tone_ipd == pi);
    CHECK(c.reference.bandwidth_hz == 25.0);
  }
  SUBCASE("noise itd families") {
    const auto c = build_condition(Study::Langford1964, 1e-3);
    CHECK(std::get<WaveformItd>(c.reference.noise_phase).dt == 1e-3);
    CHECK_THROWS_AS(build_condition(Study::Langford1964, 0.05), InvalidStimulus);
    FixedParams fx;
    fx.itd_target = ItdTarget::Tone;
    const auto t = build_condition(Study::VanDerHeijden1999, 1e-3, fx);
    CHECK(std::get<ConstantPhase>(t.reference.noise_phase).phi == 0.0);
    CHECK(*t.target.tone_ipd == Approx(pi));
  }
  SUBCASE("rabiner uses envelope delay") {
    const auto c = build_condition(Study::Rabiner1966, 2e-3);
    CHECK(std::holds_alternative<EnvelopeItd>(c.reference.noise_phase));
    CHECK(c.reference.bandwidth_hz == 1100.0);
  }
  SUBCASE("bernstein 2020 delays the tone with the noise") {
    FixedParams fx;
    fx.rho_n = 0.922;
    const auto c = build_condition(Study::Bernstein2020, 1e-3, fx);
    CHECK(c.reference.rho_n == 0.922);
    CHECK(*c.target.tone_ipd == Approx(2 * pi * 500.0 * 1e-3 + pi));
  }
  SUBCASE("van de par sweeps bandwidth") {
    FixedParams fx;
    fx.noise_phase = pi;
    fx.tone_ipd = 0.0;
    const auto c = build_condition(Study::VanDePar1999, 50.0, fx);
    CHECK(c.reference.bandwidth_hz == 50.0);
    CHECK(std::get<ConstantPhase>(c.reference.noise_phase).phi == pi);
    CHECK_THROWS_AS(build_condition(Study::VanDePar1999, 0.0), InvalidStimulus);
    FixedParams bad;
    bad.noise_phase = 1.0;
    CHECK_THROWS_AS(build_condition(Study::Langford1964, 0.0, bad), InvalidStimulus);
  }
  SUBCASE("target at zero snr equals the reference apart from the tone phase") {
    for (Study s : kAllStudies) {
      const double x = s == Study::VanDePar1999 ? 100.0 : (s >= Study::Langford1964 ? 1e-3 : 0.3);
      const auto c = build_condition(s, x);
      CHECK(c.target.snr == 0.0);
      CHECK(c.target.rho_n == c.reference.rho_n);
      CHECK(c.target.bandwidth_hz == c.reference.bandwidth_hz);
    }
  }
}
