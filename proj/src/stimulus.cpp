#include "binmodel/stimulus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "binmodel/error.hpp"

namespace binmodel {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMaxItd = 0.02;
constexpr double kMaxBandwidth = 4000.0;

struct StudyName {
  Study study;
  std::string_view name;
  std::string_view alias;
};

constexpr StudyName kNames[] = {
    {Study::Pollack1959, "pollack1959", "pt1959"},
    {Study::Robinson1963, "robinson1963", "rj1963"},
    {Study::Bernstein2014, "bernstein2014", "bt2014"},
    {Study::Langford1964, "langford1964", "lj1964"},
    {Study::VanDerHeijden1999, "vanderheijden1999", "vht1999"},
    {Study::Rabiner1966, "rabiner1966", "rab1966"},
    {Study::Bernstein2020, "bernstein2020", "bt2020"},
    {Study::VanDePar1999, "vandepar1999", "vpk1999"},
};

void require_range(double v, double lo, double hi, std::string_view what) {
  if (!(v >= lo && v <= hi)) {
    throw InvalidStimulus(std::string(what) + " out of range: " + std::to_string(v));
  }
}

}  // namespace

double phase_at(const PhaseSpectrum& phase, double f_hz, double center_hz) {
  return std::visit(
      [&](const auto& p) -> double {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, ConstantPhase>) {
          return p.phi;
        } else if constexpr (std::is_same_v<P, WaveformItd>) {
          return kTwoPi * f_hz * p.dt;
        } else {
          return kTwoPi * (f_hz - center_hz) * p.dt;
        }
      },
      phase);
}

double phase_cycles(const PhaseSpectrum& phase, double width_hz) {
  return std::visit(
      [&](const auto& p) -> double {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, ConstantPhase>) {
          return 0.0;
        } else {
          return std::abs(p.dt) * width_hz;
        }
      },
      phase);
}

void validate(const StimulusSpec& spec) {
  if (!(std::abs(spec.rho_n) <= 1.0)) throw InvalidStimulus("rho_n must lie in [-1, 1]");
  if (!(spec.bandwidth_hz > 0.0) || !std::isfinite(spec.bandwidth_hz)) {
    throw InvalidStimulus("bandwidth must be positive");
  }
  if (!(spec.center_hz > 0.0) || !std::isfinite(spec.center_hz)) {
    throw InvalidStimulus("center frequency must be positive");
  }
  if (!(spec.snr >= 0.0) || !std::isfinite(spec.snr)) {
    throw InvalidStimulus("snr must be finite and non-negative");
  }
  if (spec.tone_ipd && !std::isfinite(*spec.tone_ipd)) throw InvalidStimulus("tone IPD not finite");
  const bool finite_phase = std::visit(
      [](const auto& p) {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, ConstantPhase>) {
          return std::isfinite(p.phi);
        } else {
          return std::isfinite(p.dt);
        }
      },
      spec.noise_phase);
  if (!finite_phase) throw InvalidStimulus("noise phase not finite");
}

std::complex<double> unit_noise_integral(const PhaseSpectrum& phase, double center_hz,
                                         double bandwidth_hz, const PeripheryFilter& filter,
                                         const QuadratureOptions& opts) {
  const NoiseBand band = noise_band(center_hz, bandwidth_hz);
  const auto r = integrate(
      [&](double f) {
        return std::polar(filter.power_response(f), phase_at(phase, f, center_hz));
      },
      band.lo_hz, band.hi_hz, phase_cycles(phase, band.hi_hz - band.lo_hz), opts);
  return r.value / band.nominal_width_hz;
}

CrossSpectrumTerms cross_spectrum_terms(const StimulusSpec& spec, const PeripheryFilter& filter,
                                        const QuadratureOptions& opts) {
  validate(spec);
  CrossSpectrumTerms t;
  t.noise_gain = noise_power_gain(filter, spec.center_hz, spec.bandwidth_hz, opts);
  t.noise_integral =
      spec.rho_n == 0.0
          ? std::complex<double>{}
          : spec.rho_n * unit_noise_integral(spec.noise_phase, spec.center_hz, spec.bandwidth_hz,
                                             filter, opts);
  const double tone_gain = filter.power_response(spec.center_hz);
  if (spec.has_tone()) {
    t.tone_term = std::polar(spec.snr * tone_gain, *spec.tone_ipd);
    t.power_per_side = t.noise_gain + spec.snr * tone_gain;
  } else {
    t.power_per_side = t.noise_gain;
  }
  return t;
}

std::string_view study_name(Study study) {
  for (const auto& n : kNames) {
    if (n.study == study) return n.name;
  }
  return "unknown";
}

std::optional<Study> parse_study(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (const auto& n : kNames) {
    if (lower == n.name || lower == n.alias) return n.study;
  }
  return std::nullopt;
}

ConditionPair build_condition(Study study, double sweep_value, const FixedParams& fixed) {
  if (!std::isfinite(sweep_value)) throw InvalidStimulus("sweep value not finite");
  ConditionPair c;
  StimulusSpec ref;
  const double f0 = ref.center_hz;
  std::optional<double> tone;
  if (fixed.bandwidth_hz) require_range(*fixed.bandwidth_hz, 1e-3, kMaxBandwidth, "bandwidth");

  switch (study) {
    case Study::Pollack1959:
      require_range(sweep_value, -1.0, 1.0 - 1e-9, "reference correlation");
      ref.rho_n = sweep_value;
      ref.bandwidth_hz = fixed.bandwidth_hz.value_or(1000.0);
      c.ordinate = Ordinate::DeltaRho;
      break;
    case Study::Robinson1963:
    case Study::Bernstein2014:
      require_range(sweep_value, -1.0, 1.0, "noise correlation");
      ref.rho_n = sweep_value;
      ref.bandwidth_hz = fixed.bandwidth_hz.value_or(900.0);
      tone = fixed.tone_ipd.value_or(study == Study::Robinson1963 ? 0.0 : std::numbers::pi);
      break;
    case Study::Langford1964:
    case Study::VanDerHeijden1999:
      require_range(sweep_value, -kMaxItd, kMaxItd, "ITD");
      ref.rho_n = fixed.rho_n.value_or(1.0);
      ref.bandwidth_hz = fixed.bandwidth_hz.value_or(900.0);
      if (study == Study::VanDerHeijden1999 && fixed.itd_target == ItdTarget::Tone) {
        ref.noise_phase = ConstantPhase{0.0};
        tone = fixed.tone_ipd.value_or(0.0) + kTwoPi * f0 * sweep_value;
      } else {
        ref.noise_phase = WaveformItd{sweep_value};
        tone = fixed.tone_ipd.value_or(std::numbers::pi);
      }
      break;
    case Study::Rabiner1966:
      require_range(sweep_value, -kMaxItd, kMaxItd, "envelope ITD");
      ref.rho_n = fixed.rho_n.value_or(1.0);
      ref.bandwidth_hz = fixed.bandwidth_hz.value_or(1100.0);
      ref.noise_phase = EnvelopeItd{sweep_value};
      tone = fixed.tone_ipd.value_or(std::numbers::pi);
      break;
    case Study::Bernstein2020:
      require_range(sweep_value, -kMaxItd, kMaxItd, "ITD");
      ref.rho_n = fixed.rho_n.value_or(1.0);
      ref.bandwidth_hz = fixed.bandwidth_hz.value_or(900.0);
      ref.noise_phase = WaveformItd{sweep_value};
      tone = kTwoPi * f0 * sweep_value + fixed.tone_ipd.value_or(std::numbers::pi);
      break;
    case Study::VanDePar1999:
      require_range(sweep_value, 1e-3, kMaxBandwidth, "bandwidth");
      ref.rho_n = fixed.rho_n.value_or(1.0);
      ref.bandwidth_hz = sweep_value;
      ref.noise_phase = ConstantPhase{fixed.noise_phase.value_or(0.0)};
      tone = fixed.tone_ipd.value_or(std::numbers::pi);
      break;
  }
  if (fixed.noise_phase && study != Study::VanDePar1999) {
    if (!std::holds_alternative<ConstantPhase>(ref.noise_phase)) {
      throw InvalidStimulus("noise_phase applies only to constant-phase families");
    }
    ref.noise_phase = ConstantPhase{*fixed.noise_phase};
  }
  if (fixed.rho_n && (study == Study::Pollack1959 || study == Study::Robinson1963 ||
                      study == Study::Bernstein2014)) {
    throw InvalidStimulus("rho_n is the sweep variable of this family");
  }
  validate(ref);
  c.reference = ref;
  c.target = ref;
  c.target.tone_ipd = tone;
  c.target.snr = 0.0;
  return c;
}

}  // namespace binmodel
