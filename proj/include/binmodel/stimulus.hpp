#pragma once

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "binmodel/periphery.hpp"
#include "binmodel/quadrature.hpp"

namespace binmodel {

// Interaural phase spectrum of the noise, Δφ(f), in radians.
struct ConstantPhase {
  double phi = 0.0;
};
// Delay of the whole waveform: Δφ = 2π f dt.
struct WaveformItd {
  double dt = 0.0;  // seconds
};
// Delay of the envelope only: Δφ = 2π (f - f0) dt.
struct EnvelopeItd {
  double dt = 0.0;  // seconds
};

using PhaseSpectrum = std::variant<ConstantPhase, WaveformItd, EnvelopeItd>;

double phase_at(const PhaseSpectrum& phase, double f_hz, double center_hz);

// Number of 2π periods the phase traverses across a band of the given width.
double phase_cycles(const PhaseSpectrum& phase, double width_hz);

struct StimulusSpec {
  PhaseSpectrum noise_phase = ConstantPhase{};
  double rho_n = 1.0;
  std::optional<double> tone_ipd;  // radians; empty for tone-free stimuli
  double bandwidth_hz = 900.0;
  double center_hz = 500.0;
  double snr = 0.0;  // tone power over noise power, linear

  bool has_tone() const { return tone_ipd.has_value(); }
};

// Throws InvalidStimulus.
void validate(const StimulusSpec& spec);

// Spectral sums entering the coherence. The noise power is normalized to 1 so the tone power
// equals the SNR.
struct CrossSpectrumTerms {
  std::complex<double> noise_integral;  // ρ_N/Δf ∫ e^{iΔφ} |H|^2 df
  std::complex<double> tone_term;       // snr e^{iΔψ} |H(f0)|^2
  double power_per_side = 0.0;          // g + snr |H(f0)|^2
  double noise_gain = 0.0;              // g
};

// Noise integral at ρ_N = 1. The full noise integral is linear in ρ_N.
std::complex<double> unit_noise_integral(const PhaseSpectrum& phase, double center_hz,
                                         double bandwidth_hz, const PeripheryFilter& filter,
                                         const QuadratureOptions& opts = {});

CrossSpectrumTerms cross_spectrum_terms(const StimulusSpec& spec, const PeripheryFilter& filter,
                                        const QuadratureOptions& opts = {});

// The eight stimulus families, one per reproduced study.
enum class Study {
  Pollack1959,        // correlation-change detection, no tone
  Robinson1963,       // N_rho S0 / N_rho Spi
  Bernstein2014,      // N_rho Spi over bandwidths
  Langford1964,       // noise ITD, S0 / Spi
  VanDerHeijden1999,  // noise ITD at finer resolution, plus tone ITD
  Rabiner1966,        // envelope-only noise ITD, Spi
  Bernstein2020,      // whole-signal ITD, Spi
  VanDePar1999,       // N0/Npi, S0/Spi over bandwidths
};

inline constexpr Study kAllStudies[] = {
    Study::Pollack1959,   Study::Robinson1963,      Study::Bernstein2014, Study::Langford1964,
    Study::VanDerHeijden1999, Study::Rabiner1966, Study::Bernstein2020, Study::VanDePar1999};

std::string_view study_name(Study study);
// Accepts the canonical names and the short aliases (e.g. "rj1963").
std::optional<Study> parse_study(std::string_view name);

enum class Ordinate { SnrDb, DeltaRho };

enum class ItdTarget { Noise, Tone };

// Condition-level settings held fixed while the family's sweep variable changes. Unset fields
// take the family default.
struct FixedParams {
  std::optional<double> rho_n;
  std::optional<double> tone_ipd;      // radians; for Bernstein2020 the offset added to 2π f0 dt
  std::optional<double> bandwidth_hz;
  std::optional<double> noise_phase;   // radians, constant-phase families only
  ItdTarget itd_target = ItdTarget::Noise;  // VanDerHeijden1999 only
};

// Tone-free reference and tone-bearing target. The target's snr (or, for Pollack1959, its
// correlation increment) is left at zero for the solver to fill in.
struct ConditionPair {
  StimulusSpec reference;
  StimulusSpec target;
  Ordinate ordinate = Ordinate::SnrDb;
};

// Sweep variable per family: Pollack1959, Robinson1963, Bernstein2014 take ρ; the ITD families
// take the delay in seconds; VanDePar1999 takes the bandwidth in Hz.
ConditionPair build_condition(Study study, double sweep_value, const FixedParams& fixed = {});

}  // namespace binmodel
