#include "binmodel/coherence.hpp"

#include <cmath>

#include "binmodel/error.hpp"

namespace binmodel {

Coherence coherence_from_terms(const CrossSpectrumTerms& terms) {
  if (!(terms.power_per_side > 0.0)) {
    throw DegenerateStimulus("no signal power after peripheral filtering");
  }
  return Coherence((terms.noise_integral + terms.tone_term) / terms.power_per_side);
}

Coherence coherence_of(const StimulusSpec& spec, const PeripheryFilter& filter,
                       const QuadratureOptions& opts) {
  return coherence_from_terms(cross_spectrum_terms(spec, filter, opts));
}

ZVector z_transform(const Coherence& gamma, double rho_hat) {
  if (!(rho_hat > 0.0 && rho_hat < 1.0)) {
    throw InvalidParameter("rho_hat must lie in (0, 1)");
  }
  const double r = gamma.modulus();
  if (r == 0.0) return ZVector{};
  // Scale the unit phasor rather than re-deriving it from arg() so the direction is exact.
  return ZVector(gamma.value() * (std::atanh(rho_hat * r) / r));
}

std::vector<Coherence> noise_delay_function(const StimulusSpec& spec, const PeripheryFilter& filter,
                                            std::span<const double> tau_s,
                                            const QuadratureOptions& opts) {
  if (spec.has_tone() && spec.snr > 0.0) {
    throw InvalidStimulus("noise-delay function is defined for tone-free stimuli");
  }
  StimulusSpec s = spec;
  std::vector<Coherence> out;
  out.reserve(tau_s.size());
  for (double tau : tau_s) {
    s.noise_phase = WaveformItd{tau};
    out.push_back(coherence_of(s, filter, opts));
  }
  return out;
}

}  // namespace binmodel
