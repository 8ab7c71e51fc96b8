#pragma once

#include <cmath>
#include <optional>

#include "binmodel/coherence.hpp"

namespace binmodel {

struct DetectionParams {
  double rho_hat = 0.9;                  // caps the sensitivity to coherence changes near 1
  double sigma_bin = 0.3;                // binaural noise, in z units
  std::optional<double> sigma_mon;       // monaural noise; empty for binaural-only tasks
  double dprime_target = 1.0;            // sensitivity index defining threshold
};

// Throws InvalidParameter.
void validate(const DetectionParams& params);

// |z[ρ̂ γ_ref] - z[ρ̂ γ_target]| / σ_bin
double dprime_binaural(const Coherence& gamma_ref, const Coherence& gamma_target,
                       const DetectionParams& params);

// Effective SNR at the filter output over σ_mon. The tone sits at the filter center, so the
// effective SNR is snr / g. Zero when the parameter set has no monaural branch.
double dprime_monaural(double snr, double noise_gain, const DetectionParams& params);

inline double dprime_total(double d_bin, double d_mon) { return std::hypot(d_bin, d_mon); }

struct IpdThreshold {
  double radians;
  double microseconds;  // equivalent ITD at the reference frequency
};

// Smallest detectable IPD change between two fully coherent stimuli:
//   Δσ = 2 asin(d' σ_bin / (2 artanh ρ̂)).
// Throws SensitivityInsufficient when the asin argument exceeds 1.
IpdThreshold ipd_discrimination_threshold(const DetectionParams& params, double center_hz = 500.0);

}  // namespace binmodel
