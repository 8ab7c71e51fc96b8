#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "binmodel/coherence.hpp"
#include "binmodel/parallel.hpp"
#include "binmodel/periphery.hpp"
#include "binmodel/stimulus.hpp"

namespace binmodel {

// Monte-Carlo ensemble of finite noise tokens realizing a StimulusSpec.
struct TokenEnsemble {
  double sample_rate = 4000.0;  // Hz
  double duration = 2.0;        // s
  int n_tokens = 100;
  std::uint64_t seed = 1;
  StimulusSpec spec;
};

// Throws InvalidStimulus when the band is under-resolved (fewer than 50 bins), exceeds Nyquist,
// or the tone does not fall on a frequency bin.
void validate(const TokenEnsemble& ensemble);

using AnalyticSignal = std::vector<std::complex<double>>;

struct AnalyticPair {
  AnalyticSignal left;
  AnalyticSignal right;
};

// Analytic left/right signals of one token, built from a one-sided spectrum: complex Gaussian
// bin coefficients over the band, right = ρ shared + sqrt(1-ρ²) independent, noise phase applied
// to the right channel, tone line at f0 with its IPD split ±Δψ/2. Deterministic in
// (seed, token, bin).
AnalyticPair synthesize_pair(const TokenEnsemble& ensemble, int token);
// Same token with the filter amplitude response sqrt(|H|^2) applied per bin.
AnalyticPair synthesize_filtered_pair(const TokenEnsemble& ensemble, const PeripheryFilter& filter,
                                      int token);

// <l* r> / sqrt(<|l|^2><|r|^2>) over time.
Coherence token_coherence(std::span<const std::complex<double>> left,
                          std::span<const std::complex<double>> right);

struct EmpiricalCoherence {
  Coherence gamma;     // mean over tokens
  double se_re = 0.0;  // across-token standard errors
  double se_im = 0.0;
  std::vector<Coherence> per_token;

  double standard_error() const { return std::hypot(se_re, se_im); }
};

EmpiricalCoherence empirical_coherence(const TokenEnsemble& ensemble, const PeripheryFilter& filter,
                                       unsigned jobs = default_jobs());

struct IpdTrajectory {
  std::vector<double> ipd;   // radians in (-π, π], valid samples only
  std::size_t excluded = 0;  // samples where either channel vanished

  double circular_mean() const;
  double resultant_length() const;
};

IpdTrajectory instantaneous_ipd(std::span<const std::complex<double>> left,
                                std::span<const std::complex<double>> right);

struct CompareOptions {
  double se_multiple = 3.0;
  double min_tolerance = 0.0;
  // Filter for the analytic side; defaults to the one used for synthesis.
  std::optional<PeripheryFilter> analytic_filter;
  QuadratureOptions quadrature{};
  unsigned jobs = default_jobs();
};

struct ComparisonRecord {
  Coherence analytic;
  EmpiricalCoherence empirical;
  double deviation = 0.0;  // |γ_analytic - γ_empirical|
  double tolerance = 0.0;
  bool pass = false;
};

ComparisonRecord compare(const TokenEnsemble& ensemble, const PeripheryFilter& filter,
                         const CompareOptions& opts = {});

}  // namespace binmodel
