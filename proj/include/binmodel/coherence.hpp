#pragma once

#include <complex>
#include <span>
#include <vector>

#include "binmodel/periphery.hpp"
#include "binmodel/stimulus.hpp"

namespace binmodel {

// Complex correlation coefficient γ. |γ| is the interaural coherence, arg(γ) the mean IPD.
class Coherence {
 public:
  Coherence() = default;
  explicit Coherence(std::complex<double> value) : value_(value) {}

  std::complex<double> value() const { return value_; }
  double real() const { return value_.real(); }
  double imag() const { return value_.imag(); }
  double modulus() const { return std::abs(value_); }
  double argument() const { return std::arg(value_); }

 private:
  std::complex<double> value_{};
};

// Fisher z-transform of ρ̂|γ| carried on the direction of γ.
class ZVector {
 public:
  ZVector() = default;
  explicit ZVector(std::complex<double> value) : value_(value) {}

  std::complex<double> value() const { return value_; }
  double modulus() const { return std::abs(value_); }
  double argument() const { return std::arg(value_); }

 private:
  std::complex<double> value_{};
};

// γ = (noise integral + tone term) / power per side. Throws DegenerateStimulus if there is no
// power at the filter output.
Coherence coherence_from_terms(const CrossSpectrumTerms& terms);

Coherence coherence_of(const StimulusSpec& spec, const PeripheryFilter& filter,
                       const QuadratureOptions& opts = {});

// Throws InvalidParameter unless 0 < rho_hat < 1.
ZVector z_transform(const Coherence& gamma, double rho_hat);

// γ(τ) of a tone-free stimulus with a whole-waveform delay τ substituted for its noise phase.
std::vector<Coherence> noise_delay_function(const StimulusSpec& spec, const PeripheryFilter& filter,
                                            std::span<const double> tau_s,
                                            const QuadratureOptions& opts = {});

}  // namespace binmodel
