#pragma once

#include <complex>
#include <optional>
#include <string>

#include "binmodel/coherence.hpp"
#include "binmodel/detection.hpp"
#include "binmodel/stimulus.hpp"

namespace binmodel {

struct DprimeComponents {
  double d_bin = 0.0;
  double d_mon = 0.0;
  double total() const { return dprime_total(d_bin, d_mon); }
};

// A reference/target pair with its spectral integrals evaluated once. The noise integral and
// the noise gain do not depend on SNR or on the correlation increment, so d' at any abscissa
// is plain arithmetic afterwards.
class PreparedCondition {
 public:
  PreparedCondition(const ConditionPair& pair, const PeripheryFilter& filter,
                    const QuadratureOptions& opts = {});

  Ordinate ordinate() const { return ordinate_; }
  double noise_gain() const { return gain_; }
  std::complex<double> unit_noise_integral() const { return unit_; }

  Coherence gamma_reference() const;
  // x is the SNR in dB, or the correlation increment Δρ for correlation-change conditions.
  Coherence gamma_target(double x) const;
  DprimeComponents dprime(double x, const DetectionParams& params) const;

  // Largest admissible Δρ for correlation-change conditions.
  double max_delta_rho() const { return 1.0 - rho_ref_ - 1e-9; }

 private:
  Ordinate ordinate_;
  std::complex<double> unit_;
  double gain_;
  double rho_ref_;
  std::optional<double> tone_ipd_;
  double tone_gain_;
};

struct SolverOptions {
  double snr_lo_db = -60.0;
  double snr_hi_db = 20.0;
  double expand_db = 20.0;
  double tol_db = 1e-9;
  double tol_delta_rho = 1e-11;
  int max_iterations = 200;
};

struct ThresholdResult {
  double sweep_value = 0.0;
  double threshold = 0.0;  // dB SNR, or Δρ
  double d_bin = 0.0;
  double d_mon = 0.0;
  int iterations = 0;
  bool converged = false;
  bool clamped = false;   // d' already above target at the lower bracket edge
  std::string error;      // set when no threshold exists
};

// Root of d'(x) = params.dprime_target on a bracket. Throws NoThreshold if d' stays below the
// target over the (once expanded) bracket.
ThresholdResult solve_threshold(const PreparedCondition& condition, const DetectionParams& params,
                                const SolverOptions& opts = {});

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace binmodel
