#include "binmodel/detection.hpp"

#include <cmath>
#include <numbers>

#include "binmodel/error.hpp"

namespace binmodel {

void validate(const DetectionParams& p) {
  if (!(p.rho_hat > 0.0 && p.rho_hat < 1.0)) throw InvalidParameter("rho_hat must lie in (0, 1)");
  if (!(p.sigma_bin > 0.0) || !std::isfinite(p.sigma_bin)) {
    throw InvalidParameter("sigma_bin must be positive");
  }
  if (p.sigma_mon && (!(*p.sigma_mon > 0.0) || !std::isfinite(*p.sigma_mon))) {
    throw InvalidParameter("sigma_mon must be positive");
  }
  if (!(p.dprime_target > 0.0) || !std::isfinite(p.dprime_target)) {
    throw InvalidParameter("dprime_target must be positive");
  }
}

double dprime_binaural(const Coherence& gamma_ref, const Coherence& gamma_target,
                       const DetectionParams& params) {
  validate(params);
  const ZVector zr = z_transform(gamma_ref, params.rho_hat);
  const ZVector zt = z_transform(gamma_target, params.rho_hat);
  return std::abs(zr.value() - zt.value()) / params.sigma_bin;
}

double dprime_monaural(double snr, double noise_gain, const DetectionParams& params) {
  if (!params.sigma_mon) return 0.0;
  if (!(snr >= 0.0)) throw InvalidParameter("snr must be non-negative");
  if (!(noise_gain > 0.0 && noise_gain <= 1.0 + 1e-12)) {
    throw InvalidParameter("noise gain must lie in (0, 1]");
  }
  return (snr / noise_gain) / *params.sigma_mon;
}

IpdThreshold ipd_discrimination_threshold(const DetectionParams& params, double center_hz) {
  validate(params);
  const double arg = params.dprime_target * params.sigma_bin / (2.0 * std::atanh(params.rho_hat));
  if (arg > 1.0) {
    throw SensitivityInsufficient("no IPD change reaches the target d' at these parameters");
  }
  const double rad = 2.0 * std::asin(arg);
  return {rad, rad / (2.0 * std::numbers::pi * center_hz) * 1e6};
}

}  // namespace binmodel
