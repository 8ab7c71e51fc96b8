#pragma once

#include "binmodel/quadrature.hpp"

namespace binmodel {

// Power spectrum of an n-th order gammatone filter, |H(f)|^2 = [1 + ((f - f0)/b)^2]^-n.
//
// The bandwidth parameter b follows from the equivalent rectangular bandwidth,
//   b = ERB ((n-1)!)^2 / (pi (2n-2)! 2^(2-2n)),
// so that the integral of the power response over all frequencies equals the ERB.
// For n = 4 and ERB = 79 Hz, b is about 80.47 Hz.
class PeripheryFilter {
 public:
  explicit PeripheryFilter(double center_hz = 500.0, int order = 4, double erb_hz = 79.0);

  double center_frequency() const { return center_hz_; }
  int order() const { return order_; }
  double erb() const { return erb_hz_; }
  double bandwidth_param() const { return b_hz_; }

  // Power gain at frequency f (Hz). Equals 1 at the center frequency.
  double power_response(double f_hz) const;

 private:
  double center_hz_;
  int order_;
  double erb_hz_;
  double b_hz_;
};

inline double power_response(const PeripheryFilter& filter, double f_hz) {
  return filter.power_response(f_hz);
}

// Rectangular noise band. The lower edge is clamped at 0 Hz; the nominal width still sets the
// spectral density, so clamping drops power rather than redistributing it.
struct NoiseBand {
  double lo_hz;
  double hi_hz;
  double nominal_width_hz;
};

NoiseBand noise_band(double center_hz, double bandwidth_hz);

// Fraction of unit-power rectangular noise passed by the filter:
// g = (1/bandwidth) * integral of |H(f)|^2 over the band.
double noise_power_gain(const PeripheryFilter& filter, double center_hz, double bandwidth_hz,
                        const QuadratureOptions& opts = {});

}  // namespace binmodel
