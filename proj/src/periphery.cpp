#include "binmodel/periphery.hpp"

#include <cmath>
#include <numbers>

#include "binmodel/error.hpp"

namespace binmodel {
namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace

PeripheryFilter::PeripheryFilter(double center_hz, int order, double erb_hz)
    : center_hz_(center_hz), order_(order), erb_hz_(erb_hz) {
  if (!(center_hz > 0.0) || order < 1 || !(erb_hz > 0.0)) {
    throw InvalidParameter("periphery filter needs center > 0, order >= 1, erb > 0");
  }
  const int n = order;
  b_hz_ = erb_hz * factorial(n - 1) * factorial(n - 1) /
          (std::numbers::pi * factorial(2 * n - 2) * std::pow(2.0, 2 - 2 * n));
}

double PeripheryFilter::power_response(double f_hz) const {
  const double x = (f_hz - center_hz_) / b_hz_;
  return std::pow(1.0 + x * x, -order_);
}

NoiseBand noise_band(double center_hz, double bandwidth_hz) {
  if (!(bandwidth_hz > 0.0) || !std::isfinite(bandwidth_hz)) {
    throw InvalidStimulus("noise bandwidth must be positive");
  }
  const double lo = center_hz - 0.5 * bandwidth_hz;
  return {lo < 0.0 ? 0.0 : lo, center_hz + 0.5 * bandwidth_hz, bandwidth_hz};
}

double noise_power_gain(const PeripheryFilter& filter, double center_hz, double bandwidth_hz,
                        const QuadratureOptions& opts) {
  const NoiseBand band = noise_band(center_hz, bandwidth_hz);
  const auto r = integrate([&](double f) { return filter.power_response(f); }, band.lo_hz,
                           band.hi_hz, 0.0, opts);
  return r.value / band.nominal_width_hz;
}

}  // namespace binmodel
