#include "binmodel/solve.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>

#include "binmodel/error.hpp"

namespace binmodel {

PreparedCondition::PreparedCondition(const ConditionPair& pair, const PeripheryFilter& filter,
                                     const QuadratureOptions& opts)
    : ordinate_(pair.ordinate),
      rho_ref_(pair.reference.rho_n),
      tone_ipd_(pair.target.tone_ipd),
      tone_gain_(filter.power_response(pair.target.center_hz)) {
  validate(pair.reference);
  validate(pair.target);
  const auto& ref = pair.reference;
  unit_ = binmodel::unit_noise_integral(ref.noise_phase, ref.center_hz, ref.bandwidth_hz, filter,
                                        opts);
  gain_ = noise_power_gain(filter, ref.center_hz, ref.bandwidth_hz, opts);
  if (!(gain_ > 0.0)) throw DegenerateStimulus("noise band passes no power through the filter");
}

Coherence PreparedCondition::gamma_reference() const {
  return Coherence(rho_ref_ * unit_ / gain_);
}

Coherence PreparedCondition::gamma_target(double x) const {
  if (ordinate_ == Ordinate::DeltaRho) {
    return Coherence((rho_ref_ + x) * unit_ / gain_);
  }
  const double s = db_to_linear(x);
  std::complex<double> num = rho_ref_ * unit_;
  double den = gain_;
  if (tone_ipd_) {
    num += std::polar(s * tone_gain_, *tone_ipd_);
    den += s * tone_gain_;
  }
  return Coherence(num / den);
}

DprimeComponents PreparedCondition::dprime(double x, const DetectionParams& params) const {
  DprimeComponents d;
  d.d_bin = dprime_binaural(gamma_reference(), gamma_target(x), params);
  if (ordinate_ == Ordinate::SnrDb && tone_ipd_) {
    d.d_mon = dprime_monaural(db_to_linear(x) * tone_gain_, gain_, params);
  }
  return d;
}

ThresholdResult solve_threshold(const PreparedCondition& condition, const DetectionParams& params,
                                const SolverOptions& opts) {
  validate(params);
  const double target = params.dprime_target;
  auto f = [&](double x) { return condition.dprime(x, params).total() - target; };

  ThresholdResult r;
  double lo, hi, tol;
  if (condition.ordinate() == Ordinate::DeltaRho) {
    lo = 0.0;
    hi = condition.max_delta_rho();
    tol = opts.tol_delta_rho;
    if (!(hi > lo)) throw NoThreshold("reference correlation leaves no room for an increment");
  } else {
    lo = opts.snr_lo_db;
    hi = opts.snr_hi_db;
    tol = opts.tol_db;
  }

  double flo = f(lo);
  if (flo >= 0.0) {
    const auto d = condition.dprime(lo, params);
    r.threshold = lo;
    r.d_bin = d.d_bin;
    r.d_mon = d.d_mon;
    r.clamped = true;
    return r;
  }
  double fhi = f(hi);
  if (fhi < 0.0 && condition.ordinate() == Ordinate::SnrDb) {
    hi += opts.expand_db;
    fhi = f(hi);
  }
  if (fhi < 0.0) {
    throw NoThreshold("d' stays below target over the search bracket");
  }

  std::uintmax_t iters = static_cast<std::uintmax_t>(opts.max_iterations);
  auto stop = [tol](double a, double b) { return std::abs(b - a) <= tol; };
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, stop, iters);
  const double fa = f(a), fb = f(b);
  r.threshold = std::abs(fa) <= std::abs(fb) ? a : b;
  const auto d = condition.dprime(r.threshold, params);
  r.d_bin = d.d_bin;
  r.d_mon = d.d_mon;
  r.iterations = static_cast<int>(iters);
  r.converged = std::abs(d.total() - target) < 1e-6;
  return r;
}

}  // namespace binmodel
