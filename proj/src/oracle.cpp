#include "binmodel/oracle.hpp"

#include <cmath>
#include <numbers>
#include <unsupported/Eigen/FFT>

#include "binmodel/error.hpp"

namespace binmodel {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double unit_open(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
}

// Unit-power circular complex Gaussian keyed by (seed, token, bin, stream).
std::complex<double> gaussian(std::uint64_t seed, std::uint64_t token, std::uint64_t bin,
                              std::uint64_t stream) {
  const std::uint64_t key = mix(seed ^ mix(token ^ mix(bin ^ mix(stream))));
  const double r = std::sqrt(-std::log(unit_open(mix(key))));
  const double theta = kTwoPi * unit_open(mix(key + 1));
  return std::polar(r, theta);
}

struct Layout {
  std::size_t n_samples;
  std::size_t k_lo, k_hi;  // noise bins [k_lo, k_hi)
  std::size_t k_tone;
  double bin_hz;
};

Layout layout(const TokenEnsemble& e) {
  validate(e);
  const NoiseBand band = noise_band(e.spec.center_hz, e.spec.bandwidth_hz);
  Layout l;
  l.n_samples = static_cast<std::size_t>(std::llround(e.sample_rate * e.duration));
  l.bin_hz = 1.0 / e.duration;
  l.k_lo = static_cast<std::size_t>(std::ceil(band.lo_hz * e.duration - 1e-9));
  l.k_hi = static_cast<std::size_t>(std::ceil(band.hi_hz * e.duration - 1e-9));
  l.k_tone = static_cast<std::size_t>(std::llround(e.spec.center_hz * e.duration));
  return l;
}

AnalyticPair synthesize(const TokenEnsemble& e, const PeripheryFilter* filter, int token) {
  if (token < 0 || token >= e.n_tokens) throw InvalidParameter("token index out of range");
  const Layout l = layout(e);
  const auto& s = e.spec;
  std::vector<std::complex<double>> left(l.n_samples), right(l.n_samples);

  // Noise power 1 spread over the nominal band.
  const double bin_sd = std::sqrt(l.bin_hz / s.bandwidth_hz);
  const double indep = std::sqrt(std::max(0.0, 1.0 - s.rho_n * s.rho_n));
  for (std::size_t k = l.k_lo; k < l.k_hi; ++k) {
    const double f = k * l.bin_hz;
    const double amp = bin_sd * (filter ? std::sqrt(filter->power_response(f)) : 1.0);
    const auto shared = gaussian(e.seed, token, k, 0);
    const auto own = gaussian(e.seed, token, k, 1);
    left[k] = amp * shared;
    right[k] = amp * (s.rho_n * shared + indep * own) *
               std::polar(1.0, phase_at(s.noise_phase, f, s.center_hz));
  }
  if (s.has_tone() && s.snr > 0.0) {
    const double amp =
        std::sqrt(s.snr) * (filter ? std::sqrt(filter->power_response(s.center_hz)) : 1.0);
    left[l.k_tone] += std::polar(amp, -0.5 * *s.tone_ipd);
    right[l.k_tone] += std::polar(amp, 0.5 * *s.tone_ipd);
  }

  // Unscaled inverse transform: x[t] = Σ_k X[k] e^{2πikt/N}, so mean power equals Σ|X[k]|^2.
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  AnalyticPair out;
  fft.inv(out.left, left);
  fft.inv(out.right, right);
  return out;
}

}  // namespace

void validate(const TokenEnsemble& e) {
  validate(e.spec);
  if (!(e.sample_rate > 0.0) || !(e.duration > 0.0) || e.n_tokens < 1) {
    throw InvalidStimulus("ensemble needs positive sample rate, duration and token count");
  }
  const NoiseBand band = noise_band(e.spec.center_hz, e.spec.bandwidth_hz);
  if ((band.hi_hz - band.lo_hz) * e.duration < 50.0) {
    throw InvalidStimulus("duration too short to resolve the noise band (need >= 50 bins)");
  }
  if (band.hi_hz >= 0.5 * e.sample_rate) throw InvalidStimulus("noise band exceeds Nyquist");
  const double k_tone = e.spec.center_hz * e.duration;
  if (e.spec.has_tone() && std::abs(k_tone - std::round(k_tone)) > 1e-9) {
    throw InvalidStimulus("tone frequency does not fall on a frequency bin");
  }
}

AnalyticPair synthesize_pair(const TokenEnsemble& ensemble, int token) {
  return synthesize(ensemble, nullptr, token);
}

AnalyticPair synthesize_filtered_pair(const TokenEnsemble& ensemble, const PeripheryFilter& filter,
                                      int token) {
  return synthesize(ensemble, &filter, token);
}

Coherence token_coherence(std::span<const std::complex<double>> left,
                          std::span<const std::complex<double>> right) {
  if (left.size() != right.size()) throw InvalidParameter("signal lengths differ");
  std::complex<double> cross{};
  double pl = 0.0, pr = 0.0;
  for (std::size_t t = 0; t < left.size(); ++t) {
    cross += std::conj(left[t]) * right[t];
    pl += std::norm(left[t]);
    pr += std::norm(right[t]);
  }
  if (!(pl > 0.0 && pr > 0.0)) throw DegenerateStimulus("silent token");
  return Coherence(cross / std::sqrt(pl * pr));
}

EmpiricalCoherence empirical_coherence(const TokenEnsemble& ensemble, const PeripheryFilter& filter,
                                       unsigned jobs) {
  validate(ensemble);
  EmpiricalCoherence out;
  out.per_token.resize(ensemble.n_tokens);
  parallel_for(out.per_token.size(), jobs, [&](std::size_t i) {
    const auto pair = synthesize_filtered_pair(ensemble, filter, static_cast<int>(i));
    out.per_token[i] = token_coherence(pair.left, pair.right);
  });
  const double n = static_cast<double>(ensemble.n_tokens);
  std::complex<double> mean{};
  for (const auto& g : out.per_token) mean += g.value();
  mean /= n;
  out.gamma = Coherence(mean);
  if (ensemble.n_tokens > 1) {
    double vr = 0.0, vi = 0.0;
    for (const auto& g : out.per_token) {
      vr += (g.real() - mean.real()) * (g.real() - mean.real());
      vi += (g.imag() - mean.imag()) * (g.imag() - mean.imag());
    }
    out.se_re = std::sqrt(vr / (n - 1.0) / n);
    out.se_im = std::sqrt(vi / (n - 1.0) / n);
  }
  return out;
}

double IpdTrajectory::circular_mean() const {
  std::complex<double> s{};
  for (double a : ipd) s += std::polar(1.0, a);
  return std::arg(s);
}

double IpdTrajectory::resultant_length() const {
  if (ipd.empty()) return 0.0;
  std::complex<double> s{};
  for (double a : ipd) s += std::polar(1.0, a);
  return std::abs(s) / static_cast<double>(ipd.size());
}

IpdTrajectory instantaneous_ipd(std::span<const std::complex<double>> left,
                                std::span<const std::complex<double>> right) {
  if (left.size() != right.size()) throw InvalidParameter("signal lengths differ");
  IpdTrajectory t;
  t.ipd.reserve(left.size());
  for (std::size_t i = 0; i < left.size(); ++i) {
    const auto p = std::conj(left[i]) * right[i];
    if (std::abs(p) <= 1e-300) {
      ++t.excluded;
      continue;
    }
    double a = std::arg(p);
    if (a <= -std::numbers::pi) a += kTwoPi;
    t.ipd.push_back(a);
  }
  return t;
}

ComparisonRecord compare(const TokenEnsemble& ensemble, const PeripheryFilter& filter,
                         const CompareOptions& opts) {
  ComparisonRecord rec;
  rec.analytic = coherence_of(ensemble.spec, opts.analytic_filter.value_or(filter), opts.quadrature);
  rec.empirical = empirical_coherence(ensemble, filter, opts.jobs);
  rec.deviation = std::abs(rec.analytic.value() - rec.empirical.gamma.value());
  rec.tolerance = std::max(opts.min_tolerance, opts.se_multiple * rec.empirical.standard_error());
  rec.pass = rec.deviation < rec.tolerance;
  return rec;
}

}  // namespace binmodel
