#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <tuple>
#include <type_traits>
#include <utility>

namespace binmodel {

struct QuadratureOptions {
  double rel_tol = 1e-8;
  // Minimum node density for oscillatory integrands, in nodes per period.
  int nodes_per_cycle = 20;
  int min_panels = 8;
  int max_doublings = 16;
  // Extra panel doublings applied after convergence. Only used to check convergence in tests.
  int extra_doublings = 0;
};

template <typename T>
struct QuadratureResult {
  T value{};
  double abs_integral = 0.0;  // integral of |f|, the scale the tolerance is measured against
  int nodes = 0;
  bool converged = false;
};

// Abscissae and weights of the fixed-order Gauss-Legendre rule on [-1, 1].
std::span<const double> gauss_legendre_nodes();
std::span<const double> gauss_legendre_weights();

// Composite Gauss-Legendre quadrature of f over [lo, hi] with panel doubling until successive
// estimates agree to rel_tol relative to the integral of |f|. `cycles` is the number of
// oscillation periods of f across the interval and sets the starting panel count.
template <typename F>
auto integrate(F&& f, double lo, double hi, double cycles = 0.0, const QuadratureOptions& opts = {})
    -> QuadratureResult<std::decay_t<std::invoke_result_t<F, double>>> {
  using T = std::decay_t<std::invoke_result_t<F, double>>;
  QuadratureResult<T> out;
  if (!(hi > lo)) {
    out.converged = true;
    return out;
  }
  const auto x = gauss_legendre_nodes();
  const auto w = gauss_legendre_weights();
  const int order = static_cast<int>(x.size());

  int panels = opts.min_panels;
  const double wanted = std::ceil(opts.nodes_per_cycle * std::abs(cycles) / order);
  if (wanted > panels) panels = static_cast<int>(wanted);

  auto pass = [&](int n) {
    T sum{};
    double abs_sum = 0.0;
    const double h = (hi - lo) / n;
    for (int p = 0; p < n; ++p) {
      const double mid = lo + (p + 0.5) * h;
      for (int k = 0; k < order; ++k) {
        const T v = f(mid + 0.5 * h * x[k]);
        sum += v * (0.5 * h * w[k]);
        abs_sum += std::abs(v) * (0.5 * h * w[k]);
      }
    }
    return std::pair{sum, abs_sum};
  };

  auto [prev, prev_abs] = pass(panels);
  for (int d = 0; d < opts.max_doublings; ++d) {
    panels *= 2;
    auto [cur, cur_abs] = pass(panels);
    const double scale = std::max(cur_abs, 1e-300);
    const bool done = std::abs(cur - prev) <= opts.rel_tol * scale;
    prev = cur;
    prev_abs = cur_abs;
    if (done) {
      out.converged = true;
      break;
    }
  }
  for (int d = 0; d < opts.extra_doublings; ++d) {
    panels *= 2;
    std::tie(prev, prev_abs) = pass(panels);
  }
  out.value = prev;
  out.abs_integral = prev_abs;
  out.nodes = panels * order;
  return out;
}

}  // namespace binmodel
