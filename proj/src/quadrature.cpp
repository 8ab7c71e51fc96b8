#include "binmodel/quadrature.hpp"

#include <array>
#include <numbers>

namespace binmodel {
namespace {

constexpr int kOrder = 16;

struct Rule {
  std::array<double, kOrder> nodes{};
  std::array<double, kOrder> weights{};
};

// Roots of P_n by Newton iteration from the Chebyshev guess; weights from P_n'.
Rule make_rule() {
  Rule r;
  for (int i = 0; i < kOrder; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (kOrder + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= kOrder; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = kOrder * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[i] = x;
    r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

const Rule& rule() {
  static const Rule r = make_rule();
  return r;
}

}  // namespace

std::span<const double> gauss_legendre_nodes() { return rule().nodes; }
std::span<const double> gauss_legendre_weights() { return rule().weights; }

}  // namespace binmodel
