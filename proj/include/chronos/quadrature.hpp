#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "chronos/common.hpp"

namespace chronos {

// Gauss-Legendre rule on [-1, 1].
class GaussLegendre {
 public:
  explicit GaussLegendre(int n) {
    if (n < 1) throw std::invalid_argument("GaussLegendre: need n >= 1");
    nodes_.resize(n);
    weights_.resize(n);
    // Newton iteration on P_n with Chebyshev-like initial guesses.
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
      double x = std::cos(pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= n; ++j) {
          const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      nodes_[i] = -x;
      nodes_[n - 1 - i] = x;
      weights_[i] = w;
      weights_[n - 1 - i] = w;
    }
    if (n % 2 == 1) nodes_[n / 2] = 0.0;
  }

  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  // Shared 32-node rule used as the default panel rule.
  static const GaussLegendre& panel32() {
    static const GaussLegendre rule(32);
    return rule;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

// Composite panel rule over an interval.
struct PanelRule {
  int nodes_per_panel = 32;
  int panels = 1;
};

// Panel count so an integrand oscillating at `freq` rad per unit length gets
// at least `nodes_per_period` nodes per period.
inline int panels_for_frequency(double freq, double a, double b,
                                int nodes_per_panel = 32,
                                int nodes_per_period = 8) {
  const double length = b - a;
  const double periods = std::abs(freq) * length / (2.0 * pi);
  const int needed =
      static_cast<int>(std::ceil(periods * nodes_per_period / nodes_per_panel));
  return std::max(1, needed);
}

inline PanelRule rule_for_frequency(double freq, double a, double b) {
  return PanelRule{32, panels_for_frequency(freq, a, b)};
}

// Flattened node/weight table for a composite rule on [a, b].
struct QuadratureGrid {
  std::vector<double> points;
  std::vector<double> weights;
};

inline QuadratureGrid quadrature_grid(double a, double b, const PanelRule& rule) {
  if (!(a < b)) throw std::invalid_argument("quadrature_grid: need a < b");
  const GaussLegendre gl(rule.nodes_per_panel);
  QuadratureGrid grid;
  grid.points.reserve(static_cast<size_t>(rule.panels) * gl.size());
  grid.weights.reserve(grid.points.capacity());
  const double h = (b - a) / rule.panels;
  for (int p = 0; p < rule.panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int i = 0; i < gl.size(); ++i) {
      grid.points.push_back(mid + 0.5 * h * gl.nodes()[i]);
      grid.weights.push_back(0.5 * h * gl.weights()[i]);
    }
  }
  return grid;
}

template <typename F>
auto integrate(F&& f, double a, double b, const PanelRule& rule = PanelRule{})
    -> decltype(f(a)) {
  const QuadratureGrid grid = quadrature_grid(a, b, rule);
  decltype(f(a)) acc{};
  for (size_t i = 0; i < grid.points.size(); ++i)
    acc += grid.weights[i] * f(grid.points[i]);
  return acc;
}

}  // namespace chronos
