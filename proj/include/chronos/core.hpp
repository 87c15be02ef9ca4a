#pragma once

#include <Eigen/Core>
#include <cmath>
#include <memory>
#include <vector>

#include "chronos/common.hpp"
#include "chronos/quadrature.hpp"

namespace chronos {

// Physical parameters of the confined particle. Working units default to
// l = mu = hbar = 1; gamma is the boundary phase phi(-l) = e^{-2i gamma} phi(l)
// and must avoid the degenerate values 0 and pi/2.
struct SystemConfig {
  double l = 1.0;
  double mu = 1.0;
  double hbar = 1.0;
  double gamma = 0.0;

  SystemConfig(double gamma_, double l_ = 1.0, double mu_ = 1.0,
               double hbar_ = 1.0)
      : l(l_), mu(mu_), hbar(hbar_), gamma(gamma_) {
    if (!(l > 0.0)) throw std::invalid_argument("SystemConfig: l must be > 0");
    if (!(mu > 0.0)) throw std::invalid_argument("SystemConfig: mu must be > 0");
    if (!(hbar > 0.0))
      throw std::invalid_argument("SystemConfig: hbar must be > 0");
    if (!(gamma > 0.0 && gamma < pi / 2))
      throw std::invalid_argument(
          "SystemConfig: gamma must lie strictly inside (0, pi/2)");
  }

  bool operator==(const SystemConfig&) const = default;
};

inline double momentum_eigenvalue(int k, const SystemConfig& cfg) {
  return cfg.hbar * (cfg.gamma + k * pi) / cfg.l;
}

inline double energy_eigenvalue(int k, const SystemConfig& cfg) {
  const double p = momentum_eigenvalue(k, cfg);
  return p * p / (2.0 * cfg.mu);
}

// phi_k(q) = (2l)^{-1/2} e^{i(gamma + k pi) q / l} on [-l, l].
inline complex basis_function_value(int k, double q, const SystemConfig& cfg) {
  if (q < -cfg.l || q > cfg.l)
    throw std::domain_error("basis_function_value: q outside [-l, l]");
  const double phase = (cfg.gamma + k * pi) * q / cfg.l;
  return std::polar(1.0 / std::sqrt(2.0 * cfg.l), phase);
}

// <phi_k| q |phi_k'>. The gamma phases cancel, leaving a pure Fourier moment.
inline complex position_matrix_element(int k, int kp, const SystemConfig& cfg) {
  const int m = kp - k;
  if (m == 0) return complex(0.0, 0.0);
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  return complex(0.0, -cfg.l * sign / (m * pi));
}

// <phi_k| q^2 |phi_k'>.
inline complex position_sq_matrix_element(int k, int kp,
                                          const SystemConfig& cfg) {
  const int m = kp - k;
  if (m == 0) return complex(cfg.l * cfg.l / 3.0, 0.0);
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  return complex(2.0 * sign * cfg.l * cfg.l / (m * pi * m * pi), 0.0);
}

// Truncated energy eigenbasis, k in [-K, K].
class EnergyBasis {
 public:
  EnergyBasis(const SystemConfig& cfg, int K) : cfg_(cfg), K_(K) {
    if (K < 1) throw std::invalid_argument("EnergyBasis: K must be >= 1");
    const int n = 2 * K + 1;
    momenta_.resize(n);
    energies_.resize(n);
    for (int k = -K; k <= K; ++k) {
      momenta_[k + K] = momentum_eigenvalue(k, cfg);
      energies_[k + K] = energy_eigenvalue(k, cfg);
    }
  }

  const SystemConfig& config() const { return cfg_; }
  int K() const { return K_; }
  int size() const { return 2 * K_ + 1; }

  // Storage index of quantum number k.
  int index_of(int k) const { return k + K_; }
  int k_of(int index) const { return index - K_; }

  double momentum(int k) const { return momenta_[index_of(k)]; }
  double energy(int k) const { return energies_[index_of(k)]; }
  const std::vector<double>& energies() const { return energies_; }

  double max_energy() const {
    double e = 0.0;
    for (double v : energies_) e = std::max(e, v);
    return e;
  }

  bool operator==(const EnergyBasis& other) const {
    return cfg_ == other.cfg_ && K_ == other.K_;
  }

 private:
  SystemConfig cfg_;
  int K_;
  std::vector<double> momenta_;
  std::vector<double> energies_;
};

using BasisPtr = std::shared_ptr<const EnergyBasis>;

inline BasisPtr make_basis(const SystemConfig& cfg, int K) {
  return std::make_shared<const EnergyBasis>(cfg, K);
}

// State as a complex coefficient vector over an EnergyBasis.
class WaveFunction {
 public:
  WaveFunction(BasisPtr basis, Eigen::VectorXcd coeffs)
      : basis_(std::move(basis)), c_(std::move(coeffs)) {
    if (!basis_) throw std::invalid_argument("WaveFunction: null basis");
    if (c_.size() != basis_->size())
      throw std::invalid_argument("WaveFunction: coefficient count mismatch");
    if (!c_.allFinite())
      throw std::invalid_argument("WaveFunction: non-finite coefficients");
  }

  const EnergyBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  const Eigen::VectorXcd& coeffs() const { return c_; }
  int size() const { return static_cast<int>(c_.size()); }

  complex coeff(int k) const { return c_[basis_->index_of(k)]; }

  double norm() const { return c_.norm(); }

  WaveFunction normalized() const {
    const double n = norm();
    if (n == 0.0)
      throw std::invalid_argument("WaveFunction: cannot normalize zero vector");
    return WaveFunction(basis_, c_ / n);
  }

  bool same_basis(const WaveFunction& other) const {
    return basis_ == other.basis_ || *basis_ == *other.basis_;
  }

 private:
  BasisPtr basis_;
  Eigen::VectorXcd c_;
};

// Uniform grid over [-l, l], endpoints included.
struct SpatialGrid {
  int M;
  double l;

  SpatialGrid(int points, double half_width) : M(points), l(half_width) {
    if (M < 2) throw std::invalid_argument("SpatialGrid: need M >= 2");
    if (!(l > 0.0)) throw std::invalid_argument("SpatialGrid: need l > 0");
  }

  double point(int j) const { return -l + 2.0 * l * j / (M - 1); }

  std::vector<double> points() const {
    std::vector<double> q(M);
    for (int j = 0; j < M; ++j) q[j] = point(j);
    return q;
  }
};

// Panel rule resolving the fastest basis oscillation of the given basis plus
// an optional extra frequency carried by the integrand itself.
inline PanelRule default_projection_rule(const EnergyBasis& basis,
                                         double extra_freq = 0.0) {
  const double freq =
      (basis.config().gamma + basis.K() * pi) / basis.config().l +
      std::abs(extra_freq);
  return rule_for_frequency(freq, -basis.config().l, basis.config().l);
}

struct ProjectionResult {
  WaveFunction wf;
  // Max coefficient change under panel doubling; reported quadrature bound.
  double quad_error_bound;
};

namespace detail {

template <typename F>
Eigen::VectorXcd project_on_grid(F&& f, const EnergyBasis& basis,
                                 const QuadratureGrid& grid) {
  const SystemConfig& cfg = basis.config();
  const int n = basis.size();
  std::vector<complex> values(grid.points.size());
  for (size_t i = 0; i < grid.points.size(); ++i) {
    const complex v = f(grid.points[i]);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("project_function: non-finite sample");
    values[i] = grid.weights[i] * v;
  }
  Eigen::VectorXcd c(n);
  const double amp = 1.0 / std::sqrt(2.0 * cfg.l);
  for (int idx = 0; idx < n; ++idx) {
    const double a = (cfg.gamma + basis.k_of(idx) * pi) / cfg.l;
    complex acc(0.0, 0.0);
    for (size_t i = 0; i < grid.points.size(); ++i)
      acc += std::polar(amp, -a * grid.points[i]) * values[i];
    c[idx] = acc;
  }
  return c;
}

}  // namespace detail

// c_k = int conj(phi_k) f dq by composite Gauss-Legendre; the reported bound
// compares against the same rule with doubled panel count and the finer
// result is the one returned.
template <typename F>
ProjectionResult project_function(F&& f, const BasisPtr& basis,
                                  PanelRule rule = PanelRule{0, 0}) {
  if (rule.nodes_per_panel <= 0 || rule.panels <= 0)
    rule = default_projection_rule(*basis);
  const SystemConfig& cfg = basis->config();
  const Eigen::VectorXcd coarse = detail::project_on_grid(
      f, *basis, quadrature_grid(-cfg.l, cfg.l, rule));
  PanelRule fine_rule{rule.nodes_per_panel, rule.panels * 2};
  const Eigen::VectorXcd fine = detail::project_on_grid(
      f, *basis, quadrature_grid(-cfg.l, cfg.l, fine_rule));
  const double bound = (fine - coarse).cwiseAbs().maxCoeff();
  return ProjectionResult{WaveFunction(basis, fine), bound};
}

// psi(q_j) = sum_k c_k phi_k(q_j), exact finite sum.
inline std::vector<complex> synthesize(const WaveFunction& wf,
                                       const SpatialGrid& grid) {
  const EnergyBasis& basis = wf.basis();
  const SystemConfig& cfg = basis.config();
  std::vector<complex> out(grid.M, complex(0.0, 0.0));
  const double amp = 1.0 / std::sqrt(2.0 * cfg.l);
  for (int j = 0; j < grid.M; ++j) {
    const double q = grid.point(j);
    complex acc(0.0, 0.0);
    for (int idx = 0; idx < basis.size(); ++idx) {
      const double a = (cfg.gamma + basis.k_of(idx) * pi) / cfg.l;
      acc += wf.coeffs()[idx] * std::polar(amp, a * q);
    }
    out[j] = acc;
  }
  return out;
}

}  // namespace chronos
