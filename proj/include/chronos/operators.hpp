#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <vector>

#include "chronos/core.hpp"
#include "chronos/hermitian.hpp"
#include "chronos/quadrature.hpp"
#include "chronos/specfun.hpp"

namespace chronos {

// Which commutation relation an operator satisfies on its canonical domain,
// written as [T,H] = i hbar s. The CTO is a passage-time-type solution with
// s = +1 (pinned algebraically by the zero-sum identity); the CTOA is a
// time-of-arrival-type solution, [H,T] = +i hbar, hence s = -1.
enum class OperatorKind { ctoa_tat, cto_ptt };

inline int ccr_sign(OperatorKind kind) {
  return kind == OperatorKind::cto_ptt ? +1 : -1;
}

inline const char* operator_name(OperatorKind kind) {
  return kind == OperatorKind::ctoa_tat ? "CTOA" : "CTO";
}

// Position-representation kernel of the arrival-time operator. H(0) = 1/2
// keeps the kernel Hermitian pointwise and the diagonal real.
inline complex ctoa_kernel(double q, double qp, const SystemConfig& cfg) {
  if (q < -cfg.l || q > cfg.l || qp < -cfg.l || qp > cfg.l)
    throw std::domain_error("ctoa_kernel: arguments outside [-l, l]");
  const double heaviside = q > qp ? 1.0 : (q < qp ? 0.0 : 0.5);
  const complex phase =
      std::polar(1.0, cfg.gamma) * heaviside +
      std::polar(1.0, -cfg.gamma) * (1.0 - heaviside);
  return -cfg.mu * (q + qp) / (4.0 * cfg.hbar * std::sin(cfg.gamma)) * phase;
}

namespace detail {

// Closed-form <phi_k| T1 |phi_k'>: the kernel splits over the triangles
// q' < q and q' > q, each an elementary polynomial-times-exponential
// integral. With a = (gamma + k pi)/l and b = (gamma + k' pi)/l:
//   I1 = int dq e^{-iaq} int_{-l}^{q} (q+q') e^{ibq'} dq'
//   I2 = int dq e^{-iaq} int_{q}^{l}  (q+q') e^{ibq'} dq'
//   T_{kk'} = -mu/(8 l hbar sin g) [e^{ig} I1 + e^{-ig} I2]
// The moment integrals E_m(c) = int_{-l}^{l} q^m e^{icq} dq are reduced with
// sin((gamma+k pi) l / l) = (-1)^k sin gamma etc. so no large-argument trig
// is evaluated.
inline complex ctoa_entry_closed(int k, int kp, const SystemConfig& cfg) {
  const double l = cfg.l;
  const double g = cfg.gamma;
  const double a = (g + k * pi) / l;
  const double b = (g + kp * pi) / l;
  const int m = kp - k;
  const double sk = (k % 2 == 0) ? 1.0 : -1.0;
  const double skp = (kp % 2 == 0) ? 1.0 : -1.0;
  const double sm = (m % 2 == 0) ? 1.0 : -1.0;

  // E_m(-a), reduced: sin(al) = sk sin g, cos(al) = sk cos g.
  const double sin_g = std::sin(g);
  const double cos_g = std::cos(g);
  const complex E0ma(2.0 * sk * sin_g / a, 0.0);
  const complex E1ma(0.0, 2.0 * sk * (a * l * cos_g - sin_g) / (a * a));

  // E_m(delta) with delta = m pi / l: exact zeros at integer multiples.
  const complex E0d = (m == 0) ? complex(2.0 * l, 0.0) : complex(0.0, 0.0);
  const complex E1d =
      (m == 0) ? complex(0.0, 0.0) : complex(0.0, -2.0 * sm * l * l / (m * pi));

  const complex eibl = skp * std::polar(1.0, g);    // e^{+ibl}
  const complex emibl = skp * std::polar(1.0, -g);  // e^{-ibl}
  const complex ib(0.0, b);
  const complex ib2 = ib * ib;

  const complex I1 = (2.0 * E1d - emibl * (E1ma - l * E0ma)) / ib -
                     (E0d - emibl * E0ma) / ib2;
  const complex I2 = (eibl * (E1ma + l * E0ma) - 2.0 * E1d) / ib -
                     (eibl * E0ma - E0d) / ib2;

  const complex pref(-cfg.mu / (8.0 * l * cfg.hbar * sin_g), 0.0);
  return pref * (std::polar(1.0, g) * I1 + std::polar(1.0, -g) * I2);
}

}  // namespace detail

inline complex ctoa_matrix_element(int k, int kp, const SystemConfig& cfg) {
  return detail::ctoa_entry_closed(k, kp, cfg);
}

// Arrival-time operator truncated to the energy basis, via the closed form.
inline HermitianMatrix ctoa_matrix(const EnergyBasis& basis) {
  const SystemConfig cfg = basis.config();
  return HermitianMatrix::from_upper(basis.size(), [&](int i, int j) {
    return detail::ctoa_entry_closed(basis.k_of(i), basis.k_of(j), cfg);
  });
}

// Independent panel-quadrature route over the two kernel triangles; used to
// cross-check the closed form.
inline complex ctoa_matrix_element_quadrature(int k, int kp,
                                              const SystemConfig& cfg,
                                              int nodes_per_panel = 32) {
  const double l = cfg.l;
  const double a = (cfg.gamma + k * pi) / l;
  const double b = (cfg.gamma + kp * pi) / l;
  const double freq = std::max(std::abs(a), std::abs(b));
  const int panels = panels_for_frequency(freq, -l, l, nodes_per_panel);
  const PanelRule rule{nodes_per_panel, panels};

  auto inner = [&](double q) {
    complex acc(0.0, 0.0);
    if (q > -l) {
      const PanelRule left{nodes_per_panel,
                           std::max(1, panels_for_frequency(std::abs(b), -l, q,
                                                            nodes_per_panel))};
      acc += integrate(
          [&](double qp) {
            return ctoa_kernel(q, qp, cfg) * std::polar(1.0, b * qp);
          },
          -l, q, left);
    }
    if (q < l) {
      const PanelRule right{nodes_per_panel,
                            std::max(1, panels_for_frequency(std::abs(b), q, l,
                                                             nodes_per_panel))};
      acc += integrate(
          [&](double qp) {
            return ctoa_kernel(q, qp, cfg) * std::polar(1.0, b * qp);
          },
          q, l, right);
    }
    return std::polar(1.0, -a * q) * acc;
  };
  return integrate(inner, -l, l, rule) / (2.0 * l);
}

inline HermitianMatrix ctoa_matrix_quadrature(const EnergyBasis& basis,
                                              int nodes_per_panel = 32) {
  const SystemConfig cfg = basis.config();
  return HermitianMatrix::from_upper(basis.size(), [&](int i, int j) {
    return ctoa_matrix_element_quadrature(basis.k_of(i), basis.k_of(j), cfg,
                                          nodes_per_panel);
  });
}

// Characteristic time operator: T_{kl} = i hbar / (E_k - E_l), zero diagonal.
inline HermitianMatrix cto_matrix(const EnergyBasis& basis) {
  const std::vector<double>& e = basis.energies();
  const int n = basis.size();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (e[i] == e[j])
        throw std::invalid_argument(
            "cto_matrix: degenerate energy pair in basis");
  return HermitianMatrix::from_upper(n, [&](int i, int j) {
    if (i == j) return complex(0.0, 0.0);
    return complex(0.0, basis.config().hbar / (e[i] - e[j]));
  });
}

// tau = mu l^2 / (4 hbar r); the caller applies the spectral sign.
inline double ctoa_eigenvalue_from_root(double r, const SystemConfig& cfg) {
  if (!(r > 0.0))
    throw std::domain_error("ctoa_eigenvalue_from_root: require r > 0");
  return cfg.mu * cfg.l * cfg.l / (4.0 * cfg.hbar * r);
}

namespace detail {

// (4x)^nu J_{-nu}(x), finite at x -> 0+ with limit 8^nu / Gamma(1 - nu).
inline double scaled_bessel_neg(double nu, double x) {
  if (x > 0.5) return std::pow(4.0 * x, nu) * bessel_j(-nu, x);
  const long double q = -static_cast<long double>(x) * x / 4.0L;
  long double term = 1.0L / std::tgamma(1.0L - static_cast<long double>(nu));
  long double sum = term;
  for (int m = 1; m < 60; ++m) {
    term *= q / (static_cast<long double>(m) * (m - nu));
    sum += term;
    if (std::abs(term) < 1e-20L * std::abs(sum)) break;
  }
  return static_cast<double>(std::pow(8.0L, static_cast<long double>(nu)) * sum);
}

// (4x)^nu J_rho(x) with nu + rho = 1; vanishes like x as x -> 0+.
inline double scaled_bessel_pos(double nu, double rho, double x) {
  if (x > 0.0) return std::pow(4.0 * x, nu) * bessel_j(rho, x);
  return 0.0;
}

}  // namespace detail

// Analytic arrival-time eigenfunction built from a characteristic root. The
// two Bessel branches combine as
//   phi^{s}(q) = e^{-i s r u} [ A(u) C1 + s (2 q sqrt(r)/l) B(u) C2 ],
// u = r q^2 / l^2, where A and B carry the (4u)^{3/4} / (4u)^{1/4} scalings
// that keep the q -> 0 limit finite.
class AnalyticCtoaEigenfunction {
 public:
  static AnalyticCtoaEigenfunction make(int n, int sign, const RootTable& roots,
                                        const SystemConfig& cfg) {
    if (sign != +1 && sign != -1)
      throw std::invalid_argument("AnalyticCtoaEigenfunction: sign is +1/-1");
    AnalyticCtoaEigenfunction fn(n, sign, roots.root(n), cfg);
    fn.normalize();
    return fn;
  }

  int n() const { return n_; }
  int sign() const { return sign_; }
  double root() const { return r_; }
  double eigenvalue() const {
    return sign_ * ctoa_eigenvalue_from_root(r_, cfg_);
  }
  double normalization() const { return norm_; }
  const SystemConfig& config() const { return cfg_; }

  complex operator()(double q) const { return norm_ * unnormalized(q); }

  complex unnormalized(double q) const {
    if (q < -cfg_.l || q > cfg_.l)
      throw std::domain_error("AnalyticCtoaEigenfunction: q outside [-l, l]");
    const double u = r_ * q * q / (cfg_.l * cfg_.l);
    const double a34 = detail::scaled_bessel_neg(0.75, u);
    const double a14 = u > 0.0 ? detail::scaled_bessel_pos(0.75, 0.25, u) : 0.0;
    const double b14 = detail::scaled_bessel_neg(0.25, u);
    const double b34 = u > 0.0 ? detail::scaled_bessel_pos(0.25, 0.75, u) : 0.0;
    const double s = static_cast<double>(sign_);
    const complex branch_a(a34, -s * a14);
    const complex branch_b(b14, -s * b34);
    const double radial = 2.0 * q * std::sqrt(r_) / cfg_.l;
    return std::polar(1.0, -s * u) * (branch_a * c1_ + s * radial * branch_b * c2_);
  }

 private:
  AnalyticCtoaEigenfunction(int n, int sign, double r, const SystemConfig& cfg)
      : n_(n), sign_(sign), r_(r), cfg_(cfg) {
    const double cot = std::cos(cfg.gamma) / std::sin(cfg.gamma);
    c1_ = bessel_j(-0.25, r_) - cot * bessel_j(0.75, r_);
    c2_ = bessel_j(-0.75, r_) - cot * bessel_j(0.25, r_);
  }

  void normalize() {
    const PanelRule rule = rule_for_frequency(8.0 * r_ / cfg_.l + 8.0, -cfg_.l,
                                              cfg_.l);
    const double norm_sq = integrate(
        [&](double q) { return std::norm(unnormalized(q)); }, -cfg_.l, cfg_.l,
        rule);
    if (!(norm_sq > 0.0))
      throw numerical_error("AnalyticCtoaEigenfunction: zero norm");
    norm_ = 1.0 / std::sqrt(norm_sq);
  }

  int n_;
  int sign_;
  double r_;
  SystemConfig cfg_;
  double c1_ = 0.0;
  double c2_ = 0.0;
  double norm_ = 1.0;
};

// || [T,H] psi - i hbar s psi || / || psi || with H diagonal in the energy
// basis and s = ccr_sign(kind).
inline double ccr_defect(const HermitianMatrix& t, const EnergyBasis& basis,
                         const WaveFunction& wf, OperatorKind kind) {
  if (t.dim() != basis.size() || wf.size() != basis.size())
    throw std::invalid_argument("ccr_defect: dimension mismatch");
  const double norm = wf.norm();
  if (norm == 0.0)
    throw std::invalid_argument("ccr_defect: zero vector");
  const Eigen::VectorXcd& c = wf.coeffs();
  const int n = basis.size();
  Eigen::VectorXcd hc(n);
  for (int i = 0; i < n; ++i) hc[i] = basis.energies()[i] * c[i];
  const Eigen::VectorXcd tc = t.matrix() * c;
  Eigen::VectorXcd commutator = t.matrix() * hc;
  for (int i = 0; i < n; ++i) commutator[i] -= basis.energies()[i] * tc[i];
  const complex is(0.0, basis.config().hbar * ccr_sign(kind));
  return (commutator - is * c).norm() / norm;
}

namespace detail {

// Deterministic uniform doubles in [0, 1) from the raw 64-bit stream, so
// samples are identical across standard library implementations.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : state_(seed) {}

  double next() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  complex next_complex_unit() {
    return complex(2.0 * next() - 1.0, 2.0 * next() - 1.0);
  }

 private:
  std::uint64_t next_u64() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  std::uint64_t state_;
};

}  // namespace detail

// Pseudo-random normalized state inside the operator's canonical domain.
// CTO: coefficients with exactly zero sum. CTOA: a (l^2-q^2)^2-enveloped
// polynomial with an (l^2-q^2)^3-shaped correction cancelling the mean, so
// the boundary values, boundary derivatives and integral all vanish.
inline WaveFunction canonical_domain_sample(OperatorKind kind,
                                            const BasisPtr& basis,
                                            std::uint64_t seed) {
  detail::UniformStream rng(seed * 0x9e3779b97f4a7c15ull + 1234567ull);
  const int n = basis->size();
  if (kind == OperatorKind::cto_ptt) {
    Eigen::VectorXcd c(n);
    for (int i = 0; i < n; ++i) c[i] = rng.next_complex_unit();
    // two-pass mean removal keeps the residual sum at rounding level
    for (int pass = 0; pass < 2; ++pass) {
      complex mean = c.sum() / static_cast<double>(n);
      c.array() -= mean;
    }
    return WaveFunction(basis, c).normalized();
  }

  const double l = basis->config().l;
  constexpr int degree = 4;
  std::vector<complex> poly(degree + 1);
  for (auto& a : poly) a = rng.next_complex_unit();

  // int q^j (l^2-q^2)^2 dq over [-l, l] for even j; odd moments vanish.
  auto envelope_moment = [l](int j) {
    if (j % 2 == 1) return 0.0;
    return 2.0 * std::pow(l, j + 5) *
           (1.0 / (j + 1) - 2.0 / (j + 3) + 1.0 / (j + 5));
  };
  complex integral(0.0, 0.0);
  for (int j = 0; j <= degree; ++j) integral += poly[j] * envelope_moment(j);
  const double cubic_moment = 32.0 * std::pow(l, 7) / 35.0;
  const complex correction = -integral / cubic_moment;

  auto f = [&](double q) {
    const double env = (l * l - q * q) * (l * l - q * q);
    complex p(0.0, 0.0);
    double qj = 1.0;
    for (int j = 0; j <= degree; ++j) {
      p += poly[j] * qj;
      qj *= q;
    }
    return env * p + correction * env * (l * l - q * q);
  };
  return project_function(f, basis).wf.normalized();
}

// 1-based map from n (descending positive eigenvalues, tau_1 largest) to the
// column index in an ascending EigenSystem.
inline std::vector<int> positive_descending_indices(
    const Eigen::VectorXd& ascending) {
  std::vector<int> idx;
  for (int i = static_cast<int>(ascending.size()) - 1; i >= 0; --i) {
    if (ascending[i] > 0.0) idx.push_back(i);
  }
  return idx;
}

}  // namespace chronos
