#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "chronos/common.hpp"

namespace chronos {

// Power series below this x, Hankel asymptotic expansion above. The series
// still converges fine at 12 in extended precision; the asymptotic terms have
// already decayed to ~1e-11 of the amplitude there for |nu| <= 2.
inline constexpr double bessel_series_asymptotic_switch = 12.0;

namespace detail {

inline long double bessel_j_series(double nu, double x) {
  // J_nu(x) = (x/2)^nu / Gamma(nu+1) * sum_m (-x^2/4)^m / (m! (nu+1)_m)
  const long double xl = x;
  const long double q = -xl * xl / 4.0L;
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int m = 1; m < 400; ++m) {
    term *= q / (static_cast<long double>(m) * (nu + m));
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-20L && m >= 30) break;
  }
  const long double prefactor =
      std::pow(xl / 2.0L, static_cast<long double>(nu)) /
      std::tgamma(static_cast<long double>(nu) + 1.0L);
  return prefactor * sum;
}

inline long double bessel_j_asymptotic(double nu, double x) {
  // Hankel expansion: J_nu(x) ~ sqrt(2/(pi x)) [P cos(chi) - Q sin(chi)],
  // chi = x - (nu/2 + 1/4) pi, truncated at the smallest term.
  const long double xl = x;
  const long double mu = 4.0L * nu * nu;
  long double P = 1.0L, Q = 0.0L;
  long double term = 1.0L;
  long double smallest = std::numeric_limits<long double>::max();
  for (int k = 1; k < 200; ++k) {
    const long double odd = 2.0L * k - 1.0L;
    term *= (mu - odd * odd) / (8.0L * k * xl);
    if (std::abs(term) >= smallest) break;
    smallest = std::abs(term);
    const int phase = (k / 2) % 2;  // signs cycle +,+,-,-
    const long double signed_term = phase ? -term : term;
    if (k % 2 == 1)
      Q += signed_term;
    else
      P += signed_term;
    if (std::abs(term) < 1e-20L) break;
  }
  const long double chi =
      xl - (0.5L * static_cast<long double>(nu) + 0.25L) *
               static_cast<long double>(pi);
  return std::sqrt(2.0L / (static_cast<long double>(pi) * xl)) *
         (P * std::cos(chi) - Q * std::sin(chi));
}

}  // namespace detail

// Bessel function of the first kind, real order. Supports the fractional
// orders needed here (|nu| around [0, 2)) plus negative integer orders via
// the reflection J_{-n} = (-1)^n J_n.
inline double bessel_j(double nu, double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_j: require x > 0");
  const double rounded = std::round(nu);
  if (nu < 0.0 && std::abs(nu - rounded) < 1e-14) {
    const int n = static_cast<int>(-rounded);
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return sign * bessel_j(-nu, x);
  }
  if (x <= bessel_series_asymptotic_switch)
    return static_cast<double>(detail::bessel_j_series(nu, x));
  return static_cast<double>(detail::bessel_j_asymptotic(nu, x));
}

// dJ_nu/dx by the standard recurrence form.
inline double bessel_j_derivative(double nu, double x) {
  return 0.5 * (bessel_j(nu - 1.0, x) - bessel_j(nu + 1.0, x));
}

// F(x) = J_{-3/4}(x) J_{-1/4}(x) - cot^2(gamma) J_{3/4}(x) J_{1/4}(x).
// Its positive zeros generate the discrete arrival-time spectrum.
inline double ctoa_characteristic(double x, double gamma) {
  if (!(gamma > 0.0 && gamma < pi / 2))
    throw std::domain_error("ctoa_characteristic: gamma outside (0, pi/2)");
  const double cot = std::cos(gamma) / std::sin(gamma);
  return bessel_j(-0.75, x) * bessel_j(-0.25, x) -
         cot * cot * bessel_j(0.75, x) * bessel_j(0.25, x);
}

// Magnitude of the two characteristic terms; the natural scale for residual
// acceptance (grows like cot^2 gamma near gamma = 0).
inline double ctoa_characteristic_scale(double x, double gamma) {
  const double cot = std::cos(gamma) / std::sin(gamma);
  return std::abs(bessel_j(-0.75, x) * bessel_j(-0.25, x)) +
         cot * cot * std::abs(bessel_j(0.75, x) * bessel_j(0.25, x));
}

// Ordered positive roots of the characteristic function.
struct RootTable {
  double gamma = 0.0;
  std::vector<double> roots;      // strictly increasing
  std::vector<double> residuals;  // |F(r_n)|

  int count() const { return static_cast<int>(roots.size()); }

  double root(int n) const {  // 1-based, matching tau_n indexing
    if (n < 1 || n > count())
      throw std::out_of_range("RootTable: root index out of range");
    return roots[n - 1];
  }
};

namespace detail {

inline double refine_root(double lo, double hi, double f_lo, double gamma) {
  // Bisection to a relative bracket of 1e-13, then two guarded secant steps
  // to push the residual to the evaluation noise floor.
  double a = lo, b = hi, fa = f_lo;
  while (b - a > 1e-13 * b) {
    const double mid = 0.5 * (a + b);
    const double fm = ctoa_characteristic(mid, gamma);
    if (fm == 0.0) return mid;
    if ((fa < 0.0) != (fm < 0.0)) {
      b = mid;
    } else {
      a = mid;
      fa = fm;
    }
  }
  double x0 = a, x1 = b;
  double f0 = ctoa_characteristic(x0, gamma);
  double f1 = ctoa_characteristic(x1, gamma);
  for (int i = 0; i < 2 && f0 != f1; ++i) {
    const double xs = x1 - f1 * (x1 - x0) / (f1 - f0);
    if (!(xs >= a && xs <= b)) break;
    const double fs = ctoa_characteristic(xs, gamma);
    x0 = x1;
    f0 = f1;
    x1 = xs;
    f1 = fs;
    if (fs == 0.0) break;
  }
  return std::abs(f1) <= std::abs(f0) ? x1 : x0;
}

}  // namespace detail

// Scan-and-bracket with bisection refinement. The first root sits near
// sqrt(3)/2 * tan(gamma) where the two characteristic terms first balance,
// so the scan starts a decade below that; consecutive roots are separated by
// O(pi/2), which the 0.05 step cannot skip.
inline RootTable find_ctoa_roots(double gamma, int count, double x_max) {
  if (count < 1) throw std::invalid_argument("find_ctoa_roots: count >= 1");
  if (!(gamma > 0.0 && gamma < pi / 2))
    throw std::domain_error("find_ctoa_roots: gamma outside (0, pi/2)");

  const double step = std::min(0.05, pi / 8.0);
  const double x_start =
      std::min(1e-3, 0.1 * std::sqrt(0.75) * std::tan(gamma));

  RootTable table;
  table.gamma = gamma;
  double x = x_start;
  double f = ctoa_characteristic(x, gamma);
  while (table.count() < count && x < x_max) {
    const double x_next = std::min(x + step, x_max);
    const double f_next = ctoa_characteristic(x_next, gamma);
    if ((f < 0.0) != (f_next < 0.0)) {
      const double r = detail::refine_root(x, x_next, f, gamma);
      table.roots.push_back(r);
      table.residuals.push_back(std::abs(ctoa_characteristic(r, gamma)));
    }
    x = x_next;
    f = f_next;
  }
  if (table.count() < count)
    throw numerical_error("find_ctoa_roots: x_max too small; found " +
                          std::to_string(table.count()) + " of " +
                          std::to_string(count) + " roots below " +
                          std::to_string(x_max));

  // No-missed-roots validation: a fine sign-change census up to the last
  // returned root must agree with the number of roots reported.
  const double x_last = table.roots.back();
  int crossings = 0;
  double xs = x_start;
  double fs = ctoa_characteristic(xs, gamma);
  const double fine = 1e-3;
  while (xs < x_last) {
    const double xn = std::min(xs + fine, x_last * (1.0 + 1e-12));
    const double fn = ctoa_characteristic(xn, gamma);
    if ((fs < 0.0) != (fn < 0.0)) ++crossings;
    xs = xn;
    fs = fn;
  }
  if (crossings != table.count())
    throw numerical_error(
        "find_ctoa_roots: sign-change census mismatch (missed root?): " +
        std::to_string(crossings) + " crossings vs " +
        std::to_string(table.count()) + " roots");
  return table;
}

}  // namespace chronos
