#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the library's quadrature.

#include <cmath>
#include <cstddef>
#include <functional>

namespace oracle {

inline constexpr double hbar = 1.054571817e-34;
inline constexpr double c = 299792458.0;
inline constexpr double k_B = 1.380649e-23;

/// Polylogarithm Li_s(x) for 0 <= x < 1 by direct series.
inline double polylog(int s, double x) {
  double sum = 0.0, xk = x;
  for (int k = 1; k < 100000; ++k) {
    const double term = xk / std::pow(static_cast<double>(k), s);
    sum += term;
    if (term < 1e-18 * sum) break;
    xk *= x;
  }
  return sum;
}

/// Perfect-conductor zeta^2 * int_1^inf p ln[(1-e^{-bp})^2] dp, b = 2 zeta a / c:
/// -2 zeta^2 [Li2(e^-b)/b + Li3(e^-b)/b^2].
inline double ideal_spectral(double zeta, double a) {
  const double b = 2.0 * zeta * a / c;
  const double x = std::exp(-b);
  return -2.0 * zeta * zeta * (polylog(2, x) / b + polylog(3, x) / (b * b));
}

/// Perfect-conductor Matsubara term n >= 1 in pN.
inline double ideal_matsubara_term_pn(std::size_t n, double radius, double a, double temperature) {
  const double zeta = 2.0 * M_PI * static_cast<double>(n) * k_B * temperature / hbar;
  return -k_B * temperature * radius / (c * c) * ideal_spectral(zeta, a) * 1e12;
}

/// Composite Simpson rule with n (even) intervals; used for brute-force checks.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

inline double rel_diff(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

}  // namespace oracle
