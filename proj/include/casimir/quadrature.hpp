#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string_view>

namespace casimir::quad {

struct Options {
  double rel_tol = 1e-9;
  double abs_tol = 0.0;
  std::size_t max_panels = 4000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;  // integral of |f|
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 15-point Gauss-Kronrod on [a, b]; `b` may be +infinity.
/// Bisects the panel with the largest error until the summed estimate drops
/// below max(rel_tol * |I|, abs_tol). Throws ComputeError otherwise.
Result integrate(const Integrand& f, double a, double b, const Options& opts,
                 std::string_view what = "integral");

/// Sum of `integrate` over consecutive panels [edges[i], edges[i+1]].
Result integrate_panels(const Integrand& f, std::span<const double> edges, const Options& opts, std::string_view what = "integral");

inline constexpr double infinity = std::numeric_limits<double>::infinity();

}  // namespace casimir::quad
