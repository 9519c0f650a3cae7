#include "casimir/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "casimir/error.hpp"

namespace casimir::quad {

namespace {

// 15-point Kronrod nodes on [0, 1] (symmetric) with the embedded 7-point Gauss weights.
constexpr std::array<double, 8> kNodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  double value, error, l1;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel kronrod15(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  double abs_sum = std::abs(kronrod);
  std::array<double, 7> f1{}, f2{};
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kNodes[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    const double pair = f1[j] + f2[j];
    kronrod += kKronrodWeights[j] * pair;
    abs_sum += kKronrodWeights[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  // Spread of the integrand around its mean, used to scale the error estimate.
  const double mean = 0.5 * kronrod;
  double spread = kKronrodWeights[7] * std::abs(fc - mean);
  for (std::size_t j = 0; j < 7; ++j) {
    spread += kKronrodWeights[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  const double scale = std::abs(half);
  double error = std::abs((kronrod - gauss) * half);
  spread *= scale;
  abs_sum *= scale;
  if (spread != 0.0 && error != 0.0) {
    error = spread * std::min(1.0, std::pow(200.0 * error / spread, 1.5));
  }
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * abs_sum;
  if (abs_sum > std::numeric_limits<double>::min() / roundoff) error = std::max(error, roundoff);
  return {a, b, kronrod * half, error, abs_sum};
}

template <class F>
Result adaptive(const F& f, double a, double b, const Options& opts, std::string_view what) {
  std::priority_queue<Panel> heap;
  heap.push(kronrod15(f, a, b));
  double value = heap.top().value;
  double error = heap.top().error;
  double l1 = heap.top().l1;
  std::size_t panels = 1;

  auto target = [&] { return std::max(opts.rel_tol * std::abs(value), opts.abs_tol); };
  while (error > target()) {
    if (panels >= opts.max_panels) break;
    const Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b))) break;
    heap.pop();
    const Panel left = kronrod15(f, worst.a, mid);
    const Panel right = kronrod15(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    heap.push(left);
    heap.push(right);
    ++panels;
  }

  // Re-sum to shed accumulated update rounding.
  Result r{0.0, 0.0, 0.0};
  while (!heap.empty()) {
    r.value += heap.top().value;
    r.error += heap.top().error;
    r.l1 += heap.top().l1;
    heap.pop();
  }
  value = r.value;
  if (!std::isfinite(r.value)) {
    std::ostringstream os;
    os << what << ": non-finite result on [" << a << ", " << b << "]";
    throw ComputeError(os.str());
  }
  if (r.error > target()) {
    std::ostringstream os;
    os << what << ": quadrature did not converge on [" << a << ", " << b << "] (value "
       << r.value << ", error " << r.error << ", target " << target() << ", " << panels
       << " panels)";
    throw ComputeError(os.str());
  }
  return r;
}

}  // namespace

Result integrate(const Integrand& f, double a, double b, const Options& opts,
                 std::string_view what) {
  if (std::isnan(a) || std::isnan(b) || std::isinf(a) || b < a) {
    throw RangeError(std::string(what) + ": invalid integration bounds");
  }
  if (a == b) return {};
  if (std::isinf(b)) {
    // x = a + t / (1 - t), t in [0, 1).
    auto mapped = [&](double t) {
      const double u = 1.0 - t;
      return f(a + t / u) / (u * u);
    };
    return adaptive(mapped, 0.0, 1.0, opts, what);
  }
  return adaptive(f, a, b, opts, what);
}

Result integrate_panels(const Integrand& f, std::span<const double> edges, const Options& opts,
                        std::string_view what) {
  Result total;
  if (edges.size() < 2) return total;
  // A coarse pass fixes the overall magnitude so that panels contributing
  // far below rel_tol of the total are not refined to their own relative tolerance.
  double scale = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (std::isinf(edges[i + 1])) {
      const double a = edges[i];
      auto mapped = [&](double t) {
        const double u = 1.0 - t;
        return f(a + t / u) / (u * u);
      };
      scale += std::abs(kronrod15(mapped, 0.0, 1.0).value);
    } else {
      scale += std::abs(kronrod15(f, edges[i], edges[i + 1]).value);
    }
  }
  Options panel_opts = opts;
  panel_opts.abs_tol =
      std::max(opts.abs_tol, 0.1 * opts.rel_tol * scale / static_cast<double>(edges.size() - 1));
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const Result part = integrate(f, edges[i], edges[i + 1], panel_opts, what);
    total.value += part.value;
    total.error += part.error;
    total.l1 += part.l1;
  }
  return total;
}

}  // namespace casimir::quad
