#include "casimir/dielectric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"

namespace casimir {

namespace {

constexpr double kTwoOverPi = 2.0 / constants::pi;
constexpr double kSeriesWindow = 1e-4;

// Second-order expansion of the bracket / (zeta^2 - wtau^2) in u = zeta/wtau - 1,
// scaled by wtau^2. x = omega0 / wtau.
double epsilon1_series(double x, double u) {
  const double at = std::atan(x);
  const double q = 1.0 + x * x;
  const double c0 = 0.5 * (at + x / q);
  const double c1 = -0.75 * at - (3.0 * x * x * x + 5.0 * x) / (4.0 * q * q);
  const double c2 =
      0.875 * at + (21.0 * std::pow(x, 5) + 56.0 * x * x * x + 51.0 * x) / (24.0 * q * q * q);
  return c0 + u * (c1 + u * c2);
}

}  // namespace

double epsilon1_analytic(const DrudeParameters& p, double omega0, double zeta) {
  if (!(zeta > 0.0)) throw RangeError("epsilon1_analytic requires zeta > 0");
  if (!(omega0 >= 0.0)) throw RangeError("epsilon1_analytic requires omega0 >= 0");
  const double wp2 = p.omega_p * p.omega_p;
  const double wt = p.omega_tau;
  const double u = zeta / wt - 1.0;
  if (std::abs(u) < kSeriesWindow) {
    return kTwoOverPi * wp2 / (wt * wt) * epsilon1_series(omega0 / wt, u);
  }
  const double bracket = std::atan(omega0 / wt) - (wt / zeta) * std::atan(omega0 / zeta);
  return kTwoOverPi * wp2 / ((zeta - wt) * (zeta + wt)) * bracket;
}

DielectricModel::DielectricModel(OpticalDataset dataset, DielectricModelConfig config)
    : dataset_(std::move(dataset)), config_(config) {
  config_.drude.validate();
  config_.boundaries.validate();
  if (!(config_.tail_exponent > 1.0)) {
    throw ValidationError("tail_exponent must exceed 1 for the dispersion integral to converge");
  }
  if (!(config_.quadrature.rel_tol > 0.0 && config_.quadrature.rel_tol < 1.0)) {
    throw ValidationError("quadrature tolerance must lie in (0, 1)");
  }
}

double DielectricModel::eps2_at(double omega) const {
  if (omega < dataset_.omega_min()) return drude_eps2(config_.drude, omega);
  if (omega > dataset_.omega_max()) {
    const auto& last = dataset_.samples().back();
    return last.eps2 * std::pow(last.omega / omega, config_.tail_exponent);
  }
  return dataset_.interpolate(omega);
}

// (2/pi) * integral of omega eps''(omega) / (omega^2 + zeta^2) over [lo, hi], hi may be inf.
double DielectricModel::transform(double lo, double hi, double zeta, bool* touches_tail) const {
  if (!(hi > lo)) return 0.0;
  const double zeta2 = zeta * zeta;
  const auto& opts = config_.quadrature;

  // Breakpoints: every tabulated node, the Drude/data junction, and the
  // peak of the Lorentzian weight.
  std::vector<double> edges{lo};
  for (const auto& s : dataset_.samples()) {
    if (s.omega > lo && s.omega < hi) edges.push_back(s.omega);
  }
  if (zeta > lo && zeta < hi) edges.push_back(zeta);
  const double w_max = dataset_.omega_max();
  const double finite_hi = std::min(hi, w_max);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  if (edges.back() < finite_hi) edges.push_back(finite_hi);

  auto weight = [&](double omega) { return omega * eps2_at(omega) / (omega * omega + zeta2); };
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (edges[i] >= finite_hi) break;
    sum += quad::integrate(weight, edges[i], std::min(edges[i + 1], finite_hi), opts,
                           "dispersion integral").value;
  }

  if (hi > w_max) {
    // Power-law tail in s = ln(omega / t0) where t0 = max(lo, w_max).
    const double t0 = std::max(lo, w_max);
    const double e0 = eps2_at(t0);
    const double k = config_.tail_exponent;
    const double r2 = zeta2 / (t0 * t0);
    auto tail = [&](double s) { return e0 * std::exp(-k * s) / (1.0 + r2 * std::exp(-2.0 * s)); };
    const double s_hi = std::isinf(hi) ? quad::infinity : std::log(hi / t0);
    const double s_peak = std::log(zeta / t0);
    double part = 0.0;
    if (s_peak > 0.0 && s_peak < s_hi) {
      part += quad::integrate(tail, 0.0, s_peak, opts, "dispersion tail").value;
      part += quad::integrate(tail, s_peak, s_hi, opts, "dispersion tail").value;
    } else {
      part += quad::integrate(tail, 0.0, s_hi, opts, "dispersion tail").value;
    }
    sum += part;
    if (touches_tail) *touches_tail = true;
  }
  return kTwoOverPi * sum;
}

EpsilonDecomposition DielectricModel::decompose(double zeta) const {
  if (!(zeta > 0.0) || !std::isfinite(zeta)) {
    throw RangeError("kk_epsilon requires finite zeta > 0");
  }
  const auto& b = config_.boundaries;
  EpsilonDecomposition d;
  d.eps1 = epsilon1_analytic(config_.drude, b.omega0, zeta);
  d.eps2_part = transform(b.omega0, b.omega1, zeta, nullptr);
  d.eps3_part = transform(b.omega1, quad::infinity, zeta, nullptr);
  const double tail_start = std::max(b.omega0, dataset_.omega_max());
  d.tail = transform(tail_start, quad::infinity, zeta, nullptr);
  return d;
}

namespace {

struct LogSample {
  double ln_omega;
  double ln_eps2;
  double omega2;
};

// Residuals r_i = ln model - ln data for log-parameters (ln wp, ln wtau).
double cost(const std::vector<LogSample>& pts, double ln_wp, double ln_wt) {
  const double wt2 = std::exp(2.0 * ln_wt);
  double sum = 0.0;
  for (const auto& s : pts) {
    const double r = 2.0 * ln_wp + ln_wt - s.ln_omega - std::log(s.omega2 + wt2) - s.ln_eps2;
    sum += r * r;
  }
  return sum;
}

// Best ln wp for fixed ln wtau (closed form, residual is linear in ln wp).
double best_ln_wp(const std::vector<LogSample>& pts, double ln_wt) {
  const double wt2 = std::exp(2.0 * ln_wt);
  double acc = 0.0;
  for (const auto& s : pts) acc += s.ln_eps2 - ln_wt + s.ln_omega + std::log(s.omega2 + wt2);
  return 0.5 * acc / static_cast<double>(pts.size());
}

}  // namespace

DrudeFit fit_drude(const OpticalDataset& ds, std::pair<double, double> range, const FitMode& mode) {
  const auto [lo, hi] = range;
  if (!(lo < hi) || lo < ds.omega_min() || hi > ds.omega_max()) {
    std::ostringstream os;
    os << "fit range [" << lo << ", " << hi << "] not within dataset coverage ["
       << ds.omega_min() << ", " << ds.omega_max() << "]";
    throw RangeError(os.str());
  }
  std::vector<LogSample> pts;
  for (const auto& s : ds.samples()) {
    if (s.omega >= lo && s.omega <= hi) {
      pts.push_back({std::log(s.omega), std::log(s.eps2), s.omega * s.omega});
    }
  }
  if (pts.size() < 3) {
    throw ValidationError("Drude fit needs at least 3 samples in range, found " +
                          std::to_string(pts.size()));
  }
  if (mode.fixed_omega_p && !(*mode.fixed_omega_p > 0.0)) {
    throw ValidationError("fixed omega_p must be positive");
  }
  const bool fit_wp = !mode.fixed_omega_p.has_value();

  // Coarse scan in ln wtau seeds the local solver; the problem is nearly
  // degenerate when all samples lie far above wtau.
  double ln_wt = 0.0;
  double ln_wp = fit_wp ? 0.0 : std::log(*mode.fixed_omega_p);
  {
    double best = std::numeric_limits<double>::infinity();
    const double scan_lo = std::log(1e9), scan_hi = std::log(1e17);
    constexpr int kScan = 400;
    for (int i = 0; i <= kScan; ++i) {
      const double t = scan_lo + (scan_hi - scan_lo) * i / kScan;
      const double wp = fit_wp ? best_ln_wp(pts, t) : ln_wp;
      const double c = cost(pts, wp, t);
      if (c < best) {
        best = c;
        ln_wt = t;
        if (fit_wp) ln_wp = wp;
      }
    }
  }

  // Levenberg-Marquardt on (ln wp, ln wtau).
  double lambda = 1e-3;
  double current = cost(pts, ln_wp, ln_wt);
  unsigned iter = 0;
  constexpr unsigned kMaxIter = 500;
  bool converged = false;
  for (; iter < kMaxIter; ++iter) {
    double a00 = 0, a01 = 0, a11 = 0, g0 = 0, g1 = 0;
    const double wt2 = std::exp(2.0 * ln_wt);
    for (const auto& s : pts) {
      const double r = 2.0 * ln_wp + ln_wt - s.ln_omega - std::log(s.omega2 + wt2) - s.ln_eps2;
      const double j0 = 2.0;
      const double j1 = 1.0 - 2.0 * wt2 / (s.omega2 + wt2);
      a00 += j0 * j0;
      a01 += j0 * j1;
      a11 += j1 * j1;
      g0 += j0 * r;
      g1 += j1 * r;
    }
    double d0 = 0.0, d1 = 0.0;
    bool accepted = false;
    for (int tries = 0; tries < 60 && !accepted; ++tries) {
      const double m00 = a00 * (1.0 + lambda), m11 = a11 * (1.0 + lambda);
      if (fit_wp) {
        const double det = m00 * m11 - a01 * a01;
        if (det == 0.0 || !std::isfinite(det)) break;
        d0 = -(m11 * g0 - a01 * g1) / det;
        d1 = -(m00 * g1 - a01 * g0) / det;
      } else {
        d0 = 0.0;
        d1 = m11 > 0.0 ? -g1 / m11 : 0.0;
      }
      const double trial = cost(pts, ln_wp + d0, ln_wt + d1);
      if (trial <= current) {
        accepted = true;
        ln_wp += d0;
        ln_wt += d1;
        const double drop = current - trial;
        current = trial;
        lambda = std::max(lambda * 0.1, 1e-12);
        if (std::max(std::abs(d0), std::abs(d1)) < 1e-13 ||
            drop <= 1e-30 + 1e-15 * current) {
          converged = true;
        }
      } else {
        lambda *= 10.0;
      }
    }
    if (!accepted) {
      // No descent direction left: at a minimum to working precision.
      converged = true;
    }
    if (converged) break;
  }
  if (!converged) {
    std::ostringstream os;
    os << "Drude fit did not converge after " << kMaxIter << " iterations (omega_p="
       << std::exp(ln_wp) << ", omega_tau=" << std::exp(ln_wt) << ", cost=" << current << ")";
    throw ComputeError(os.str());
  }

  DrudeFit fit;
  fit.params = {fit_wp ? std::exp(ln_wp) : *mode.fixed_omega_p, std::exp(ln_wt)};
  fit.params.validate();
  fit.rms_log_residual = std::sqrt(current / static_cast<double>(pts.size()));
  fit.points = pts.size();
  fit.iterations = iter;
  return fit;
}

}  // namespace casimir
