#include "casimir/lifshitz.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {

using constants::c;
using constants::hbar;
using constants::k_B;
using constants::pi;

void Geometry::validate() const {
  if (!(sphere_radius > 0.0) || !(separation > 0.0) || !std::isfinite(sphere_radius) ||
      !std::isfinite(separation)) {
    std::ostringstream os;
    os << "geometry requires positive sphere radius and separation (R=" << sphere_radius
       << ", a=" << separation << ")";
    throw ValidationError(os.str());
  }
}

std::optional<std::string> Geometry::pft_warning() const {
  if (sphere_radius < 100.0 * separation) {
    std::ostringstream os;
    os << "R/a = " << sphere_radius / separation
       << " < 100: proximity-force approximation may be inaccurate";
    return os.str();
  }
  return std::nullopt;
}

void ThermalState::validate() const {
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
    throw ValidationError("temperature must be >= 0 K");
  }
}

const char* to_string(Prescription p) {
  return p == Prescription::schwinger ? "schwinger" : "halved";
}

Prescription parse_prescription(const std::string& name) {
  if (name == "schwinger") return Prescription::schwinger;
  if (name == "halved") return Prescription::halved;
  throw ValidationError("unknown n=0 prescription '" + name + "' (expected schwinger or halved)");
}

void LifshitzOptions::validate() const {
  auto in_unit = [](double x) { return x > 0.0 && x < 1.0; };
  if (!in_unit(rel_tol) || !in_unit(zero_t_rel_tol) || !in_unit(truncation)) {
    throw ValidationError("tolerances must lie in (0, 1)");
  }
  if (consecutive == 0 || n_max == 0 || panels_per_decade == 0) {
    throw ValidationError("consecutive, n_max and panels_per_decade must be positive");
  }
  if (!(zeta_lo > 0.0) || !(zeta_hi > zeta_lo)) {
    throw ValidationError("frequency panels require 0 < zeta_lo < zeta_hi");
  }
}

Permittivity perfect_conductor() {
  return [](double) { return std::numeric_limits<double>::infinity(); };
}

Permittivity drude_permittivity(const DrudeParameters& p) {
  p.validate();
  return [p](double zeta) { return drude_eps_imag_axis(p, zeta); };
}

Permittivity model_permittivity(const DielectricModel& model) {
  return [&model](double zeta) { return model(zeta); };
}

double ideal_force(const Geometry& g) {
  g.validate();
  const double a3 = g.separation * g.separation * g.separation;
  return pi * pi * pi * hbar * c * g.sphere_radius / (360.0 * a3) / constants::piconewton;
}

double classical_term(const Geometry& g, const ThermalState& t, Prescription prescription) {
  g.validate();
  t.validate();
  const double full = k_B * t.temperature * g.sphere_radius * constants::zeta3 /
                      (4.0 * g.separation * g.separation) / constants::piconewton;
  return prescription == Prescription::schwinger ? full : 0.5 * full;
}

namespace {

// ln(1 - exp(log_g)) without cancellation near either end.
double log1m_exp(double log_g) {
  if (log_g < -700.0) return 0.0;  // below double resolution of any partner term
  return log_g < -0.693147180559945 ? std::log1p(-std::exp(log_g)) : std::log(-std::expm1(log_g));
}

}  // namespace

double reflection_te(double eps, double p) {
  if (std::isinf(eps)) return -1.0;
  const double s = std::sqrt(eps - 1.0 + p * p);
  return (1.0 - eps) / ((p + s) * (p + s));
}

double reflection_tm(double eps, double p) {
  if (std::isinf(eps)) return 1.0;
  const double s = std::sqrt(eps - 1.0 + p * p);
  const double ep_s = eps * p + s;
  return (eps - 1.0) * ((eps + 1.0) * p * p - 1.0) / (ep_s * ep_s);
}

double spectral_function(double zeta, double eps, double separation, double rel_tol) {
  if (!(zeta > 0.0)) throw RangeError("spectral_function requires zeta > 0");
  if (!(eps > 1.0)) {
    std::ostringstream os;
    os << "eps(i zeta) must exceed 1 (got " << eps << " at zeta=" << zeta << ")";
    throw ComputeError(os.str());
  }
  const double kappa = 2.0 * zeta * separation / c;
  const bool ideal = std::isinf(eps);

  // t = kappa (p - 1); zeta^2 p dp = (c / 2a)^2 (kappa + t) dt.
  auto integrand = [&](double t) {
    double log_r2_te = 0.0, log_r2_tm = 0.0;
    if (!ideal) {
      const double p = 1.0 + t / kappa;
      log_r2_te = 2.0 * std::log(-reflection_te(eps, p));
      log_r2_tm = 2.0 * std::log(reflection_tm(eps, p));
    }
    const double damp = -kappa - t;
    return (kappa + t) * (log1m_exp(log_r2_te + damp) + log1m_exp(log_r2_tm + damp));
  };

  static constexpr std::array<double, 6> kEdges{0.0, 1.0, 4.0, 12.0, 30.0, quad::infinity};
  const quad::Options opts{rel_tol};
  const double inner = quad::integrate_panels(integrand, kEdges, opts, "wave-vector integral").value;
  const double scale = c / (2.0 * separation);
  return scale * scale * inner;
}

double matsubara_term(std::size_t n, const Geometry& g, const ThermalState& t,
                      const Permittivity& eps, const LifshitzOptions& opts) {
  if (n == 0) throw RangeError("matsubara_term handles n >= 1; use classical_term for n = 0");
  if (!(t.temperature > 0.0)) throw RangeError("matsubara_term requires T > 0");
  const double zeta = 2.0 * pi * static_cast<double>(n) * k_B * t.temperature / hbar;
  const double f = spectral_function(zeta, eps(zeta), g.separation, opts.rel_tol);
  return -k_B * t.temperature * g.sphere_radius / (c * c) * f / constants::piconewton;
}

ForceResult force_finite_T(const Geometry& g, const ThermalState& t, const Permittivity& eps,
                           Prescription prescription, const LifshitzOptions& opts) {
  g.validate();
  t.validate();
  opts.validate();
  if (!(t.temperature > 0.0)) throw RangeError("force_finite_T requires T > 0; use force_zero_T");

  ForceResult r;
  r.prescription = prescription;
  r.n0_term = classical_term(g, t, prescription);
  double sum = 0.0;
  unsigned small = 0;
  std::size_t n = 1;
  for (; n <= opts.n_max; ++n) {
    const double term = matsubara_term(n, g, t, eps, opts);
    sum += term;
    small = std::abs(term) < opts.truncation * std::abs(sum) ? small + 1 : 0;
    if (small >= opts.consecutive) break;
  }
  if (n > opts.n_max) {
    std::ostringstream os;
    os << "Matsubara sum did not converge within n_max=" << opts.n_max << " terms";
    throw ComputeError(os.str());
  }
  r.n_terms_used = n;
  r.sum_terms = sum;
  r.total = r.n0_term + r.sum_terms;
  return r;
}

double force_zero_T(const Geometry& g, const Permittivity& eps, const LifshitzOptions& opts) {
  g.validate();
  opts.validate();
  const double a = g.separation;
  auto integrand = [&](double zeta) {
    return spectral_function(zeta, eps(zeta), a, opts.rel_tol);
  };

  // Panels: [0, zeta_lo], then log-spaced up to where exp(-2 zeta a / c) is negligible.
  const double upper = std::max(opts.zeta_hi, 60.0 * c / (2.0 * a));
  std::vector<double> edges{0.0, opts.zeta_lo};
  const double step = std::pow(10.0, 1.0 / opts.panels_per_decade);
  while (edges.back() * step < upper * (1.0 + 1e-12)) edges.push_back(edges.back() * step);
  if (edges.back() < upper) edges.push_back(upper);

  const quad::Options outer{opts.zero_t_rel_tol};
  const double integral =
      quad::integrate_panels(integrand, edges, outer, "frequency integral").value;
  return -hbar * g.sphere_radius / (2.0 * pi * c * c) * integral / constants::piconewton;
}

double reduction_factor(double force_pn, const Geometry& g) {
  if (!(force_pn > 0.0)) throw ValidationError("reduction_factor requires a positive force");
  return force_pn / ideal_force(g);
}

double temperature_correction(const Geometry& g, const ThermalState& t, const Permittivity& eps,
                              Prescription prescription, const LifshitzOptions& opts) {
  return force_finite_T(g, t, eps, prescription, opts).total - force_zero_T(g, eps, opts);
}

}  // namespace casimir
