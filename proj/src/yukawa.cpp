#include "casimir/yukawa.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {

void YukawaHypothesis::validate() const {
  if (!(alpha >= 0.0) || !(lambda > 0.0)) {
    throw ValidationError("Yukawa hypothesis requires alpha >= 0 and lambda > 0");
  }
}

void ConstraintGeometry::validate() const {
  if (!(separation_min > 0.0) || !(film_thickness > 0.0)) {
    throw ValidationError("constraint geometry requires positive separation and film thickness");
  }
}

double alpha_lower_limit(double lambda, const ConstraintGeometry& geom, double residual_pn) {
  geom.validate();
  if (!(lambda > 0.0)) throw RangeError("alpha_lower_limit requires lambda > 0");
  if (!(residual_pn > 0.0)) throw ValidationError("residual force bound must be positive");
  const double x = std::exp(-geom.film_thickness / lambda);
  const double denom = 1.0 - 1.74 * x + 0.75 * x * x;
  if (!(denom > 0.0)) {
    throw RangeError("alpha_lower_limit: layer factor is not positive for this lambda");
  }
  const double ratio = 100e-9 / lambda;
  return 6.27e-25 * (residual_pn / kReferenceResidualPn) *
         std::exp(geom.separation_min / lambda) / denom * ratio * ratio * ratio;
}

double boson_mass_ev(double lambda) {
  return 2.0 * constants::pi * constants::hbar * constants::c / lambda / constants::e_charge;
}

LambdaBoundary allowed_lambda_boundary(const ConstraintGeometry& geom, double alpha_ceiling,
                                       double residual_pn) {
  if (!(alpha_ceiling > 0.0)) throw ValidationError("alpha ceiling must be positive");
  constexpr double lo = 5e-9, hi = 500e-9;
  // Work in log space: both sides span many decades.
  auto f = [&](double lambda) {
    return std::log(alpha_lower_limit(lambda, geom, residual_pn)) - std::log(alpha_ceiling);
  };
  const double f_lo = f(lo), f_hi = f(hi);
  if (f_lo == 0.0) return {lo, boson_mass_ev(lo)};
  if (f_hi == 0.0) return {hi, boson_mass_ev(hi)};
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    std::ostringstream os;
    os << "alpha ceiling " << alpha_ceiling << " is not crossed for lambda in [5, 500] nm";
    throw RangeError(os.str());
  }
  boost::math::tools::eps_tolerance<double> tol(24);  // ~6e-8 relative, tighter than 1e-6
  boost::uintmax_t max_iter = 200;
  const auto [a, b] = boost::math::tools::bisect(f, lo, hi, tol, max_iter);
  const double lambda = 0.5 * (a + b);
  return {lambda, boson_mass_ev(lambda)};
}

namespace {

struct Layer {
  double begin;  // depth below the surface [m]
  double end;    // may be +inf
  double number_density;
};

std::vector<Layer> layers(double film, double film_density, double substrate_density) {
  const double n_film = film_density / constants::atomic_mass;
  std::vector<Layer> out{{0.0, film, n_film}};
  if (substrate_density > 0.0) {
    out.push_back({film, quad::infinity, substrate_density / constants::atomic_mass});
  }
  return out;
}

}  // namespace

double yukawa_force_oracle(const YukawaHypothesis& h, const ConstraintGeometry& geom,
                           double sphere_radius, const YukawaDensities& densities) {
  h.validate();
  geom.validate();
  if (!(sphere_radius > 0.0) || !(densities.plate_film > 0.0) || !(densities.sphere_film > 0.0) ||
      densities.plate_substrate < 0.0 || densities.sphere_substrate < 0.0) {
    throw ValidationError("yukawa_force_oracle requires positive radius and densities");
  }
  if (h.alpha == 0.0) return 0.0;

  const double lambda = h.lambda;
  const double a = geom.separation_min;
  const quad::Options opts{1e-9};

  // Potential of a point at distance d from an infinite plane sheet of unit
  // areal density, integrated over the in-plane radius: 2 pi int_d^inf e^{-r/l} dr.
  auto sheet = [&](double d) {
    auto f = [&](double r) { return std::exp(-r / lambda); };
    return 2.0 * constants::pi *
           quad::integrate(f, d, d + 60.0 * lambda, opts, "Yukawa sheet").value;
  };

  // Energy per unit area between the two layered half-spaces, in units of -alpha hbar c.
  double energy = 0.0;
  for (const auto& lp : layers(geom.film_thickness, densities.plate_film,
                               densities.plate_substrate)) {
    for (const auto& ls : layers(geom.film_thickness, densities.sphere_film,
                                 densities.sphere_substrate)) {
      auto over_sphere_layer = [&](double z1) {
        auto g = [&](double z2) { return sheet(a + z1 + z2); };
        const double end = std::min(ls.end, ls.begin + 80.0 * lambda);
        return quad::integrate(g, ls.begin, end, opts, "Yukawa layer").value;
      };
      const double end = std::min(lp.end, lp.begin + 80.0 * lambda);
      energy += lp.number_density * ls.number_density *
                quad::integrate(over_sphere_layer, lp.begin, end, opts, "Yukawa layer").value;
    }
  }
  const double energy_per_area = h.alpha * constants::hbar * constants::c * energy;
  return 2.0 * constants::pi * sphere_radius * energy_per_area / constants::piconewton;
}

}  // namespace casimir
