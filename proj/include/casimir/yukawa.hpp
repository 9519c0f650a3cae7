#pragma once

namespace casimir {

struct YukawaHypothesis {
  double alpha = 0.0;   // dimensionless coupling
  double lambda = 0.0;  // interaction range [m]

  void validate() const;
};

struct ConstraintGeometry {
  double separation_min = 63e-9;  // m
  double film_thickness = 96e-9;  // m

  void validate() const;
};

/// Residual-force bound that the closed-form prefactor 6.27e-25 corresponds to.
inline constexpr double kReferenceResidualPn = 10.0;

/// Smallest coupling that would produce a residual force of `residual_pn` at
/// the closest separation:
///   6.27e-25 (F / 10 pN) e^{a/l} / (1 - 1.74 e^{-h/l} + 0.75 e^{-2h/l}) (100 nm / l)^3.
double alpha_lower_limit(double lambda, const ConstraintGeometry& geom,
                         double residual_pn = kReferenceResidualPn);

struct LambdaBoundary {
  double lambda = 0.0;   // m
  double mass_ev = 0.0;  // h c / lambda
};

/// Root of alpha_lower_limit(lambda) = alpha_ceiling on lambda in [5, 500] nm.
/// Throws RangeError when the bracket holds no sign change.
LambdaBoundary allowed_lambda_boundary(const ConstraintGeometry& geom, double alpha_ceiling,
                                       double residual_pn = kReferenceResidualPn);

/// Boson rest energy h c / lambda in eV.
double boson_mass_ev(double lambda);

/// Nucleon number densities follow from mass densities [kg/m^3]. Substrate
/// densities default to zero (film-only bodies).
struct YukawaDensities {
  double plate_film = 19300.0;
  double sphere_film = 19300.0;
  double plate_substrate = 0.0;
  double sphere_substrate = 0.0;
};

/// Yukawa force magnitude between a coated plate and a coated sphere, pN, by
/// numerical integration of the pair potential over the layers with the
/// proximity-force treatment of the sphere curvature.
double yukawa_force_oracle(const YukawaHypothesis& h, const ConstraintGeometry& geom,
                           double sphere_radius, const YukawaDensities& densities = {});

}  // namespace casimir
