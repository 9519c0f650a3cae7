#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

#include "casimir/dielectric.hpp"
#include "casimir/drude.hpp"

namespace casimir {

struct Geometry {
  double sphere_radius = 0.0;  // m
  double separation = 0.0;     // m

  void validate() const;
  /// Set when R/a < 100, where the proximity-force treatment is questionable.
  std::optional<std::string> pft_warning() const;
};

struct ThermalState {
  double temperature = 300.0;  // K

  void validate() const;
};

/// Treatment of the static (n = 0) Matsubara term.
enum class Prescription {
  schwinger,  // perfect-conductor limit for both polarizations, kTR zeta(3) / 4a^2
  halved,     // half of the above (transverse-electric mode does not contribute)
};

const char* to_string(Prescription p);
Prescription parse_prescription(const std::string& name);

/// Attractive sphere-plate force, reported as a positive magnitude in pN.
struct ForceResult {
  double total = 0.0;
  double n0_term = 0.0;
  double sum_terms = 0.0;
  std::size_t n_terms_used = 0;
  Prescription prescription = Prescription::schwinger;
};

/// eps(i zeta) on the imaginary axis; +infinity denotes a perfect conductor.
using Permittivity = std::function<double(double zeta)>;

Permittivity perfect_conductor();
Permittivity drude_permittivity(const DrudeParameters& p);
/// The model is captured by reference and must outlive the returned function.
Permittivity model_permittivity(const DielectricModel& model);

struct LifshitzOptions {
  double rel_tol = 1e-9;         // wave-vector integral
  double zero_t_rel_tol = 1e-8;  // frequency integral of the zero-temperature force
  double truncation = 1e-10;     // Matsubara stop: term < truncation * partial sum ...
  unsigned consecutive = 3;      // ... for this many consecutive n
  std::size_t n_max = 1'000'000;
  double zeta_lo = 1e11;  // start of log-spaced frequency panels [rad/s]
  double zeta_hi = 1e19;
  unsigned panels_per_decade = 1;

  void validate() const;
};

/// Perfect-conductor sphere-plate force pi^3 hbar c R / (360 a^3), pN.
double ideal_force(const Geometry& g);

/// Static Matsubara term, pN; zero at T = 0.
double classical_term(const Geometry& g, const ThermalState& t, Prescription prescription);

/// Fresnel amplitudes at imaginary frequency in terms of p = q c / zeta >= 1,
/// with s = sqrt(eps - 1 + p^2): TE (p - s)/(p + s), TM (eps p - s)/(eps p + s).
/// Written without cancellation for eps near 1; eps = +inf gives -1 and +1.
double reflection_te(double eps, double p);
double reflection_tm(double eps, double p);

/// zeta^2 * integral_1^inf p ln[(1 - G_TE)(1 - G_TM)] dp at frequency zeta [rad^2/s^2];
/// negative for any attracting pair. `eps` is eps(i zeta), possibly +inf.
double spectral_function(double zeta, double eps, double separation, double rel_tol);

/// Contribution of Matsubara index n >= 1 to the force, pN (positive).
double matsubara_term(std::size_t n, const Geometry& g, const ThermalState& t,
                      const Permittivity& eps, const LifshitzOptions& opts = {});

ForceResult force_finite_T(const Geometry& g, const ThermalState& t, const Permittivity& eps,
                           Prescription prescription, const LifshitzOptions& opts = {});

/// Zero-temperature force: the Matsubara sum replaced by hbar/(2 pi) * integral d zeta, pN.
double force_zero_T(const Geometry& g, const Permittivity& eps, const LifshitzOptions& opts = {});

double reduction_factor(double force_pn, const Geometry& g);

/// force_finite_T - force_zero_T, pN.
double temperature_correction(const Geometry& g, const ThermalState& t, const Permittivity& eps,
                              Prescription prescription, const LifshitzOptions& opts = {});

}  // namespace casimir
