#pragma once

#include <complex>

namespace casimir {

/// Free-electron (Drude) response: plasma and relaxation frequencies in rad/s.
struct DrudeParameters {
  double omega_p = 0.0;
  double omega_tau = 0.0;

  /// Throws ValidationError unless 0 < omega_tau < omega_p.
  void validate() const;
};

/// Drude permittivity on the real frequency axis, 1 - wp^2 / (w (w + i wtau)).
std::complex<double> drude_eps_real_axis(const DrudeParameters& p, double omega);

/// Imaginary part only, wp^2 wtau / (w (w^2 + wtau^2)).
double drude_eps2(const DrudeParameters& p, double omega);

/// Drude permittivity at imaginary frequency i*zeta, 1 + wp^2 / (zeta (zeta + wtau)).
double drude_eps_imag_axis(const DrudeParameters& p, double zeta);

/// Static resistivity wtau / (eps0 wp^2), in micro-ohm centimetres.
double resistivity(const DrudeParameters& p);

/// Inverse of `resistivity` at fixed plasma frequency.
double omega_tau_for_resistivity(double omega_p, double rho_micro_ohm_cm);

}  // namespace casimir
