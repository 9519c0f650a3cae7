#include "casimir/drude.hpp"

#include <cmath>
#include <sstream>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"

namespace casimir {

namespace {
// 1 ohm m = 1e8 micro-ohm cm
constexpr double kOhmMetreToMicroOhmCm = 1e8;
}  // namespace

void DrudeParameters::validate() const {
  if (!(omega_p > 0.0) || !(omega_tau > 0.0) || !std::isfinite(omega_p) ||
      !std::isfinite(omega_tau)) {
    std::ostringstream os;
    os << "Drude parameters must be positive (omega_p=" << omega_p
       << ", omega_tau=" << omega_tau << ")";
    throw ValidationError(os.str());
  }
  if (!(omega_tau < omega_p)) {
    throw ValidationError("Drude parameters require omega_tau < omega_p");
  }
}

std::complex<double> drude_eps_real_axis(const DrudeParameters& p, double omega) {
  if (!(omega > 0.0)) throw RangeError("Drude permittivity is singular at omega <= 0");
  const double wp2 = p.omega_p * p.omega_p;
  const double denom = omega * omega + p.omega_tau * p.omega_tau;
  return {1.0 - wp2 / denom, wp2 * p.omega_tau / (omega * denom)};
}

double drude_eps2(const DrudeParameters& p, double omega) {
  return drude_eps_real_axis(p, omega).imag();
}

double drude_eps_imag_axis(const DrudeParameters& p, double zeta) {
  if (!(zeta > 0.0)) {
    throw RangeError("Drude permittivity diverges at zeta = 0; use the classical n=0 term");
  }
  return 1.0 + p.omega_p * p.omega_p / (zeta * (zeta + p.omega_tau));
}

double resistivity(const DrudeParameters& p) {
  const double rho = p.omega_tau / (constants::epsilon0 * p.omega_p * p.omega_p);
  return rho * kOhmMetreToMicroOhmCm;
}

double omega_tau_for_resistivity(double omega_p, double rho_micro_ohm_cm) {
  return rho_micro_ohm_cm / kOhmMetreToMicroOhmCm * constants::epsilon0 * omega_p * omega_p;
}

}  // namespace casimir
