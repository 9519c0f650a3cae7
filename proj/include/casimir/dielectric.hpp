#pragma once

#include <optional>
#include <utility>

#include "casimir/constants.hpp"
#include "casimir/drude.hpp"
#include "casimir/optical_data.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {

/// Drude contribution to eps(i zeta) - 1 from real frequencies [0, omega0].
/// Near zeta = omega_tau the closed form has a removable 0/0 and a series
/// expansion is used instead.
double epsilon1_analytic(const DrudeParameters& p, double omega0, double zeta);

/// Contributions to eps(i zeta) = 1 + eps1 + eps2_part + eps3_part.
struct EpsilonDecomposition {
  double eps1 = 0.0;       // [0, omega0], Drude closed form
  double eps2_part = 0.0;  // [omega0, omega1], tabulated data
  double eps3_part = 0.0;  // [omega1, inf), data plus power-law tail
  double tail = 0.0;       // portion of the above coming from omega > omega_max

  double total() const { return 1.0 + eps1 + eps2_part + eps3_part; }
};

struct DielectricModelConfig {
  DrudeParameters drude;
  FrequencyBoundaries boundaries{constants::ev_to_rad_per_s(0.1), 3.2e15};
  double tail_exponent = 3.0;
  quad::Options quadrature{};
};

/// eps(i zeta) from a Drude segment on [0, omega0] plus the Kramers-Kronig
/// transform of tabulated eps''(omega) above omega0. Between omega0 and the first
/// sample eps'' follows the Drude model; above the last sample it decays as
/// omega^-tail_exponent. Immutable and safe to share between threads.
class DielectricModel {
 public:
  DielectricModel(OpticalDataset dataset, DielectricModelConfig config);

  EpsilonDecomposition decompose(double zeta) const;
  double operator()(double zeta) const { return decompose(zeta).total(); }

  /// eps''(omega) as seen by the transform, for omega >= omega0.
  double eps2_at(double omega) const;

  const OpticalDataset& dataset() const { return dataset_; }
  const DielectricModelConfig& config() const { return config_; }

 private:
  double transform(double lo, double hi, double zeta, bool* touches_tail) const;

  OpticalDataset dataset_;
  DielectricModelConfig config_;
};

inline EpsilonDecomposition kk_epsilon(const DielectricModel& model, double zeta) {
  return model.decompose(zeta);
}

struct FitMode {
  std::optional<double> fixed_omega_p;

  static FitMode both() { return {}; }
  static FitMode fixed(double omega_p) { return {omega_p}; }
};

struct DrudeFit {
  DrudeParameters params;
  double rms_log_residual = 0.0;
  std::size_t points = 0;
  unsigned iterations = 0;
};

/// Least-squares fit of ln eps'' to the Drude form over samples inside
/// [range.first, range.second]. Needs at least three samples.
DrudeFit fit_drude(const OpticalDataset& ds, std::pair<double, double> range, const FitMode& mode);

}  // namespace casimir
