#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "casimir/drude.hpp"

namespace casimir {

/// One tabulated point of the absorptive part eps''(omega).
struct OpticalSample {
  double omega = 0.0;  // rad/s
  double eps2 = 0.0;
  std::string source;
};

/// Ordered, duplicate-free table of eps''(omega). Immutable once built.
class OpticalDataset {
 public:
  /// Sorts by frequency and validates. Throws ValidationError on empty input,
  /// non-positive values or repeated frequencies.
  static OpticalDataset from_samples(std::vector<OpticalSample> samples);

  std::span<const OpticalSample> samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  double omega_min() const { return samples_.front().omega; }
  double omega_max() const { return samples_.back().omega; }
  bool covers(double omega) const { return omega >= omega_min() && omega <= omega_max(); }

  /// Log-log linear interpolation; exact at nodes. Throws RangeError outside
  /// [omega_min, omega_max].
  double interpolate(double omega) const;

  /// Index i of the segment [samples[i], samples[i+1]] containing omega.
  std::size_t segment_index(double omega) const;

 private:
  explicit OpticalDataset(std::vector<OpticalSample> samples) : samples_(std::move(samples)) {}

  std::vector<OpticalSample> samples_;
};

struct FrequencyBoundaries {
  double omega0 = 0.0;  // upper end of the analytic Drude segment
  double omega1 = 0.0;  // start of the interband region

  void validate() const;
};

enum class FrequencyUnit { rad_per_s, electron_volt };

/// Column layout of an optical data file. `unit` overrides the header.
struct ColumnSchema {
  std::size_t frequency_column = 0;
  std::size_t eps2_column = 1;
  std::optional<FrequencyUnit> unit;
};

OpticalDataset parse_dataset(std::istream& in, const std::string& source_name,
                             const ColumnSchema& schema = {});
OpticalDataset load_dataset(const std::filesystem::path& path, const ColumnSchema& schema = {});

/// Writes the `# unit=... source=...` format read by `parse_dataset`.
void write_dataset(std::ostream& out, const OpticalDataset& ds, FrequencyUnit unit,
                   const std::string& source_label);

enum class Precedence {
  first,   // samples of `a` win over `b` inside a's range
  second,  // samples of `b` win over `a` inside b's range
  equal,   // plain union; a repeated frequency with different eps'' is an error
};

OpticalDataset merge_datasets(const OpticalDataset& a, const OpticalDataset& b,
                              Precedence precedence);

inline double interpolate_eps2(const OpticalDataset& ds, double omega) {
  return ds.interpolate(omega);
}

/// Replaces [gap_lo, gap_hi] by points on the log-log chord joining the
/// bracketing samples, spaced `points_per_decade` per decade, tagged "gapfill".
OpticalDataset fill_gap(const OpticalDataset& ds, double gap_lo, double gap_hi,
                        unsigned points_per_decade = 20);

/// Lorentz oscillator eps'' contribution, strength * w0^2 * g * w / ((w0^2 - w^2)^2 + g^2 w^2).
struct LorentzOscillator {
  double strength = 0.0;
  double center = 0.0;  // rad/s
  double width = 0.0;   // rad/s
};

double lorentz_eps2(const LorentzOscillator& osc, double omega);

struct SyntheticGrid {
  double omega_lo = 1.519e14;
  double omega_hi = 1e17;
  unsigned points_per_decade = 20;
};

/// Drude plus Lorentz eps'' sampled log-uniformly over `grid` (both ends included).
OpticalDataset generate_synthetic_dataset(const DrudeParameters& drude,
                                          std::span<const LorentzOscillator> oscillators,
                                          const SyntheticGrid& grid,
                                          const std::string& label = "synthetic");

}  // namespace casimir
