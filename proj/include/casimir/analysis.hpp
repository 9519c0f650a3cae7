#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace casimir {

struct ExperimentRecord {
  double separation = 0.0;      // m
  double force_measured = 0.0;  // pN
  double sigma = 0.0;           // pN

  void validate() const;
};

/// Reads `# columns=a_nm,F_pN,sigma_pN` files; result is sorted by separation
/// (stable, duplicates kept).
std::vector<ExperimentRecord> parse_experiment(std::istream& in, const std::string& source_name);
std::vector<ExperimentRecord> load_experiment(const std::filesystem::path& path);

/// Theoretical force [pN] at a separation [m].
using ForceEvaluator = std::function<double(double separation)>;

struct ResidualRow {
  double separation = 0.0;
  double force_exp = 0.0;
  double force_theory = 0.0;
  double residual = 0.0;  // force_exp - force_theory
  double sigmas = 0.0;    // residual / sigma
};

struct ResidualReport {
  std::vector<ResidualRow> rows;
  double rms_deviation = 0.0;
  double max_sigma_exceedance = 0.0;  // max |residual| / sigma
};

/// Optional separation window [lo, hi] in metres, inclusive.
using SeparationRange = std::optional<std::pair<double, double>>;

ResidualReport residual_report(std::span<const ExperimentRecord> records,
                               const ForceEvaluator& theory, const SeparationRange& range = {});

/// delta_f - confidence_sigmas * sigma, floored at zero.
double residual_lower_bound(double delta_f, double sigma, double confidence_sigmas);

/// Tabulates `theory` on `points` log-spaced separations in [lo, hi] and
/// returns a cubic-spline interpolant in (ln a, ln F).
ForceEvaluator make_grid_evaluator(const ForceEvaluator& theory, double lo, double hi,
                                   std::size_t points);

}  // namespace casimir
