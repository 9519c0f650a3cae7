#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "casimir/drude.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/optical_data.hpp"
#include "casimir/yukawa.hpp"

namespace casimir::cli {

enum class OutputFormat { csv, json, table };

OutputFormat parse_output_format(const std::string& name);

enum class DielectricSource { drude, dataset, perfect };

enum class FitKind { none, both, fixed };

struct DielectricSection {
  DielectricSource source = DielectricSource::drude;
  DrudeParameters drude{1.37e16, 3.7e13};
  std::vector<std::filesystem::path> datasets;
  Precedence merge = Precedence::first;
  double omega0_ev = 0.1;
  double omega1 = 3.2e15;  // rad/s
  double tail_exponent = 3.0;
  double kk_rel_tol = 1e-9;
  FitKind fit = FitKind::none;
  double fit_omega_p = 0.0;
  std::optional<double> fit_lo;  // rad/s; default: first sample
  std::optional<double> fit_hi;  // rad/s; default: omega1
};

struct SeparationGrid {
  double min_nm = 63.0;
  double max_nm = 63.0;
  unsigned points = 1;

  std::vector<double> metres() const;
};

struct GeometrySection {
  double sphere_radius_um = 95.65;
  SeparationGrid separation;
};

struct ThermalSection {
  double temperature = 300.0;
  Prescription prescription = Prescription::schwinger;
};

struct YukawaSection {
  double separation_min_nm = 63.0;
  double film_thickness_nm = 96.0;
  double residual_bound_pn = kReferenceResidualPn;
  double alpha_ceiling = 1.5e-22;
  double lambda_min_nm = 10.0;
  double lambda_max_nm = 1000.0;
  unsigned lambda_points = 41;
};

struct AnalysisSection {
  std::optional<std::filesystem::path> experiment;
  std::optional<std::filesystem::path> theory;
  std::optional<double> range_lo_nm;
  std::optional<double> range_hi_nm;
  unsigned grid_points = 0;  // 0: evaluate theory directly at every record
  double confidence_sigmas = 2.0;
};

struct RunConfig {
  DielectricSection dielectric;
  GeometrySection geometry;
  ThermalSection thermal;
  LifshitzOptions numerics;
  YukawaSection yukawa;
  AnalysisSection analysis;
  OutputFormat output = OutputFormat::csv;

  // Directory of the config file, used when resolving relative data paths.
  std::filesystem::path base_dir = ".";

  Geometry geometry_at(double separation) const;
  ConstraintGeometry constraint_geometry() const;
};

// Reads the INI file: sections [dielectric], [geometry], [thermal], [numerics],
// [yukawa], [analysis], [output]. Unknown keys are rejected.
RunConfig load_config(const std::filesystem::path& path);

// Relative paths are tried against the working directory, the config
// directory and then $CASIMIR_DATA_DIR.
std::filesystem::path resolve_data_path(const std::filesystem::path& p,
                                        const std::filesystem::path& base_dir);

// Full check of everything a command may touch; throws InputError subclasses.
void validate(RunConfig& cfg);

}  // namespace casimir::cli
