#include "cli_config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"

namespace casimir::cli {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

OutputFormat parse_output_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  if (name == "table") return OutputFormat::table;
  throw ValidationError("unknown output format '" + name + "' (expected csv, json or table)");
}

std::vector<double> SeparationGrid::metres() const {
  std::vector<double> out;
  if (points == 1) {
    out.push_back(min_nm * constants::nanometre);
    return out;
  }
  for (unsigned i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    out.push_back((min_nm + t * (max_nm - min_nm)) * constants::nanometre);
  }
  return out;
}

Geometry RunConfig::geometry_at(double separation) const {
  return {geometry.sphere_radius_um * constants::micrometre, separation};
}

ConstraintGeometry RunConfig::constraint_geometry() const {
  return {yukawa.separation_min_nm * constants::nanometre,
          yukawa.film_thickness_nm * constants::nanometre};
}

namespace {

class Section {
 public:
  Section(const pt::ptree* tree, std::string name) : tree_(tree), name_(std::move(name)) {}

  std::optional<std::string> text(const std::string& key) {
    used_.insert(key);
    if (!tree_) return std::nullopt;
    auto v = tree_->get_optional<std::string>(key);
    if (!v) return std::nullopt;
    // Trailing "; note" or "# note" after whitespace is a comment.
    for (std::size_t i = 1; i < v->size(); ++i) {
      if (((*v)[i] == ';' || (*v)[i] == '#') && ((*v)[i - 1] == ' ' || (*v)[i - 1] == '\t')) {
        v->erase(i);
        break;
      }
    }
    const auto end = v->find_last_not_of(" \t");
    v->erase(end == std::string::npos ? 0 : end + 1);
    return *v;
  }

  void number(const std::string& key, double& target) {
    if (auto v = number(key)) target = *v;
  }

  std::optional<double> number(const std::string& key) {
    const auto t = text(key);
    if (!t) return std::nullopt;
    try {
      std::size_t pos = 0;
      const double v = std::stod(*t, &pos);
      if (pos != t->size() || !std::isfinite(v)) throw std::invalid_argument(*t);
      return v;
    } catch (const std::exception&) {
      throw ValidationError("[" + name_ + "] " + key + ": '" + *t + "' is not a number");
    }
  }

  void count(const std::string& key, unsigned& target) {
    const auto v = number(key);
    if (!v) return;
    if (*v < 0 || *v != std::floor(*v) || *v > 1e9) {
      throw ValidationError("[" + name_ + "] " + key + " must be a non-negative integer");
    }
    target = static_cast<unsigned>(*v);
  }

  void reject_unknown() const {
    if (!tree_) return;
    for (const auto& [key, _] : *tree_) {
      if (!used_.count(key)) throw ValidationError("unknown key '" + key + "' in [" + name_ + "]");
    }
  }

 private:
  const pt::ptree* tree_;
  std::string name_;
  std::set<std::string> used_;
};

std::vector<fs::path> split_paths(const std::string& s) {
  std::vector<fs::path> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.emplace_back(item.substr(b, e - b + 1));
  }
  return out;
}

void read_dielectric(Section& s, DielectricSection& d) {
  if (auto v = s.text("model")) {
    if (*v == "drude") d.source = DielectricSource::drude;
    else if (*v == "dataset") d.source = DielectricSource::dataset;
    else if (*v == "perfect") d.source = DielectricSource::perfect;
    else throw ValidationError("[dielectric] model must be drude, dataset or perfect");
  }
  s.number("omega_p", d.drude.omega_p);
  s.number("omega_tau", d.drude.omega_tau);
  if (auto v = s.text("datasets")) d.datasets = split_paths(*v);
  if (auto v = s.text("merge")) {
    if (*v == "first") d.merge = Precedence::first;
    else if (*v == "second") d.merge = Precedence::second;
    else if (*v == "equal") d.merge = Precedence::equal;
    else throw ValidationError("[dielectric] merge must be first, second or equal");
  }
  s.number("omega0_ev", d.omega0_ev);
  s.number("omega1", d.omega1);
  s.number("tail_exponent", d.tail_exponent);
  s.number("kk_rel_tol", d.kk_rel_tol);
  if (auto v = s.text("fit")) {
    if (*v == "none") d.fit = FitKind::none;
    else if (*v == "both") d.fit = FitKind::both;
    else if (*v == "fixed_omega_p") d.fit = FitKind::fixed;
    else throw ValidationError("[dielectric] fit must be none, both or fixed_omega_p");
  }
  s.number("fit_omega_p", d.fit_omega_p);
  d.fit_lo = s.number("fit_lo");
  d.fit_hi = s.number("fit_hi");
}

void read_geometry(Section& s, GeometrySection& g) {
  s.number("sphere_radius_um", g.sphere_radius_um);
  if (auto a = s.number("separation_nm")) {
    g.separation = {*a, *a, 1};
  }
  s.number("separation_min_nm", g.separation.min_nm);
  s.number("separation_max_nm", g.separation.max_nm);
  s.count("separation_points", g.separation.points);
}

void read_thermal(Section& s, ThermalSection& t) {
  s.number("temperature", t.temperature);
  if (auto v = s.text("prescription")) t.prescription = parse_prescription(*v);
}

void read_numerics(Section& s, LifshitzOptions& n) {
  s.number("rel_tol", n.rel_tol);
  s.number("zero_t_rel_tol", n.zero_t_rel_tol);
  s.number("truncation", n.truncation);
  s.count("consecutive", n.consecutive);
  if (auto v = s.number("n_max")) {
    if (*v < 1 || *v != std::floor(*v)) throw ValidationError("[numerics] n_max must be a positive integer");
    n.n_max = static_cast<std::size_t>(*v);
  }
  s.number("zeta_lo", n.zeta_lo);
  s.number("zeta_hi", n.zeta_hi);
  s.count("panels_per_decade", n.panels_per_decade);
}

void read_yukawa(Section& s, YukawaSection& y) {
  s.number("separation_min_nm", y.separation_min_nm);
  s.number("film_thickness_nm", y.film_thickness_nm);
  s.number("residual_bound_pn", y.residual_bound_pn);
  s.number("alpha_ceiling", y.alpha_ceiling);
  s.number("lambda_min_nm", y.lambda_min_nm);
  s.number("lambda_max_nm", y.lambda_max_nm);
  s.count("lambda_points", y.lambda_points);
}

void read_analysis(Section& s, AnalysisSection& a) {
  if (auto v = s.text("experiment")) a.experiment = *v;
  if (auto v = s.text("theory")) a.theory = *v;
  a.range_lo_nm = s.number("range_lo_nm");
  a.range_hi_nm = s.number("range_hi_nm");
  s.count("grid_points", a.grid_points);
  s.number("confidence_sigmas", a.confidence_sigmas);
}

}  // namespace

RunConfig load_config(const fs::path& path) {
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    if (e.line() == 0) throw InputError("cannot read config '" + path.string() + "': " + e.message());
    throw ParseError(path.string(), e.line(), e.message());
  }

  static const std::set<std::string> known{"dielectric", "geometry", "thermal", "numerics",
                                           "yukawa",     "analysis", "output"};
  for (const auto& [name, sub] : tree) {
    if (!known.count(name) || sub.empty()) {
      throw ValidationError("unknown section or top-level key '" + name + "' in " + path.string());
    }
  }
  auto section = [&](const std::string& name) {
    const auto child = tree.get_child_optional(name);
    return Section(child ? &*child : nullptr, name);
  };

  RunConfig cfg;
  cfg.base_dir = path.has_parent_path() ? path.parent_path() : fs::path(".");

  auto d = section("dielectric");
  read_dielectric(d, cfg.dielectric);
  d.reject_unknown();
  auto g = section("geometry");
  read_geometry(g, cfg.geometry);
  g.reject_unknown();
  auto t = section("thermal");
  read_thermal(t, cfg.thermal);
  t.reject_unknown();
  auto n = section("numerics");
  read_numerics(n, cfg.numerics);
  n.reject_unknown();
  auto y = section("yukawa");
  read_yukawa(y, cfg.yukawa);
  y.reject_unknown();
  auto a = section("analysis");
  read_analysis(a, cfg.analysis);
  a.reject_unknown();
  auto o = section("output");
  if (auto f = o.text("format")) cfg.output = parse_output_format(*f);
  o.reject_unknown();
  return cfg;
}

fs::path resolve_data_path(const fs::path& p, const fs::path& base_dir) {
  if (p.is_absolute()) {
    if (!fs::exists(p)) throw InputError("file not found: " + p.string());
    return p;
  }
  if (fs::exists(p)) return p;
  if (fs::exists(base_dir / p)) return base_dir / p;
  if (const char* root = std::getenv("CASIMIR_DATA_DIR"); root && *root) {
    const fs::path candidate = fs::path(root) / p;
    if (fs::exists(candidate)) return candidate;
  }
  throw InputError("file not found: " + p.string() +
                   " (searched working directory, config directory and CASIMIR_DATA_DIR)");
}

void validate(RunConfig& cfg) {
  auto& d = cfg.dielectric;
  d.drude.validate();
  if (!(d.omega0_ev > 0.0)) throw ValidationError("[dielectric] omega0_ev must be positive");
  FrequencyBoundaries{constants::ev_to_rad_per_s(d.omega0_ev), d.omega1}.validate();
  if (!(d.tail_exponent > 1.0)) throw ValidationError("[dielectric] tail_exponent must exceed 1");
  if (!(d.kk_rel_tol > 0.0 && d.kk_rel_tol < 1.0)) {
    throw ValidationError("[dielectric] kk_rel_tol must lie in (0, 1)");
  }
  if (d.source == DielectricSource::dataset && d.datasets.empty()) {
    throw ValidationError("[dielectric] model = dataset requires datasets = <path>[, <path>...]");
  }
  for (auto& p : d.datasets) p = resolve_data_path(p, cfg.base_dir);
  if (d.fit == FitKind::fixed && !(d.fit_omega_p > 0.0)) {
    throw ValidationError("[dielectric] fit = fixed_omega_p requires fit_omega_p > 0");
  }
  if (d.fit_lo && d.fit_hi && !(*d.fit_lo < *d.fit_hi)) {
    throw ValidationError("[dielectric] fit_lo must be below fit_hi");
  }

  const auto& s = cfg.geometry.separation;
  if (s.points == 0) throw ValidationError("[geometry] separation_points must be at least 1");
  if (!(s.min_nm > 0.0) || !(s.max_nm >= s.min_nm) || (s.points > 1 && !(s.max_nm > s.min_nm))) {
    throw ValidationError("[geometry] separation range must satisfy 0 < min <= max");
  }
  for (double a : s.metres()) cfg.geometry_at(a).validate();

  ThermalState{cfg.thermal.temperature}.validate();
  cfg.numerics.validate();

  const auto& y = cfg.yukawa;
  cfg.constraint_geometry().validate();
  if (!(y.residual_bound_pn > 0.0)) throw ValidationError("[yukawa] residual_bound_pn must be positive");
  if (!(y.alpha_ceiling > 0.0)) throw ValidationError("[yukawa] alpha_ceiling must be positive");
  if (!(y.lambda_min_nm > 0.0 && y.lambda_max_nm > y.lambda_min_nm) || y.lambda_points < 2) {
    throw ValidationError("[yukawa] lambda grid needs 0 < lambda_min_nm < lambda_max_nm and >= 2 points");
  }

  auto& a = cfg.analysis;
  if (a.experiment) a.experiment = resolve_data_path(*a.experiment, cfg.base_dir);
  if (a.theory) a.theory = resolve_data_path(*a.theory, cfg.base_dir);
  if (a.range_lo_nm.has_value() != a.range_hi_nm.has_value()) {
    throw ValidationError("[analysis] range needs both range_lo_nm and range_hi_nm");
  }
  if (a.range_lo_nm && !(*a.range_lo_nm < *a.range_hi_nm)) {
    throw ValidationError("[analysis] range_lo_nm must be below range_hi_nm");
  }
  if (a.grid_points != 0 && a.grid_points < 4) {
    throw ValidationError("[analysis] grid_points must be 0 (direct) or at least 4");
  }
  if (!(a.confidence_sigmas >= 0.0)) throw ValidationError("[analysis] confidence_sigmas must be >= 0");
}

}  // namespace casimir::cli
