#include "cli_app.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "casimir/analysis.hpp"
#include "casimir/constants.hpp"
#include "casimir/dielectric.hpp"
#include "casimir/error.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/optical_data.hpp"
#include "casimir/yukawa.hpp"

namespace casimir::cli {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v, const char* spec) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string machine(double v) { return fmt(v, "%.8e"); }
std::string human(double v) { return fmt(v, "%.4g"); }

nlohmann::ordered_json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::stod(machine(v));
}

}  // namespace

void write_table(std::ostream& out, const Table& t, OutputFormat format) {
  switch (format) {
    case OutputFormat::csv: {
      for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i].name;
      out << '\n';
      for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << machine(row[i]);
        out << '\n';
      }
      for (const auto& [key, value] : t.summary) {
        out << "# " << key << '=';
        if (const double* d = std::get_if<double>(&value)) out << machine(*d);
        else out << std::get<std::string>(value);
        out << '\n';
      }
      break;
    }
    case OutputFormat::json: {
      nlohmann::ordered_json doc;
      doc["columns"] = nlohmann::ordered_json::array();
      for (const auto& c : t.columns) doc["columns"].push_back(c.name);
      doc["rows"] = nlohmann::ordered_json::array();
      for (const auto& row : t.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i].name] = json_number(row[i]);
        doc["rows"].push_back(r);
      }
      doc["summary"] = nlohmann::ordered_json::object();
      for (const auto& [key, value] : t.summary) {
        if (const double* d = std::get_if<double>(&value)) doc["summary"][key] = json_number(*d);
        else doc["summary"][key] = std::get<std::string>(value);
      }
      out << doc.dump(2) << '\n';
      break;
    }
    case OutputFormat::table: {
      std::vector<std::string> header;
      std::vector<std::size_t> width;
      for (const auto& c : t.columns) {
        header.push_back(c.table_label.empty() ? c.name : c.table_label);
        width.push_back(header.back().size());
      }
      std::vector<std::vector<std::string>> cells;
      for (const auto& row : t.rows) {
        auto& line = cells.emplace_back();
        for (std::size_t i = 0; i < row.size(); ++i) {
          line.push_back(human(row[i] / t.columns[i].table_scale));
          width[i] = std::max(width[i], line.back().size());
        }
      }
      auto emit = [&](const std::vector<std::string>& line) {
        for (std::size_t i = 0; i < line.size(); ++i) {
          out << (i ? "  " : "") << std::setw(static_cast<int>(width[i])) << line[i];
        }
        out << '\n';
      };
      emit(header);
      for (const auto& line : cells) emit(line);
      for (const auto& [key, value] : t.summary) {
        out << key << ": ";
        if (const double* d = std::get_if<double>(&value)) out << human(*d);
        else out << std::get<std::string>(value);
        out << '\n';
      }
      break;
    }
  }
}

namespace {

struct Material {
  DrudeParameters drude;
  std::optional<DielectricModel> model;
  std::optional<DrudeFit> fit;
  Permittivity eps;
};

OpticalDataset load_merged(const DielectricSection& d) {
  auto ds = load_dataset(d.datasets.front());
  for (std::size_t i = 1; i < d.datasets.size(); ++i) {
    ds = merge_datasets(ds, load_dataset(d.datasets[i]), d.merge);
  }
  return ds;
}

DrudeFit run_fit(const OpticalDataset& ds, const DielectricSection& d, FitKind kind) {
  const double lo = d.fit_lo.value_or(ds.omega_min());
  const double hi = d.fit_hi.value_or(std::min(d.omega1, ds.omega_max()));
  const FitMode mode = kind == FitKind::fixed ? FitMode::fixed(d.fit_omega_p) : FitMode::both();
  return fit_drude(ds, {lo, hi}, mode);
}

// Heap-allocated: the permittivity closure refers to the model member.
std::unique_ptr<Material> build_material(const RunConfig& cfg) {
  const auto& d = cfg.dielectric;
  auto m = std::make_unique<Material>();
  m->drude = d.drude;
  switch (d.source) {
    case DielectricSource::perfect:
      m->eps = perfect_conductor();
      break;
    case DielectricSource::drude:
      m->eps = drude_permittivity(d.drude);
      break;
    case DielectricSource::dataset: {
      auto ds = load_merged(d);
      if (d.fit != FitKind::none) {
        m->fit = run_fit(ds, d, d.fit);
        m->drude = m->fit->params;
      }
      DielectricModelConfig mc;
      mc.drude = m->drude;
      mc.boundaries = {constants::ev_to_rad_per_s(d.omega0_ev), d.omega1};
      mc.tail_exponent = d.tail_exponent;
      mc.quadrature.rel_tol = d.kk_rel_tol;
      m->model.emplace(std::move(ds), mc);
      m->eps = model_permittivity(*m->model);
      break;
    }
  }
  return m;
}

void add_fit_summary(Table& t, const Material& m) {
  if (!m.fit) return;
  t.summary.emplace_back("fitted_omega_p", m.fit->params.omega_p);
  t.summary.emplace_back("fitted_omega_tau", m.fit->params.omega_tau);
}

std::vector<double> log_grid(double lo, double hi, unsigned n) {
  std::vector<double> out;
  if (n == 1) return {lo};
  for (unsigned i = 0; i < n; ++i) {
    out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  }
  return out;
}

// ---- commands ---------------------------------------------------------------

Table cmd_fit_drude(RunConfig& cfg, std::optional<double> fixed_wp) {
  auto& d = cfg.dielectric;
  if (d.datasets.empty()) throw ValidationError("fit-drude needs --dataset or [dielectric] datasets");
  FitKind kind = d.fit == FitKind::none ? FitKind::both : d.fit;
  if (fixed_wp) {
    if (!(*fixed_wp > 0.0)) throw ValidationError("--fixed-omega-p must be positive");
    kind = FitKind::fixed;
    d.fit_omega_p = *fixed_wp;
  }
  const auto ds = load_merged(d);
  const auto fit = run_fit(ds, d, kind);

  Table t;
  t.columns = {{"omega_p", 1e16, "omega_p [1e16 rad/s]"},
               {"omega_tau", 1e13, "omega_tau [1e13 rad/s]"},
               {"resistivity_uohm_cm", 1.0, "rho [uOhm cm]"},
               {"rms_log_residual", 1.0, ""},
               {"points", 1.0, ""}};
  t.rows.push_back({fit.params.omega_p, fit.params.omega_tau, resistivity(fit.params),
                    fit.rms_log_residual, static_cast<double>(fit.points)});
  t.summary.emplace_back("mode", kind == FitKind::fixed ? "fixed_omega_p" : "both");
  t.summary.emplace_back("iterations", static_cast<double>(fit.iterations));
  return t;
}

struct EpsilonArgs {
  double zeta_min = 1e11;
  double zeta_max = 1e19;
  unsigned points = 17;
};

Table cmd_epsilon(const RunConfig& cfg, const EpsilonArgs& args) {
  if (!(args.zeta_min > 0.0 && args.zeta_max >= args.zeta_min) || args.points == 0 ||
      (args.points > 1 && !(args.zeta_max > args.zeta_min))) {
    throw ValidationError("epsilon needs 0 < zeta-min < zeta-max and points >= 1");
  }
  if (cfg.dielectric.source == DielectricSource::perfect) {
    throw ValidationError("epsilon is undefined for the perfect-conductor model");
  }
  const auto m = build_material(cfg);
  Table t;
  if (m->model) {
    t.columns = {{"zeta"}, {"eps"}, {"eps1"}, {"eps2_part"}, {"eps3_part"}, {"tail"}};
    for (double z : log_grid(args.zeta_min, args.zeta_max, args.points)) {
      const auto e = m->model->decompose(z);
      t.rows.push_back({z, e.total(), e.eps1, e.eps2_part, e.eps3_part, e.tail});
    }
  } else {
    t.columns = {{"zeta"}, {"eps"}};
    for (double z : log_grid(args.zeta_min, args.zeta_max, args.points)) t.rows.push_back({z, m->eps(z)});
  }
  add_fit_summary(t, *m);
  return t;
}

enum class ForceMode { finite_T, zero_T, both };

Table cmd_force(const RunConfig& cfg, ForceMode mode, std::ostream& err) {
  const auto m = build_material(cfg);
  const ThermalState thermal{cfg.thermal.temperature};
  const bool want_finite = mode != ForceMode::zero_T;
  const bool want_zero = mode != ForceMode::finite_T;
  if (want_finite && !(thermal.temperature > 0.0)) {
    throw ValidationError("finite-temperature force requires temperature > 0; use --mode zero_T");
  }

  Table t;
  t.columns.push_back({"a_nm"});
  if (want_finite) {
    t.columns.push_back({"F_pN"});
    t.columns.push_back({"n0_term_pN"});
  }
  if (want_zero) t.columns.push_back({"F0_pN"});
  if (mode == ForceMode::both) t.columns.push_back({"dT_F_pN"});
  t.columns.push_back({"eta"});
  if (want_finite) t.columns.push_back({"n_terms"});

  bool warned = false;
  for (double a : cfg.geometry.separation.metres()) {
    const Geometry g = cfg.geometry_at(a);
    if (auto w = g.pft_warning(); w && !warned) {
      err << "warning: " << *w << '\n';
      warned = true;
    }
    std::vector<double> row{a / constants::nanometre};
    ForceResult ft;
    double f0 = 0.0;
    if (want_finite) {
      ft = force_finite_T(g, thermal, m->eps, cfg.thermal.prescription, cfg.numerics);
      row.push_back(ft.total);
      row.push_back(ft.n0_term);
    }
    if (want_zero) {
      f0 = force_zero_T(g, m->eps, cfg.numerics);
      row.push_back(f0);
    }
    if (mode == ForceMode::both) row.push_back(ft.total - f0);
    row.push_back(reduction_factor(want_finite ? ft.total : f0, g));
    if (want_finite) row.push_back(static_cast<double>(ft.n_terms_used));
    t.rows.push_back(std::move(row));
  }
  t.summary.emplace_back("temperature_K", cfg.thermal.temperature);
  t.summary.emplace_back("prescription", to_string(cfg.thermal.prescription));
  add_fit_summary(t, *m);
  return t;
}

// Two-column (a_nm, F_pN) table; exact at nodes, log-log linear between.
ForceEvaluator load_theory_table(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open theory file '" + path.string() + "'");
  std::vector<std::pair<double, double>> pts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::replace(line.begin(), line.end(), ';', ' ');
    std::istringstream ss(line);
    std::string first;
    if (!(ss >> first) || first.front() == '#') continue;
    double a = 0.0, f = 0.0;
    std::string extra;
    try {
      a = std::stod(first);
    } catch (const std::exception&) {
      throw ParseError(path.string(), line_no, "expected two numeric columns a_nm,F_pN");
    }
    if (!(ss >> f) || (ss >> extra)) {
      throw ParseError(path.string(), line_no, "expected two numeric columns a_nm,F_pN");
    }
    if (!(a > 0.0) || !(f > 0.0)) throw ParseError(path.string(), line_no, "values must be positive");
    pts.emplace_back(a * constants::nanometre, f);
  }
  if (pts.empty()) throw ValidationError(path.string() + ": no theory rows");
  std::sort(pts.begin(), pts.end());
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].first == pts[i - 1].first) throw ValidationError(path.string() + ": duplicate separation");
  }
  return [pts](double a) {
    auto it = std::lower_bound(pts.begin(), pts.end(), std::pair{a, -1.0});
    if (it != pts.end() && it->first == a) return it->second;
    if (it == pts.begin() || it == pts.end()) {
      throw RangeError("separation " + human(a / constants::nanometre) + " nm outside the theory table");
    }
    const auto& [a0, f0] = *(it - 1);
    const auto& [a1, f1] = *it;
    const double t = std::log(a / a0) / std::log(a1 / a0);
    return f0 * std::pow(f1 / f0, t);
  };
}

Table cmd_residuals(const RunConfig& cfg, const std::optional<fs::path>& plot) {
  const auto& an = cfg.analysis;
  if (!an.experiment) throw ValidationError("residuals needs --experiment or [analysis] experiment");
  const auto records = load_experiment(*an.experiment);
  SeparationRange range;
  if (an.range_lo_nm) {
    range = std::pair{*an.range_lo_nm * constants::nanometre, *an.range_hi_nm * constants::nanometre};
  }

  std::unique_ptr<Material> material;
  ForceEvaluator theory;
  if (an.theory) {
    theory = load_theory_table(*an.theory);
  } else {
    material = build_material(cfg);
    const ThermalState thermal{cfg.thermal.temperature};
    theory = [&cfg, &material, thermal](double a) {
      return force_finite_T(cfg.geometry_at(a), thermal, material->eps, cfg.thermal.prescription,
                            cfg.numerics)
          .total;
    };
    if (an.grid_points > 0) {
      double lo = records.front().separation;
      double hi = records.back().separation;
      if (range) {
        lo = std::max(lo, range->first);
        hi = std::min(hi, range->second);
      }
      if (hi > lo) theory = make_grid_evaluator(theory, lo, hi, an.grid_points);
    }
  }

  const auto report = residual_report(records, theory, range);
  Table t;
  t.columns = {{"a_nm"}, {"F_exp_pN"}, {"F_theory_pN"}, {"dF_pN"}, {"dF_over_sigma"}, {"dF_lower_bound_pN"}};
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    const double sigma = r.residual / r.sigmas;
    const double lower = r.sigmas == 0.0 ? 0.0 : residual_lower_bound(r.residual, sigma, an.confidence_sigmas);
    t.rows.push_back({r.separation / constants::nanometre, r.force_exp, r.force_theory, r.residual,
                      r.sigmas, lower});
  }
  t.summary.emplace_back("records", static_cast<double>(report.rows.size()));
  t.summary.emplace_back("rms_deviation_pN", report.rms_deviation);
  t.summary.emplace_back("max_sigma_exceedance", report.max_sigma_exceedance);
  t.summary.emplace_back("confidence_sigmas", an.confidence_sigmas);
  if (material) add_fit_summary(t, *material);

  if (plot) {
    std::ofstream p(*plot);
    if (!p) throw InputError("cannot write plot file '" + plot->string() + "'");
    p << "# columns=a_nm,dF_pN\n";
    for (const auto& r : report.rows) {
      p << machine(r.separation / constants::nanometre) << ',' << machine(r.residual) << '\n';
    }
  }
  return t;
}

Table cmd_yukawa(const RunConfig& cfg, std::ostream& err) {
  const auto& y = cfg.yukawa;
  const auto geom = cfg.constraint_geometry();
  Table t;
  t.columns = {{"lambda_nm"}, {"alpha_min"}};
  for (double l : log_grid(y.lambda_min_nm, y.lambda_max_nm, y.lambda_points)) {
    t.rows.push_back({l, alpha_lower_limit(l * constants::nanometre, geom, y.residual_bound_pn)});
  }
  t.summary.emplace_back("residual_bound_pN", y.residual_bound_pn);
  t.summary.emplace_back("alpha_ceiling", y.alpha_ceiling);
  try {
    const auto b = allowed_lambda_boundary(geom, y.alpha_ceiling, y.residual_bound_pn);
    t.summary.emplace_back("status", "constrained");
    t.summary.emplace_back("lambda_star_nm", b.lambda / constants::nanometre);
    t.summary.emplace_back("mass_eV", b.mass_ev);
  } catch (const RangeError& e) {
    err << "unconstrained: " << e.what() << '\n';
    t.summary.emplace_back("status", "unconstrained");
  }
  return t;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Casimir force between a gold sphere and plate from optical data", "casimir"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> config_path;
  std::optional<std::string> output_name;
  std::optional<std::string> out_path;
  app.add_option("--config", config_path, "INI configuration file");
  app.add_option("--output", output_name, "csv, json or table");
  app.add_option("--out", out_path, "write results to this file instead of stdout");

  // Overrides shared by several commands.
  std::vector<std::string> datasets;
  std::optional<std::string> model_name;
  std::optional<double> temperature, radius_um, a_nm, a_min, a_max;
  std::optional<unsigned> a_points;
  std::optional<std::string> prescription_name;

  auto add_model_options = [&](CLI::App* sub) {
    sub->add_option("--dataset", datasets, "eps'' dataset file (repeatable; merged in order)");
    sub->add_option("--model", model_name, "drude, dataset or perfect");
  };

  auto* fit = app.add_subcommand("fit-drude", "fit Drude parameters to the low-frequency eps''");
  std::optional<double> fit_lo, fit_hi, fixed_wp;
  fit->add_option("--dataset", datasets, "eps'' dataset file (repeatable)");
  fit->add_option("--range-lo", fit_lo, "fit range start [rad/s]");
  fit->add_option("--range-hi", fit_hi, "fit range end [rad/s]");
  fit->add_option("--fixed-omega-p", fixed_wp, "hold omega_p fixed [rad/s]");

  auto* eps = app.add_subcommand("epsilon", "eps(i zeta) table with its decomposition");
  EpsilonArgs eps_args;
  add_model_options(eps);
  eps->add_option("--zeta-min", eps_args.zeta_min, "[rad/s]")->capture_default_str();
  eps->add_option("--zeta-max", eps_args.zeta_max, "[rad/s]")->capture_default_str();
  eps->add_option("--points", eps_args.points, "log-spaced points")->capture_default_str();

  auto* force = app.add_subcommand("force", "Lifshitz sphere-plate force");
  std::string mode_name = "both";
  add_model_options(force);
  force->add_option("--mode", mode_name, "finite_T, zero_T or both")
      ->check(CLI::IsMember({"finite_T", "zero_T", "both"}))
      ->capture_default_str();
  force->add_option("--a-nm", a_nm, "single separation [nm]");
  force->add_option("--a-min-nm", a_min, "range start [nm]");
  force->add_option("--a-max-nm", a_max, "range end [nm]");
  force->add_option("--points", a_points, "linearly spaced separations");
  force->add_option("--temperature", temperature, "[K]");
  force->add_option("--radius-um", radius_um, "sphere radius [um]");
  force->add_option("--prescription", prescription_name, "n=0 term: schwinger or halved");

  auto* res = app.add_subcommand("residuals", "experiment minus theory");
  std::optional<std::string> experiment, theory_file, plot;
  std::optional<double> range_lo, range_hi;
  std::optional<unsigned> grid;
  add_model_options(res);
  res->add_option("--experiment", experiment, "CSV a_nm,F_pN,sigma_pN");
  res->add_option("--theory", theory_file, "precomputed theory CSV a_nm,F_pN instead of Lifshitz");
  res->add_option("--range-lo-nm", range_lo, "filter start [nm]");
  res->add_option("--range-hi-nm", range_hi, "filter end [nm]");
  res->add_option("--grid", grid, "interpolate theory from this many grid points");
  res->add_option("--plot", plot, "write (a_nm, dF_pN) to this file");
  res->add_option("--temperature", temperature, "[K]");
  res->add_option("--prescription", prescription_name, "n=0 term: schwinger or halved");

  auto* yuk = app.add_subcommand("yukawa-limit", "Yukawa coupling limits from a residual bound");
  std::optional<double> bound, ceiling, l_min, l_max;
  std::optional<unsigned> l_points;
  yuk->add_option("--bound", bound, "residual force lower bound [pN]");
  yuk->add_option("--alpha-ceiling", ceiling, "external upper limit on alpha");
  yuk->add_option("--lambda-min-nm", l_min, "[nm]");
  yuk->add_option("--lambda-max-nm", l_max, "[nm]");
  yuk->add_option("--points", l_points, "log-spaced lambda points");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg = config_path ? load_config(*config_path) : RunConfig{};
    if (output_name) cfg.output = parse_output_format(*output_name);

    auto& d = cfg.dielectric;
    if (!datasets.empty()) {
      d.datasets.assign(datasets.begin(), datasets.end());
      if (!fit->parsed()) d.source = DielectricSource::dataset;
    }
    if (model_name) {
      if (*model_name == "drude") d.source = DielectricSource::drude;
      else if (*model_name == "dataset") d.source = DielectricSource::dataset;
      else if (*model_name == "perfect") d.source = DielectricSource::perfect;
      else throw ValidationError("--model must be drude, dataset or perfect");
    }
    if (fit_lo) d.fit_lo = fit_lo;
    if (fit_hi) d.fit_hi = fit_hi;
    if (temperature) cfg.thermal.temperature = *temperature;
    if (prescription_name) cfg.thermal.prescription = parse_prescription(*prescription_name);
    if (radius_um) cfg.geometry.sphere_radius_um = *radius_um;
    auto& sep = cfg.geometry.separation;
    if (a_nm) sep = {*a_nm, *a_nm, 1};
    if (a_min || a_max || a_points) {
      if (a_nm) throw ValidationError("--a-nm cannot be combined with a separation range");
      if (a_min) sep.min_nm = *a_min;
      if (a_max) sep.max_nm = *a_max;
      if (a_points) sep.points = *a_points;
      if (a_min && a_max && !a_points) sep.points = 15;
    }
    auto& an = cfg.analysis;
    if (experiment) an.experiment = *experiment;
    if (theory_file) an.theory = *theory_file;
    if (range_lo) an.range_lo_nm = range_lo;
    if (range_hi) an.range_hi_nm = range_hi;
    if (grid) an.grid_points = *grid;
    auto& y = cfg.yukawa;
    if (bound) y.residual_bound_pn = *bound;
    if (ceiling) y.alpha_ceiling = *ceiling;
    if (l_min) y.lambda_min_nm = *l_min;
    if (l_max) y.lambda_max_nm = *l_max;
    if (l_points) y.lambda_points = *l_points;

    validate(cfg);

    std::ofstream file;
    if (out_path) {
      file.open(*out_path);
      if (!file) throw InputError("cannot write output file '" + *out_path + "'");
    }
    std::ostream& sink = out_path ? static_cast<std::ostream&>(file) : out;

    Table table;
    if (fit->parsed()) {
      table = cmd_fit_drude(cfg, fixed_wp);
    } else if (eps->parsed()) {
      table = cmd_epsilon(cfg, eps_args);
    } else if (force->parsed()) {
      const ForceMode mode = mode_name == "finite_T" ? ForceMode::finite_T
                             : mode_name == "zero_T" ? ForceMode::zero_T
                                                     : ForceMode::both;
      table = cmd_force(cfg, mode, err);
    } else if (res->parsed()) {
      table = cmd_residuals(cfg, plot ? std::optional<fs::path>(*plot) : std::nullopt);
    } else {
      table = cmd_yukawa(cfg, err);
    }
    write_table(sink, table, cfg.output);
    return 0;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace casimir::cli
