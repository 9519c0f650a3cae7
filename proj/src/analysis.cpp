#include "casimir/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <string_view>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"

namespace casimir {

void ExperimentRecord::validate() const {
  if (!(separation > 0.0) || !(sigma > 0.0) || !std::isfinite(force_measured)) {
    throw ValidationError("experiment record requires separation > 0 and sigma > 0");
  }
}

std::vector<ExperimentRecord> parse_experiment(std::istream& in, const std::string& source_name) {
  std::vector<ExperimentRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::string cleaned = line.substr(first);
    std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
    std::replace(cleaned.begin(), cleaned.end(), ';', ' ');
    std::istringstream fields(cleaned);
    double a_nm = 0, f_pn = 0, sigma_pn = 0;
    std::string extra;
    if (!(fields >> a_nm >> f_pn >> sigma_pn) || (fields >> extra)) {
      throw ParseError(source_name, line_no, "expected three numeric columns a_nm,F_pN,sigma_pN");
    }
    ExperimentRecord r{a_nm * constants::nanometre, f_pn, sigma_pn};
    try {
      r.validate();
    } catch (const ValidationError& e) {
      throw ParseError(source_name, line_no, e.what());
    }
    out.push_back(r);
  }
  if (out.empty()) throw ValidationError(source_name + ": no experiment rows");
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& x, const auto& y) { return x.separation < y.separation; });
  return out;
}

std::vector<ExperimentRecord> load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open experiment file '" + path.string() + "'");
  return parse_experiment(in, path.string());
}

ResidualReport residual_report(std::span<const ExperimentRecord> records,
                               const ForceEvaluator& theory, const SeparationRange& range) {
  ResidualReport report;
  double sum_sq = 0.0;
  for (const auto& rec : records) {
    rec.validate();
    if (range && (rec.separation < range->first || rec.separation > range->second)) continue;
    ResidualRow row;
    row.separation = rec.separation;
    row.force_exp = rec.force_measured;
    row.force_theory = theory(rec.separation);
    row.residual = row.force_exp - row.force_theory;
    row.sigmas = row.residual / rec.sigma;
    sum_sq += row.residual * row.residual;
    report.max_sigma_exceedance = std::max(report.max_sigma_exceedance, std::abs(row.sigmas));
    report.rows.push_back(row);
  }
  if (report.rows.empty()) throw ValidationError("no experiment records inside the separation range");
  report.rms_deviation = std::sqrt(sum_sq / static_cast<double>(report.rows.size()));
  return report;
}

double residual_lower_bound(double delta_f, double sigma, double confidence_sigmas) {
  return std::max(0.0, delta_f - confidence_sigmas * sigma);
}

ForceEvaluator make_grid_evaluator(const ForceEvaluator& theory, double lo, double hi,
                                   std::size_t points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 4) {
    throw ValidationError("grid evaluator needs 0 < lo < hi and at least 4 points");
  }
  const double x0 = std::log(lo);
  const double h = (std::log(hi) - x0) / static_cast<double>(points - 1);
  std::vector<double> ln_force(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double f = theory(std::exp(x0 + h * static_cast<double>(i)));
    if (!(f > 0.0)) throw ComputeError("grid evaluator requires positive tabulated forces");
    ln_force[i] = std::log(f);
  }
  using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;
  auto spline = std::make_shared<Spline>(ln_force.begin(), ln_force.end(), x0, h);
  return [spline, lo, hi](double a) {
    if (a < lo * (1 - 1e-12) || a > hi * (1 + 1e-12)) {
      throw RangeError("separation outside the tabulated grid");
    }
    return std::exp((*spline)(std::log(a)));
  };
}

}  // namespace casimir
