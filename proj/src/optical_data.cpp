#include "casimir/optical_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string_view>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"

namespace casimir {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  auto is_sep = [](char ch) { return ch == ',' || ch == ';' || ch == ' ' || ch == '\t'; };
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_sep(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool parse_double(std::string_view text, double& value) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  return ec == std::errc{} && ptr == end;
}

// Reads `key=value` pairs from a `#` header line.
void parse_header(std::string_view body, std::optional<FrequencyUnit>& unit,
                  std::optional<std::string>& label, const std::string& source_name,
                  std::size_t line_no) {
  for (auto token : split_fields(body)) {
    const auto eq = token.find('=');
    if (eq == std::string_view::npos) continue;
    const auto key = token.substr(0, eq);
    const auto value = token.substr(eq + 1);
    if (key == "unit") {
      if (value == "eV") {
        unit = FrequencyUnit::electron_volt;
      } else if (value == "rad_s") {
        unit = FrequencyUnit::rad_per_s;
      } else {
        throw ParseError(source_name, line_no,
                         "unknown frequency unit '" + std::string(value) + "' (expected eV or rad_s)");
      }
    } else if (key == "source") {
      label = std::string(value);
    }
  }
}

double chord_log_eps(const OpticalSample& lo, const OpticalSample& hi, double omega) {
  const double t = std::log(omega / lo.omega) / std::log(hi.omega / lo.omega);
  return (1.0 - t) * std::log(lo.eps2) + t * std::log(hi.eps2);
}

}  // namespace

OpticalDataset OpticalDataset::from_samples(std::vector<OpticalSample> samples) {
  if (samples.empty()) throw ValidationError("optical dataset is empty");
  for (const auto& s : samples) {
    if (!(s.omega > 0.0) || !std::isfinite(s.omega)) {
      std::ostringstream os;
      os << "optical sample frequency must be positive (omega=" << s.omega << ")";
      throw ValidationError(os.str());
    }
    if (!(s.eps2 > 0.0) || !std::isfinite(s.eps2)) {
      std::ostringstream os;
      os << "optical sample eps2 must be positive (omega=" << s.omega << ", eps2=" << s.eps2
         << ")";
      throw ValidationError(os.str());
    }
  }
  std::stable_sort(samples.begin(), samples.end(),
                   [](const auto& x, const auto& y) { return x.omega < y.omega; });
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].omega == samples[i - 1].omega) {
      std::ostringstream os;
      os << "duplicate frequency " << samples[i].omega << " in optical dataset";
      throw ValidationError(os.str());
    }
  }
  return OpticalDataset(std::move(samples));
}

std::size_t OpticalDataset::segment_index(double omega) const {
  if (!covers(omega)) {
    std::ostringstream os;
    os << "frequency " << omega << " outside dataset range [" << omega_min() << ", "
       << omega_max() << "]";
    throw RangeError(os.str());
  }
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), omega,
                                   [](double w, const OpticalSample& s) { return w < s.omega; });
  const auto idx = static_cast<std::size_t>(it - samples_.begin());
  // idx >= 1 because omega >= omega_min.
  return std::min(idx - 1, samples_.size() >= 2 ? samples_.size() - 2 : 0);
}

double OpticalDataset::interpolate(double omega) const {
  const std::size_t i = segment_index(omega);
  const auto& lo = samples_[i];
  if (omega == lo.omega || samples_.size() == 1) return lo.eps2;
  const auto& hi = samples_[i + 1];
  if (omega == hi.omega) return hi.eps2;
  return std::exp(chord_log_eps(lo, hi, omega));
}

void FrequencyBoundaries::validate() const {
  if (!(omega0 > 0.0) || !(omega0 < omega1) || !std::isfinite(omega1)) {
    std::ostringstream os;
    os << "frequency boundaries require 0 < omega0 < omega1 (omega0=" << omega0
       << ", omega1=" << omega1 << ")";
    throw ValidationError(os.str());
  }
}

OpticalDataset parse_dataset(std::istream& in, const std::string& source_name,
                             const ColumnSchema& schema) {
  std::optional<FrequencyUnit> header_unit;
  std::optional<std::string> label;
  struct Row {
    double freq;
    double eps2;
    std::size_t line;
  };
  std::vector<Row> rows;
  const std::size_t needed = std::max(schema.frequency_column, schema.eps2_column) + 1;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = trim(raw);
    if (line_no == 1 && line.substr(0, 3) == "\xEF\xBB\xBF") line = trim(line.substr(3));
    if (line.empty()) continue;
    if (line.front() == '#') {
      parse_header(line.substr(1), header_unit, label, source_name, line_no);
      continue;
    }
    const auto fields = split_fields(line);
    if (fields.size() < needed) {
      throw ParseError(source_name, line_no,
                       "expected at least " + std::to_string(needed) + " columns");
    }
    Row row{0.0, 0.0, line_no};
    if (!parse_double(fields[schema.frequency_column], row.freq) ||
        !parse_double(fields[schema.eps2_column], row.eps2)) {
      throw ParseError(source_name, line_no, "malformed number in row '" + std::string(line) + "'");
    }
    if (!(row.freq > 0.0) || !(row.eps2 > 0.0) || !std::isfinite(row.freq) ||
        !std::isfinite(row.eps2)) {
      throw ValidationError(source_name + ":" + std::to_string(line_no) +
                            ": frequency and eps2 must be positive");
    }
    rows.push_back(row);
  }
  if (rows.empty()) throw ValidationError(source_name + ": no data rows");

  const auto unit = schema.unit ? schema.unit : header_unit;
  if (!unit) {
    throw ParseError(source_name, 1, "missing '# unit=<eV|rad_s>' header");
  }
  const std::string tag = label.value_or(source_name);
  std::vector<OpticalSample> samples;
  samples.reserve(rows.size());
  for (const auto& r : rows) {
    const double omega =
        *unit == FrequencyUnit::electron_volt ? constants::ev_to_rad_per_s(r.freq) : r.freq;
    samples.push_back({omega, r.eps2, tag});
  }
  try {
    return OpticalDataset::from_samples(std::move(samples));
  } catch (const ValidationError& e) {
    throw ValidationError(source_name + ": " + e.what());
  }
}

OpticalDataset load_dataset(const std::filesystem::path& path, const ColumnSchema& schema) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open optical data file '" + path.string() + "'");
  return parse_dataset(in, path.string(), schema);
}

void write_dataset(std::ostream& out, const OpticalDataset& ds, FrequencyUnit unit,
                   const std::string& source_label) {
  out << "# unit=" << (unit == FrequencyUnit::electron_volt ? "eV" : "rad_s")
      << " source=" << source_label << '\n';
  out << "# frequency,eps2\n";
  const auto old_flags = out.flags();
  const auto old_precision = out.precision();
  out << std::scientific << std::setprecision(9);
  for (const auto& s : ds.samples()) {
    const double f =
        unit == FrequencyUnit::electron_volt ? constants::rad_per_s_to_ev(s.omega) : s.omega;
    out << f << ',' << s.eps2 << '\n';
  }
  out.flags(old_flags);
  out.precision(old_precision);
}

OpticalDataset merge_datasets(const OpticalDataset& a, const OpticalDataset& b,
                              Precedence precedence) {
  std::vector<OpticalSample> merged;
  merged.reserve(a.size() + b.size());
  if (precedence == Precedence::equal) {
    std::vector<OpticalSample> all(a.samples().begin(), a.samples().end());
    all.insert(all.end(), b.samples().begin(), b.samples().end());
    std::stable_sort(all.begin(), all.end(),
                     [](const auto& x, const auto& y) { return x.omega < y.omega; });
    for (auto& s : all) {
      if (!merged.empty() && merged.back().omega == s.omega) {
        if (merged.back().eps2 != s.eps2) {
          std::ostringstream os;
          os << "conflicting samples at omega=" << s.omega << " from equal-precedence sources '"
             << merged.back().source << "' and '" << s.source << "'";
          throw ValidationError(os.str());
        }
        continue;
      }
      merged.push_back(std::move(s));
    }
    return OpticalDataset::from_samples(std::move(merged));
  }

  const OpticalDataset& winner = precedence == Precedence::first ? a : b;
  const OpticalDataset& loser = precedence == Precedence::first ? b : a;
  merged.assign(winner.samples().begin(), winner.samples().end());
  for (const auto& s : loser.samples()) {
    if (!winner.covers(s.omega)) merged.push_back(s);
  }
  return OpticalDataset::from_samples(std::move(merged));
}

OpticalDataset fill_gap(const OpticalDataset& ds, double gap_lo, double gap_hi,
                        unsigned points_per_decade) {
  if (!(gap_lo < gap_hi) || !ds.covers(gap_lo) || !ds.covers(gap_hi)) {
    std::ostringstream os;
    os << "gap [" << gap_lo << ", " << gap_hi << "] must lie inside dataset range ["
       << ds.omega_min() << ", " << ds.omega_max() << "]";
    throw RangeError(os.str());
  }
  if (points_per_decade == 0) return ds;

  const auto samples = ds.samples();
  // Bracketing samples: last at or below gap_lo, first at or above gap_hi.
  const std::size_t lo = ds.segment_index(gap_lo);
  auto hi_it = std::lower_bound(samples.begin(), samples.end(), gap_hi,
                                [](const OpticalSample& s, double w) { return s.omega < w; });
  const auto hi = static_cast<std::size_t>(hi_it - samples.begin());
  const auto& left = samples[lo];
  const auto& right = samples[hi];

  std::vector<OpticalSample> out(samples.begin(), samples.begin() + lo + 1);
  const double decades = std::log10(right.omega / left.omega);
  const auto intervals =
      static_cast<std::size_t>(std::ceil(decades * points_per_decade - 1e-9));
  for (std::size_t k = 1; k < intervals; ++k) {
    const double omega =
        left.omega * std::pow(right.omega / left.omega, static_cast<double>(k) / intervals);
    out.push_back({omega, std::exp(chord_log_eps(left, right, omega)), "gapfill"});
  }
  out.insert(out.end(), samples.begin() + hi, samples.end());
  return OpticalDataset::from_samples(std::move(out));
}

double lorentz_eps2(const LorentzOscillator& osc, double omega) {
  const double w02 = osc.center * osc.center;
  const double detune = w02 - omega * omega;
  return osc.strength * w02 * osc.width * omega /
         (detune * detune + osc.width * osc.width * omega * omega);
}

OpticalDataset generate_synthetic_dataset(const DrudeParameters& drude,
                                          std::span<const LorentzOscillator> oscillators,
                                          const SyntheticGrid& grid, const std::string& label) {
  drude.validate();
  for (const auto& osc : oscillators) {
    if (!(osc.strength > 0.0) || !(osc.center > 0.0) || !(osc.width > 0.0)) {
      throw ValidationError("Lorentz oscillator parameters must be positive");
    }
  }
  if (!(grid.omega_lo > 0.0) || !(grid.omega_lo < grid.omega_hi) || grid.points_per_decade == 0) {
    throw ValidationError("synthetic grid requires 0 < omega_lo < omega_hi and points_per_decade > 0");
  }
  const double decades = std::log10(grid.omega_hi / grid.omega_lo);
  const auto intervals = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(decades * grid.points_per_decade - 1e-9)));
  std::vector<OpticalSample> samples;
  samples.reserve(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k) {
    const double omega = k == intervals
                             ? grid.omega_hi
                             : grid.omega_lo * std::pow(grid.omega_hi / grid.omega_lo,
                                                        static_cast<double>(k) / intervals);
    double eps2 = drude_eps2(drude, omega);
    for (const auto& osc : oscillators) eps2 += lorentz_eps2(osc, omega);
    samples.push_back({omega, eps2, label});
  }
  return OpticalDataset::from_samples(std::move(samples));
}

}  // namespace casimir
