#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "cli_config.hpp"

namespace casimir::cli {

struct Column {
  Column(std::string n, double scale = 1.0, std::string label = {})
      : name(std::move(n)), table_scale(scale), table_label(std::move(label)) {}

  std::string name;
  double table_scale = 1.0;  // value / table_scale is shown in human tables
  std::string table_label;   // defaults to name
};

using SummaryValue = std::variant<double, std::string>;

struct Table {
  std::vector<Column> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, SummaryValue>> summary;
};

// csv: header, rows at 9 significant digits, summary as trailing "# key=value" lines.
// json: {"columns", "rows", "summary"}. table: aligned, 4 significant digits.
void write_table(std::ostream& out, const Table& t, OutputFormat format);

// Full command line including argv[0]. Exit codes: 0 ok, 1 compute failure, 2 input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace casimir::cli
