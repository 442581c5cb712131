#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fgsi/errors.hpp"

namespace fgsi::cli {

/// Exit codes of the fgsi tool.
enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kNumericalFailure = 3,
  kCheckMismatch = 4,
};

/// Accepts decimals, exact fractions ("1/120") and a trailing "pi"
/// ("0.25pi", "pi/4", "-pi"). Fractions of integers are divided once, after
/// exact integer parsing. Throws Error(Config).
double parse_number(std::string_view text);

/// "x=0,y=-2.02,py=0" -> {{"x", 0}, {"y", -2.02}, {"py", 0}}. Values go
/// through parse_number. Throws Error(Config) on malformed or repeated names.
std::vector<std::pair<std::string, double>> parse_assignments(std::string_view text);

/// Flat key=value file. Blank lines and lines starting with '#' are skipped;
/// keys and values are trimmed. Throws Error(Config).
std::map<std::string, std::string> read_config(const std::string& path);

/// Shortest form that still uses 17 significant digits ("%.17g").
std::string format_double(double v);

/// A CSV table with a header row. Cells are kept as text so that a file
/// can be read back and written out unchanged.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::span<const double> values);
  /// Numeric value of one cell; throws Error(Input) when it is not a number.
  double number(std::size_t row, std::size_t column) const;
};

/// Comma separated, LF line endings. Cells containing commas or quotes are
/// quoted.
void write_csv(std::ostream& out, const CsvTable& table);
/// Inverse of write_csv. Throws Error(Input) on ragged rows.
CsvTable read_csv(std::istream& in);

// ---------------------------------------------------------------------------
// Reference tables

/// One expected error order: log10 of the max energy error or of the final
/// position error at t = 1e4.
struct TableEntry {
  int table = 0;
  std::string system;
  double tau = 0.0;
  std::string method;  // registry name, "rk4" or "rkf89"
  std::string metric;  // "energy" or "position"
  double expected = 0.0;
  double tolerance = 0.0;
};

std::vector<TableEntry> table_entries();

struct TableResult {
  TableEntry entry;
  double value = 0.0;     // log10 of the measured error; +inf after a failure
  double relative = 0.0;  // energy rows: log10(|dH| / |E|), informational
  double seconds = 0.0;   // informational
  std::string note;

  bool within() const;
};

/// Runs every entry whose table number is listed (all when empty). Each
/// (system, tau) group shares one reference solution.
std::vector<TableResult> evaluate_tables(std::span<const int> tables);

// ---------------------------------------------------------------------------
// Entry point

/// Parses args (without the program name), runs the subcommand and returns
/// the exit code. Diagnostics go to err; CSV goes to --out or to out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Maps an error kind to the tool's exit code.
int exit_code_for(ErrorKind kind);

}  // namespace fgsi::cli
