#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "fgsi/cli.hpp"

namespace fgsi::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

Error bad_number(std::string_view text) {
  return Error(ErrorKind::Config, "cannot parse number '" + std::string(text) + "'");
}

bool is_integer(std::string_view s) {
  if (s.empty()) return false;
  for (const char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

// Unsigned decimal or integer literal.
double parse_plain(std::string_view s, std::string_view whole) {
  if (s.empty() || s.front() == '+' || s.front() == '-') throw bad_number(whole);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) throw bad_number(whole);
  return v;
}

double parse_ratio(std::string_view num, std::string_view den, std::string_view whole) {
  if (is_integer(num) && is_integer(den) && num.size() < 16 && den.size() < 16) {
    std::int64_t a = 0, b = 0;
    std::from_chars(num.data(), num.data() + num.size(), a);
    std::from_chars(den.data(), den.data() + den.size(), b);
    if (b == 0) throw Error(ErrorKind::Config, "division by zero in '" + std::string(whole) + "'");
    return static_cast<double>(a) / static_cast<double>(b);
  }
  const double d = parse_plain(den, whole);
  if (d == 0.0) throw Error(ErrorKind::Config, "division by zero in '" + std::string(whole) + "'");
  return parse_plain(num, whole) / d;
}

}  // namespace

double parse_number(std::string_view text) {
  std::string_view s = trim(text);
  double sign = 1.0;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    if (s.front() == '-') sign = -1.0;
    s.remove_prefix(1);
  }
  if (s.empty()) throw bad_number(text);

  // "pi", "pi/4", "0.25pi", "1/4pi".
  if (s.starts_with("pi")) {
    std::string_view rest = s.substr(2);
    if (rest.empty()) return sign * std::numbers::pi;
    if (rest.front() != '/') throw bad_number(text);
    return sign * std::numbers::pi / parse_plain(rest.substr(1), text);
  }
  double factor = 1.0;
  if (s.ends_with("pi")) {
    factor = std::numbers::pi;
    s.remove_suffix(2);
    if (s.empty()) throw bad_number(text);
  }
  const auto slash = s.find('/');
  const double v =
      slash == std::string_view::npos ? parse_plain(s, text)
                                      : parse_ratio(s.substr(0, slash), s.substr(slash + 1), text);
  return sign * v * factor;
}

std::vector<std::pair<std::string, double>> parse_assignments(std::string_view text) {
  std::vector<std::pair<std::string, double>> out;
  std::set<std::string> seen;
  std::string_view rest = trim(text);
  if (rest.empty()) return out;
  while (true) {
    const auto comma = rest.find(',');
    const std::string_view item = trim(rest.substr(0, comma));
    const auto eq = item.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorKind::Config, "expected name=value, got '" + std::string(item) + "'");
    std::string name(trim(item.substr(0, eq)));
    if (name.empty()) throw Error(ErrorKind::Config, "missing name in '" + std::string(item) + "'");
    if (!seen.insert(name).second)
      throw Error(ErrorKind::Config, "variable '" + name + "' given twice");
    out.emplace_back(std::move(name), parse_number(item.substr(eq + 1)));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot open config file '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    std::ostringstream where;
    where << path << ":" << lineno;
    if (eq == std::string_view::npos)
      throw Error(ErrorKind::Config, where.str() + ": expected key=value");
    std::string key(trim(s.substr(0, eq)));
    if (key.empty()) throw Error(ErrorKind::Config, where.str() + ": empty key");
    if (out.count(key)) throw Error(ErrorKind::Config, where.str() + ": duplicate key '" + key + "'");
    out.emplace(std::move(key), std::string(trim(s.substr(eq + 1))));
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void CsvTable::add_row(std::span<const double> values) {
  std::vector<std::string> row;
  row.reserve(values.size());
  for (const double v : values) row.push_back(format_double(v));
  rows.push_back(std::move(row));
}

double CsvTable::number(std::size_t row, std::size_t column) const {
  const std::string& cell = rows.at(row).at(column);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size())
    throw Error(ErrorKind::Input, "cell '" + cell + "' is not a number");
  return v;
}

namespace {

void write_cell(std::ostream& out, const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) {
    out << cell;
    return;
  }
  out << '"';
  for (const char c : cell) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

void write_line(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    write_cell(out, cells[i]);
  }
  out << '\n';
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cells.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cells.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.emplace_back();
    } else {
      cells.back() += c;
    }
  }
  return cells;
}

}  // namespace

void write_csv(std::ostream& out, const CsvTable& table) {
  write_line(out, table.header);
  for (const auto& row : table.rows) write_line(out, row);
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Input, "empty CSV input");
  table.header = split_line(line);
  while (std::getline(in, line)) {
    auto cells = split_line(line);
    if (cells.size() != table.header.size()) {
      std::ostringstream os;
      os << "CSV row " << table.rows.size() + 1 << " has " << cells.size() << " cells, expected "
         << table.header.size();
      throw Error(ErrorKind::Input, os.str());
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

}  // namespace fgsi::cli
