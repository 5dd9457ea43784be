#include "table.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace peplab {

void Table::meta(const std::string& key, double value) { header.emplace_back(key, format_number(value)); }

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

namespace {

double scale_for(Unit unit, double gamma) {
  switch (unit) {
    case Unit::time:
    case Unit::density:
      return 1.0 / gamma;
    case Unit::frequency:
      return gamma;
    case Unit::none:
      break;
  }
  return 1.0;
}

std::string diverged_list(const Table& t) {
  std::string out;
  for (const Column& c : t.columns) {
    if (!c.may_diverge) continue;
    if (!out.empty()) out += ',';
    out += c.name;
  }
  return out;
}

}  // namespace

std::string schema_problem(const Table& t) {
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (t.rows[r].size() != t.columns.size()) {
      return t.name + ": row " + std::to_string(r) + " has " + std::to_string(t.rows[r].size()) +
             " values, expected " + std::to_string(t.columns.size());
    }
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      const double v = t.rows[r][c];
      if (std::isnan(v) && t.columns[c].may_diverge) continue;
      if (!std::isfinite(v)) return t.name + ": non-finite value in column " + t.columns[c].name;
    }
  }
  return {};
}

void write_csv(std::ostream& out, const Table& t, double gamma) {
  for (const auto& [k, v] : t.header) out << "# " << k << '=' << v << '\n';
  out << "# columns=" << t.columns.size() << '\n';
  const std::string diverged = diverged_list(t);
  if (!diverged.empty()) out << "# diverged=" << diverged << '\n';
  for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c].name;
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << (c ? "," : "") << format_number(row[c] * scale_for(t.columns[c].unit, gamma));
    }
    out << '\n';
  }
}

nlohmann::ordered_json to_json(const Table& t, double gamma) {
  nlohmann::ordered_json j;
  j["name"] = t.name;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.header) meta[k] = v;
  j["header"] = meta;
  nlohmann::ordered_json cols = nlohmann::ordered_json::array();
  for (const Column& c : t.columns) cols.push_back(c.name);
  j["columns"] = cols;
  const std::string diverged = diverged_list(t);
  if (!diverged.empty()) j["diverged"] = diverged;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < row.size(); ++c) {
      const double v = row[c] * scale_for(t.columns[c].unit, gamma);
      if (std::isfinite(v)) {
        r.push_back(v);
      } else {
        r.push_back(nullptr);
      }
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

std::string CsvFile::header_value(const std::string& key) const {
  for (const auto& [k, v] : header) {
    if (k == key) return v;
  }
  return {};
}

CsvFile read_csv(std::istream& in) {
  CsvFile f;
  std::string line;
  bool have_columns = false;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw std::runtime_error("read_csv: malformed header line: " + line);
      f.header.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!have_columns) {
      f.columns = std::move(cells);
      have_columns = true;
      continue;
    }
    std::vector<double> row;
    for (const std::string& c : cells) {
      if (c == "nan") {
        row.push_back(std::nan(""));
        continue;
      }
      double v = 0.0;
      const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
      if (res.ec != std::errc() || res.ptr != c.data() + c.size()) {
        throw std::runtime_error("read_csv: bad number '" + c + "'");
      }
      row.push_back(v);
    }
    f.rows.push_back(std::move(row));
    f.data_lines.push_back(line);
  }
  return f;
}

}  // namespace peplab
