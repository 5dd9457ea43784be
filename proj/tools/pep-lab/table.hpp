#pragma once

// Tabular output: CSV with "# key=value" header lines, or the same data as JSON.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace peplab {

/// How a column rescales under --gamma (inputs and outputs are in units of gamma = 1).
enum class Unit { none, time, frequency, density };

struct Column {
  std::string name;
  Unit unit = Unit::none;
  /// NaN is allowed in this column and marks a drive with no finite value.
  bool may_diverge = false;
};

struct Table {
  std::string name;
  std::vector<std::pair<std::string, std::string>> header;
  std::vector<Column> columns;
  std::vector<std::vector<double>> rows;

  void meta(const std::string& key, const std::string& value) { header.emplace_back(key, value); }
  void meta(const std::string& key, double value);
};

/// Shortest decimal that round-trips; "nan" for NaN.
std::string format_number(double value);

/// Empty when every row has the declared width and NaN appears only in flagged columns.
std::string schema_problem(const Table& table);

void write_csv(std::ostream& out, const Table& table, double gamma);
nlohmann::ordered_json to_json(const Table& table, double gamma);

/// Minimal reader for files produced by write_csv.
struct CsvFile {
  std::vector<std::pair<std::string, std::string>> header;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> data_lines;

  std::string header_value(const std::string& key) const;
};

CsvFile read_csv(std::istream& in);

}  // namespace peplab
