#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace stoken {

using Cell = std::variant<std::string, double, std::int64_t, bool>;

// Column names carry their unit suffix (_ns, _us, _pct, _deg ...).
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);  // throws std::logic_error on width mismatch
};

struct Report {
  std::string command;
  std::uint64_t seed = 0;
  std::vector<Table> tables;

  const Table& table(const std::string& name) const;
};

// '.' decimal separator, no grouping, doubles at 10 significant digits.
std::string format_cell(const Cell& c);
std::string render_csv(const Table& t);
std::string render_json(const Report& r);

// Writes <command>.json or <command>_<table>.csv files plus metadata.json.
void write_report(const Report& r, const std::string& dir, const std::string& format);

std::string metadata_json(const Report& r, const std::string& version);

}  // namespace stoken
