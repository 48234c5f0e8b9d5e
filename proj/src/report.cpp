#include "stoken/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "stoken/errors.hpp"

namespace stoken {

namespace {

constexpr const char* kVersion = "1.0.0";

nlohmann::ordered_json cell_json(const Cell& c) {
  return std::visit([](const auto& v) { return nlohmann::ordered_json(v); }, c);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + p.string());
  out << text;
}

}  // namespace

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("row width differs from header in table " + name);
  rows.push_back(std::move(row));
}

const Table& Report::table(const std::string& name) const {
  for (const auto& t : tables) {
    if (t.name == name) return t;
  }
  throw std::out_of_range("no table named " + name);
}

std::string format_cell(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", std::get<double>(c));
  return buf;
}

std::string render_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + csv_escape(t.columns[i]);
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_escape(format_cell(row[i]));
    out += '\n';
  }
  return out;
}

std::string render_json(const Report& r) {
  nlohmann::ordered_json j;
  j["command"] = r.command;
  j["seed"] = r.seed;
  nlohmann::ordered_json tables = nlohmann::ordered_json::object();
  for (const auto& t : r.tables) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
      nlohmann::ordered_json o;
      for (std::size_t i = 0; i < row.size(); ++i) o[t.columns[i]] = cell_json(row[i]);
      rows.push_back(o);
    }
    tables[t.name] = rows;
  }
  j["tables"] = tables;
  return j.dump(2) + "\n";
}

std::string metadata_json(const Report& r, const std::string& version) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
  nlohmann::ordered_json j;
  j["command"] = r.command;
  j["seed"] = r.seed;
  j["version"] = version;
  j["timestamp"] = stamp;
  return j.dump(2) + "\n";
}

void write_report(const Report& r, const std::string& dir, const std::string& format) {
  const std::filesystem::path base(dir);
  std::error_code ec;
  std::filesystem::create_directories(base, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir);
  if (format == "json") {
    write_file(base / (r.command + ".json"), render_json(r));
  } else if (format == "csv") {
    for (const auto& t : r.tables) write_file(base / (r.command + "_" + t.name + ".csv"), render_csv(t));
  } else {
    throw ConfigError("format must be csv or json");
  }
  write_file(base / "metadata.json", metadata_json(r, kVersion));
}

}  // namespace stoken
