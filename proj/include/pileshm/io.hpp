#pragma once

// File plumbing shared by the CLI and tests: CSV tables with '#'-prefixed
// metadata headers (config hash, seed, version -- no timestamps, outputs must
// be byte-identical across reruns), and small JSON helpers.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pileshm/common.hpp"

namespace pileshm::io {

// Round-trippable, locale-independent float formatting.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

struct Metadata {
  std::string config_hash;  // fnv-1a of the config file bytes, hex
  std::uint64_t seed = 0;
  std::string version = pileshm::version;

  std::string header() const {
    std::ostringstream os;
    os << "# version: " << version << "\n";
    os << "# config_hash: " << config_hash << "\n";
    os << "# seed: " << seed << "\n";
    return os.str();
  }
};

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::map<std::string, std::string> metadata;  // parsed from '# key: value'

  int column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return static_cast<int>(i);
    return -1;
  }
};

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open CSV file: " + path);
  CsvTable table;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      const auto colon = t.find(':');
      if (colon != std::string::npos)
        table.metadata[trim(t.substr(1, colon - 1))] = trim(t.substr(colon + 1));
      continue;
    }
    if (!have_header) {
      table.columns = split_csv_line(t);
      have_header = true;
      continue;
    }
    auto fields = split_csv_line(t);
    if (fields.size() != table.columns.size())
      throw std::runtime_error("malformed CSV row in " + path + ": '" + t + "'");
    table.rows.push_back(std::move(fields));
  }
  if (!have_header) throw std::runtime_error("CSV file has no header: " + path);
  return table;
}

inline void write_csv(const std::string& path, const Metadata& meta,
                      const std::vector<std::string>& columns,
                      const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);  // binary: identical bytes on every platform
  if (!out) throw std::runtime_error("cannot write CSV file: " + path);
  out << meta.header();
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

// std::from_chars round-trips every finite double (subnormals included) and
// ignores the locale, matching the "%.17g" writer above.
inline double parse_double(const std::string& s, const std::string& context) {
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (begin != end && *begin == '+') ++begin;  // from_chars rejects an explicit plus
  double v = 0.0;
  const auto res = std::from_chars(begin, end, v);
  if (res.ec == std::errc() && res.ptr == end) return v;
  throw std::runtime_error("cannot parse number '" + s + "' in " + context);
}

inline nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open JSON file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

inline void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write JSON file: " + path);
  out << j.dump(2) << "\n";
}

inline std::string hash_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file for hashing: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return hex64(fnv1a64(os.str()));
}

}  // namespace pileshm::io
