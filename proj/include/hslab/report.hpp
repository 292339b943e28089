#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

// Run artifacts: hash-chained JSONL ledgers, CSV tables, and a minimal
// SVG line-plot emitter.  All output is deterministic: fixed number
// formatting, sorted JSON keys, and no timestamps, so identical configs
// produce byte-identical files.

namespace hslab {

using Json = nlohmann::json;

std::uint64_t fnv1a64(std::string_view data);
std::string hash_hex(std::string_view data);

// append-only sequence of JSON records; each record carries the previous
// record's hash so the file forms a chain
class RunLedger {
 public:
  explicit RunLedger(std::string path);
  // appends one record and returns its hash
  std::string append(const std::string& config_hash, const Json& outputs);
  const std::string& path() const { return path_; }

  // parsed records of an existing ledger; throws ConfigError when the file
  // is missing or empty, InvariantError when the hash chain is broken
  static std::vector<Json> read(const std::string& path);

 private:
  std::string path_;
  std::string prev_hash_;
};

// deterministic shortest-ish float formatting shared by CSV and SVG
std::string format_number(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);
  void add_row(const std::vector<double>& values);
  void add_row(const std::vector<std::string>& values);
  void write(const std::string& path) const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
};

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<PlotSeries>& series, bool log_y = false);

}  // namespace hslab
