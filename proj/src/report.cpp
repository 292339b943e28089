#include "hslab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "hslab/errors.hpp"

namespace hslab {

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(std::string_view data) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(data)));
  return buf;
}

RunLedger::RunLedger(std::string path) : path_(std::move(path)) {
  // continue the chain when the ledger already has records
  std::ifstream in(path_);
  std::string line, last;
  while (std::getline(in, line))
    if (!line.empty()) last = line;
  if (!last.empty()) {
    Json rec = Json::parse(last, nullptr, false);
    if (rec.is_object() && rec.contains("hash"))
      prev_hash_ = rec["hash"].get<std::string>();
  }
}

std::string RunLedger::append(const std::string& config_hash,
                              const Json& outputs) {
  Json rec;
  rec["schema"] = 1;
  rec["config"] = config_hash;
  rec["prev"] = prev_hash_;
  rec["outputs"] = outputs;
  const std::string hash = hash_hex(rec.dump());
  rec["hash"] = hash;
  std::ofstream out(path_, std::ios::app);
  if (!out) throw ConfigError("RunLedger: cannot write " + path_);
  out << rec.dump() << "\n";
  prev_hash_ = hash;
  return hash;
}

std::vector<Json> RunLedger::read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("RunLedger: missing ledger file " + path);
  std::vector<Json> records;
  std::string line, prev;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Json rec = Json::parse(line, nullptr, false);
    if (!rec.is_object())
      throw InvariantError("RunLedger: malformed record in " + path);
    const std::string stored = rec.value("hash", "");
    Json body = rec;
    body.erase("hash");
    if (hash_hex(body.dump()) != stored || rec.value("prev", "") != prev)
      throw InvariantError("RunLedger: broken hash chain in " + path);
    prev = stored;
    records.push_back(std::move(rec));
  }
  if (records.empty())
    throw ConfigError("RunLedger: empty ledger file " + path);
  return records;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> columns)
    : columns_(std::move(columns)) {}

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> row;
  row.reserve(values.size());
  for (double v : values) row.push_back(format_number(v));
  add_row(row);
}

void CsvTable::add_row(const std::vector<std::string>& values) {
  if (values.size() != columns_.size())
    throw ConfigError("CsvTable: row width does not match the header");
  rows_.push_back(values);
}

void CsvTable::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("CsvTable: cannot write " + path);
  for (std::size_t i = 0; i < columns_.size(); ++i)
    out << (i ? "," : "") << columns_[i];
  out << "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<PlotSeries>& series, bool log_y) {
  const double W = 640, H = 480, ml = 70, mr = 20, mt = 40, mb = 50;
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  auto ty = [log_y](double y) { return log_y ? std::log10(y) : y; };
  for (const auto& sr : series) {
    for (std::size_t i = 0; i < sr.x.size(); ++i) {
      if (log_y && sr.y[i] <= 0.0) continue;
      x0 = std::min(x0, sr.x[i]);
      x1 = std::max(x1, sr.x[i]);
      y0 = std::min(y0, ty(sr.y[i]));
      y1 = std::max(y1, ty(sr.y[i]));
    }
  }
  if (x1 <= x0) x1 = x0 + 1.0;
  if (y1 <= y0) y1 = y0 + 1.0;
  auto px = [&](double x) {
    return ml + (W - ml - mr) * (x - x0) / (x1 - x0);
  };
  auto py = [&](double y) {
    return H - mb - (H - mt - mb) * (ty(y) - y0) / (y1 - y0);
  };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b"};
  std::ofstream out(path);
  if (!out) throw ConfigError("write_svg_plot: cannot write " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H
      << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title
      << "</text>\n";
  // axes with end-point labels
  out << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr
      << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
  auto label = [&](double x, double y, const std::string& text,
                   const char* anchor) {
    out << "<text x=\"" << x << "\" y=\"" << y << "\" text-anchor=\""
        << anchor << "\" font-family=\"sans-serif\" font-size=\"12\">" << text
        << "</text>\n";
  };
  label(ml, H - mb + 18, format_number(x0), "middle");
  label(W - mr, H - mb + 18, format_number(x1), "middle");
  const double ylo = log_y ? std::pow(10.0, y0) : y0;
  const double yhi = log_y ? std::pow(10.0, y1) : y1;
  label(ml - 6, H - mb, format_number(ylo), "end");
  label(ml - 6, mt + 6, format_number(yhi), "end");
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& sr = series[k];
    out << "<polyline fill=\"none\" stroke=\"" << colors[k % 6]
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < sr.x.size(); ++i) {
      if (log_y && sr.y[i] <= 0.0) continue;
      out << format_number(px(sr.x[i])) << "," << format_number(py(sr.y[i]))
          << " ";
    }
    out << "\"/>\n";
    label(W - mr - 8, mt + 16.0 * (k + 1), sr.label, "end");
  }
  out << "</svg>\n";
}

}  // namespace hslab
