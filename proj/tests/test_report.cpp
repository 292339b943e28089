#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "hslab/errors.hpp"
#include "hslab/experiments.hpp"
#include "hslab/report.hpp"

using namespace hslab;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("hslab_test_" + name);
  fs::remove(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("fnv1a hashing") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(hash_hex("") == "cbf29ce484222325");
}

TEST_CASE("ledger chain append, read, tamper detection") {
  fs::path path = temp_file("ledger.jsonl");
  {
    RunLedger ledger(path.string());
    const std::string h1 = ledger.append("cfg", {{"x", 1}});
    const std::string h2 = ledger.append("cfg", {{"x", 2}});
    CHECK(h1 != h2);
  }
  auto records = RunLedger::read(path.string());
  REQUIRE(records.size() == 2);
  CHECK(records[0]["prev"] == "");
  CHECK(records[1]["prev"] == records[0]["hash"]);
  CHECK(records[1]["outputs"]["x"] == 2);

  // appending through a reopened ledger continues the chain
  RunLedger(path.string()).append("cfg", {{"x", 3}});
  CHECK(RunLedger::read(path.string()).size() == 3);

  // flip one byte of a record payload
  std::string body = slurp(path);
  body[body.find("\"x\":1") + 4] = '7';
  std::ofstream(path) << body;
  CHECK_THROWS_AS(RunLedger::read(path.string()), InvariantError);

  CHECK_THROWS_AS(RunLedger::read("/nonexistent/ledger.jsonl"), ConfigError);
  fs::path empty = temp_file("empty.jsonl");
  std::ofstream(empty).close();
  CHECK_THROWS_AS(RunLedger::read(empty.string()), ConfigError);
}

TEST_CASE("identical configs give byte-identical ledgers") {
  fs::path a = temp_file("det_a.jsonl"), b = temp_file("det_b.jsonl");
  for (const fs::path& p : {a, b}) {
    RunLedger ledger(p.string());
    ledger.append("deadbeef", {{"mu", 7.247400000000001}, {"n", 3}});
    ledger.append("deadbeef", {{"list", {1.5, 2.5}}});
  }
  CHECK(slurp(a) == slurp(b));
  CHECK(!slurp(a).empty());
}

TEST_CASE("csv table") {
  CsvTable csv({"a", "b"});
  csv.add_row({1.0, 0.5});
  csv.add_row({std::vector<std::string>{"x", "y"}});
  CHECK_THROWS_AS(csv.add_row(std::vector<double>{1.0}), ConfigError);
  fs::path p = temp_file("table.csv");
  csv.write(p.string());
  CHECK(slurp(p) == "a,b\n1,0.5\nx,y\n");
}

TEST_CASE("svg plot emits a well-formed file") {
  fs::path p = temp_file("plot.svg");
  write_svg_plot(p.string(), "demo", {{"series", {0, 1, 2}, {1, 4, 9}}});
  const std::string body = slurp(p);
  CHECK(body.find("<svg") != std::string::npos);
  CHECK(body.find("polyline") != std::string::npos);
  CHECK(body.find("</svg>") != std::string::npos);
}

TEST_CASE("config parsing and validation") {
  fs::path p = temp_file("config.txt");
  std::ofstream(p) << "# comment\n"
                   << "geometry.s = 0.5\n"
                   << "geometry.samples = 12\n"
                   << "solver.gap = 0.25   # inline comment\n"
                   << "report.ledgers = a.jsonl; b.jsonl\n";
  ExperimentConfig cfg = parse_config_file(p.string());
  CHECK(cfg.domain.s == 0.5);
  CHECK(cfg.domain.meridian_samples == 12);
  CHECK(cfg.solver_gap == 0.25);
  REQUIRE(cfg.report_ledgers.size() == 2);
  CHECK(cfg.report_ledgers[1] == "b.jsonl");

  cfg.experiment = "solve";
  validate_config(cfg);  // passes

  // hash is stable and sensitive
  const std::string h = cfg.config_hash();
  CHECK(h == cfg.config_hash());
  ExperimentConfig other = cfg;
  other.solver_gap = 0.3;
  CHECK(other.config_hash() != h);

  ExperimentConfig bad = cfg;
  bad.experiment = "frobnicate";
  CHECK_THROWS_AS(validate_config(bad), ConfigError);
  bad = cfg;
  bad.domain.s = 2.5;  // invalid before any compute
  CHECK_THROWS_AS(validate_config(bad), ConfigError);

  CHECK_THROWS_AS(apply_config_key(cfg, "no.such.key", "1"), ConfigError);
  CHECK_THROWS_AS(apply_config_key(cfg, "solver.gap", "abc"), ConfigError);
  CHECK_THROWS_AS(parse_config_file("/nonexistent/config.txt"), ConfigError);

  std::ofstream(p) << "not a key value line\n";
  CHECK_THROWS_AS(parse_config_file(p.string()), ConfigError);
}

}  // TEST_SUITE
