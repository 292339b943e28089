#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "hslab/errors.hpp"
#include "hslab/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"hslab: numerical laboratory for the boundary-singular "
               "Hardy-Sobolev problem"};
  std::string experiment, config_path, out_dir;
  int threads = 0;
  long long seed = -1;
  app.add_option("experiment", experiment,
                 "solve | sweep | pohozaev | blowup | greens | halfspace | "
                 "report")
      ->required();
  app.add_option("--config", config_path, "key = value config file")
      ->required();
  app.add_option("--out", out_dir, "output directory (overrides config)");
  app.add_option("--threads", threads, "linear algebra threads");
  app.add_option("--seed", seed, "seed recorded in the config hash");
  app.footer("Config keys:\n" + hslab::config_schema());

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    hslab::ExperimentConfig cfg = hslab::parse_config_file(config_path);
    cfg.experiment = experiment;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (threads > 0) cfg.threads = threads;
    if (seed >= 0) cfg.seed = static_cast<unsigned long>(seed);
    hslab::run_experiment(cfg);
    return 0;
  } catch (const hslab::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const hslab::SolverError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return 3;
  } catch (const hslab::InvariantError& e) {
    std::fprintf(stderr, "invariant violation: %s\n", e.what());
    return 4;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
