#pragma once

#include <string>
#include <vector>

#include "hslab/geometry.hpp"

// Experiment runner shared by the command-line tool and the Python
// bindings: flat key = value configs, orchestration of the solver and
// analysis modules, and persistence of ledgers, CSV tables, and plots.

namespace hslab {

struct ExperimentConfig {
  // solve | sweep | pohozaev | blowup | greens | halfspace | report
  std::string experiment;

  DomainSpec domain;

  double solver_gap = 0.1;   // 2*(s) - p for single solves
  double solver_p = 0.0;     // absolute exponent; wins over the gap when > 0
  double solver_a = 0.0;     // constant zeroth-order coefficient
  double solver_tol = 1e-8;
  int solver_max_iter = 400;
  double sup_flag_threshold = 10.0;  // continuation blow-up flag

  double sweep_gap_min = 0.01;
  double sweep_gap_max = 0.2;

  double pohozaev_region = 0.5;  // region radius relative to the domain

  double blowup_threshold = 1.0;
  int blowup_n_max = 4;

  double halfspace_radius = 12.0;
  int halfspace_samples = 32;
  double halfspace_gap = 0.02;

  double greens_a = 0.0;
  int greens_poles = 4;

  std::vector<std::string> report_ledgers;

  std::string out_dir = ".";
  unsigned long seed = 0;
  int threads = 1;

  // sorted key = value dump; the config hash recorded in ledgers
  std::string canonical() const;
  std::string config_hash() const;
};

// flat key = value text; '#' comments; unknown keys are rejected
ExperimentConfig parse_config_file(const std::string& path);
void apply_config_key(ExperimentConfig& cfg, const std::string& key,
                      const std::string& value);
// throws ConfigError before any compute on invalid parameters
void validate_config(const ExperimentConfig& cfg);

// runs one experiment; writes ledger/CSV/SVG artifacts under out_dir.
// Throws ConfigError / SolverError / InvariantError (exit codes 2/3/4).
void run_experiment(const ExperimentConfig& cfg);

// one line per config key for --help and the schema file
std::string config_schema();

}  // namespace hslab
