// Copyright 2026 The pam Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PAM_EXPERIMENTS_HPP
#define PAM_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "pam/limit_laws.hpp"
#include "pam/stats.hpp"

namespace pam {

enum class ExperimentKind { localisation, scaling, pointprocess, ageing };

// Product box [x_lo_i, x_hi_i] x (y_lo, y_hi] in the rescaled plane.
struct BoxSpec {
  std::vector<double> x_lo, x_hi;
  double y_lo = 0;
  double y_hi = 0;  // +inf allowed
};

// Exact nu-measure of a product box.
double nu_box(const BoxSpec& box, const LimitParams& p);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::localisation;
  double gamma = 1.0;
  int d = 1;
  std::vector<double> t_values;
  std::size_t replicas = 1;
  std::uint64_t base_seed = 0;
  double epsilon = 1e-3;   // box certification level
  double growth = 2.0;
  std::string output_dir = ".";
  double tau = -2.0;       // pointprocess window
  double alpha = 1.0;
  std::vector<BoxSpec> boxes;
  double w_max = 20.0;     // ageing horizon / t
  std::vector<double> w_grid;
  double rel_tol = 1e-6;   // localisation solver tolerance
};

// Strict parse: unknown keys anywhere are errors, as are t <= e^e or
// replicas < 1.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);

struct ExperimentResult {
  std::vector<StatReport> reports;
  bool all_pass = true;
  std::string rows_path;
  std::string summary_path;
};

// Dispatches on config.kind, writes rows.jsonl and summary.json under
// config.output_dir (byte-identical across re-runs), returns verdicts.
ExperimentResult run_experiment(const ExperimentConfig& config);

ExperimentResult run_localisation(const ExperimentConfig& config);
ExperimentResult run_scaling(const ExperimentConfig& config);
ExperimentResult run_pointprocess(const ExperimentConfig& config);
ExperimentResult run_ageing(const ExperimentConfig& config);

// Worker-pool width: min(PAM_WORKERS, replica count), at least 1.
unsigned worker_count(std::size_t replicas);

}  // namespace pam

#endif
