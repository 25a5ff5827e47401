#pragma once

#include <limits>
#include <string>
#include <vector>

#include "pipedg/analysis.hpp"

namespace pipedg {

inline constexpr const char* kVersion = "0.1.0";

struct ExperimentPlan {
  std::string fixture;       // embedded fixture name, or
  std::string network_path;  // network document on disk (exactly one of the two)
  double flow_tol = 0.0;
  std::vector<double> eps_list;
  std::vector<double> h_list;
  int k = 2;
  double alpha = 1.0;
  double tau_ratio = 0.5;
  double t_max = 0.0;  // 0 = problem horizon
  MeshStrategy strategy = MeshStrategy::adaptive;
  std::vector<double> snapshot_times;
  int snapshot_samples = 5;
  std::string out_dir = ".";
  int jobs = 0;  // 0 = hardware concurrency
};

struct RunRecord {
  double eps = 0.0;
  double h = 0.0;
  double tau = 0.0;
  Branch branch = Branch::convdiff_on_graded;
  std::size_t n_elements = 0;
  std::size_t n_layer = 0;
  int n_dof = 0;
  double error = std::numeric_limits<double>::quiet_NaN();
  double eoc = std::numeric_limits<double>::quiet_NaN();
  double wall_ms = 0.0;
  std::string status = "ok";
  std::vector<std::string> artifacts;
};

struct ExperimentResult {
  int exit_code = 0;
  std::string diagnostic;  // nonempty on config errors / warnings
  std::vector<RunRecord> records;
  std::vector<std::string> outputs;  // files written, out_dir relative
};

/// Full sweep: one solve + reference + error per (eps, h), gathered in plan
/// order regardless of worker completion order, artifacts written to
/// plan.out_dir (errors.csv, plot.csv, manifest.json, optional snapshots).
ExperimentResult run_experiment(const ExperimentPlan& plan);

/// CSV texts (exposed for tests; run_experiment writes these to disk).
std::string error_report_csv(const ExperimentPlan& plan,
                             const std::vector<RunRecord>& records);
std::string plot_data_csv(const ExperimentPlan& plan,
                          const std::vector<RunRecord>& records);
std::string snapshot_csv(const Trajectory& traj, double time,
                         int samples_per_element);

} // namespace pipedg
