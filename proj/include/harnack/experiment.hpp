#pragma once

// One configured experiment: build, solve, certify, persist.

#include "harnack/config.hpp"
#include "harnack/harnack.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace harnack {

enum ExitCode : int { kExitPass = 0, kExitVerdict = 1, kExitUsage = 2, kExitSolver = 3 };

/// Max of 2(t0 + t) Lap f at the first certified slice of a kernel run,
/// against n - 0.02 n.
struct Sharpness {
  double t = 0.0;
  double value = 0.0;
  Index node = -1;
  double threshold = 0.0;
  bool pass = false;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::optional<HarnackReport> report;  // absent when the solver failed
  std::optional<Sharpness> sharpness;   // kernel initial data on a linear run only
  SolverStats stats;
  std::string solver_error;
  double solver_error_time = 0.0;
  double seconds = 0.0;

  int exit_code() const;
};

Sharpness sharpness_witness(const Trajectory& traj, const HarnackReport& report, double t0);

/// Solves and certifies without touching the filesystem.
ExperimentResult execute(const ExperimentConfig& cfg);

void write_csv(const HarnackReport& report, std::ostream& os);
std::string report_json(const ExperimentResult& result, const Geometry& g);

/// execute, then writes <out>/<name>.csv and <out>/<name>.json when cfg.out
/// is set. Throws std::runtime_error on I/O failure.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace harnack
