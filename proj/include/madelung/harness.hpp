#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "madelung/diagnostics.hpp"
#include "madelung/scenario.hpp"
#include "madelung/trajectories.hpp"

namespace madelung {

struct CheckResult {
  std::string id;
  double measured = 0.0;
  double tolerance = 0.0;
  double upper = 0.0;
  Comparison comparison = Comparison::less_equal;
  bool pass = false;
  bool expected_fail = false;

  /// true unless the outcome contradicts the expectation
  bool ok() const { return pass != expected_fail; }
};

/// Per-snapshot scalars kept by a run.
struct SnapshotSummary {
  ExpectationReport expectations;
  double mean_x = 0.0;
  double std_x = 0.0;
  double peak_x = 0.0;
  /// max over valid_mask of |Q + I - Pi/rho|, and max |Q| there
  double enthalpy_split = 0.0;
  double max_abs_Q = 0.0;
};

struct VerificationReport {
  std::string scenario;
  std::vector<CheckResult> checks;
  double runtime_seconds = 0.0;
  std::size_t n = 0;
  double x_min = 0.0;
  double x_max = 0.0;
  double dt = 0.0;
  int n_steps = 0;
  bool diagnostic_only = false;
  std::vector<SnapshotSummary> timeseries;
  std::optional<ParcelEnsemble> parcels;

  bool ok() const;
};

/// Called for every snapshot of the main run, in order.
using SnapshotSink =
    std::function<void(std::size_t index, double t, const WaveFunction& wf, const MadelungFields& fields)>;

struct RunOptions {
  SnapshotSink on_snapshot;
};

/// Builds, optionally evolves and checks one scenario. Any error raised
/// underneath is rethrown as Error prefixed with the scenario name (and
/// the check id when it happened while evaluating a check).
VerificationReport run_scenario(const Scenario& s, const RunOptions& options = {});

/// Runs scenarios on up to `jobs` threads; reports keep the input order.
std::vector<VerificationReport> run_suite(const std::vector<Scenario>& scenarios, unsigned jobs = 1);

/// Fixed-width table, one line per check.
std::string format_report(const VerificationReport& report);

}  // namespace madelung
