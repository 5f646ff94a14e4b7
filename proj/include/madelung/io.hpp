#pragma once

#include <string>
#include <vector>

#include "madelung/diagnostics.hpp"
#include "madelung/harness.hpp"
#include "madelung/scenario.hpp"
#include "madelung/trajectories.hpp"

namespace madelung {

/// 17 significant digits, enough to read the same double back.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Throws IoError when the file cannot be written or read, or when a row
/// has the wrong number of cells. Empty cells and "nan" read back as NaN.
void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

inline const std::vector<std::string> kTimeseriesColumns = {
    "t", "norm", "K", "Q", "U", "I", "E", "FI", "accel", "vi_mean", "bernoulli_residual_max", "nonspread_residual"};
inline const std::vector<std::string> kFieldColumns = {
    "x", "re_psi", "im_psi", "rho", "S", "u", "div_u", "Q_tilde", "Pi", "internal_density", "v_i"};
inline const std::vector<std::string> kTrajectoryColumns = {
    "parcel_id", "t", "x", "u", "ln_rho", "div_u", "action", "S_sampled"};

CsvTable timeseries_table(const std::vector<ExpectationReport>& rows);
CsvTable fields_table(const WaveFunction& wf, const MadelungFields& fields);
CsvTable trajectories_table(const ParcelEnsemble& ensemble);

/// {"scenario": ..., "checks": [{id, measured, tolerance, comparison,
/// pass, expected_fail}, ...], "grid": {...}, "dt", "n_steps",
/// "runtime_seconds"}. The runtime is omitted when include_runtime is false
/// so that reports of identical runs compare equal.
std::string report_json(const VerificationReport& report, bool include_runtime = true);
std::string suite_json(const std::vector<VerificationReport>& reports, bool include_runtime = true);

/// Scenario <-> JSON text. Missing keys keep their defaults.
std::string scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const std::string& text);
/// Reads a scenario file; throws IoError / InvalidArgument.
Scenario load_scenario(const std::string& path);

/// Applies "a.b.c=value" overrides. The key must already exist in the
/// scenario's JSON form (except inside state.params and check params); the
/// value is parsed as JSON and falls back to a plain string.
Scenario apply_overrides(const Scenario& s, const std::vector<std::string>& overrides);

}  // namespace madelung
