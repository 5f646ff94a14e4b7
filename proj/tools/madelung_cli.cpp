// Command-line front end: list, verify and run scenarios.
//
// Exit codes: 0 success, 1 a check failed unexpectedly (verify), 2 unknown
// scenario, 3 I/O failure, 4 invalid arguments or configuration.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "madelung/harness.hpp"
#include "madelung/io.hpp"
#include "madelung/scenario.hpp"

namespace fs = std::filesystem;
using namespace madelung;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitUnknownScenario = 2;
constexpr int kExitIo = 3;
constexpr int kExitInvalid = 4;

Scenario resolve(const std::string& name_or_path) {
  for (auto& s : builtin_scenarios()) {
    if (s.name == name_or_path) return s;
  }
  if (fs::is_regular_file(name_or_path)) return load_scenario(name_or_path);
  throw UnknownScenario("unknown scenario '" + name_or_path + "' (not a builtin name or a readable file)");
}

fs::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("MADELUNG_OUT"); env != nullptr && *env != '\0') return env;
  return "madelung_out";
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text << '\n';
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

int cmd_list() {
  for (const auto& s : builtin_scenarios()) {
    std::cout << s.name;
    if (s.diagnostic_only) std::cout << "  [diagnostic-only]";
    if (s.state.factory == "airy") std::cout << "  [non-normalizable]";
    std::cout << "\n    " << s.description << "\n    checks:";
    for (const auto& c : s.checks) std::cout << ' ' << c.id << (c.expected_fail ? "(xfail)" : "");
    std::cout << '\n';
  }
  return 0;
}

int cmd_verify(const std::vector<std::string>& names, bool json, unsigned jobs) {
  std::vector<Scenario> scenarios;
  if (names.empty()) {
    scenarios = builtin_scenarios();
  } else {
    for (const auto& n : names) scenarios.push_back(resolve(n));
  }
  const auto reports = run_suite(scenarios, jobs);
  bool ok = true;
  for (const auto& r : reports) ok = ok && r.ok();
  if (json) {
    std::cout << suite_json(reports) << '\n';
  } else {
    for (const auto& r : reports) std::cout << format_report(r);
    std::cout << (ok ? "all checks passed\n" : "some checks FAILED\n");
  }
  return ok ? 0 : kExitCheckFailed;
}

struct RunArgs {
  std::string scenario;
  std::string out;
  std::vector<std::string> overrides;
  int snapshot_every = 100;
  bool emit_fields = true;
  bool emit_trajectories = true;
};

int cmd_run(const RunArgs& a) {
  if (a.snapshot_every < 1) throw InvalidArgument("--snapshot-every must be >= 1");
  const Scenario s = apply_overrides(resolve(a.scenario), a.overrides);
  const fs::path dir = output_dir(a.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");

  RunOptions options;
  if (a.emit_fields) {
    options.on_snapshot = [&](std::size_t index, double, const WaveFunction& wf, const MadelungFields& f) {
      if (index % static_cast<std::size_t>(a.snapshot_every) != 0) return;
      write_csv((dir / ("fields_t" + std::to_string(index) + ".csv")).string(), fields_table(wf, f));
    };
  }
  const VerificationReport report = run_scenario(s, options);

  std::vector<ExpectationReport> rows;
  rows.reserve(report.timeseries.size());
  for (const auto& snap : report.timeseries) rows.push_back(snap.expectations);
  write_csv((dir / "timeseries.csv").string(), timeseries_table(rows));
  if (a.emit_trajectories && report.parcels) {
    write_csv((dir / "trajectories.csv").string(), trajectories_table(*report.parcels));
  }
  write_text(dir / "report.json", report_json(report));
  std::cout << format_report(report) << "artifacts written to " << dir.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1D Schroedinger simulator with Madelung-fluid diagnostics"};
  app.require_subcommand(1);

  app.add_subcommand("list", "print the builtin scenarios and their checks");

  auto* verify = app.add_subcommand("verify", "run scenarios and report every check");
  std::vector<std::string> verify_names;
  bool verify_all = false, verify_json = false;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  verify->add_option("scenarios", verify_names, "builtin names or scenario files (default: all builtins)");
  verify->add_flag("--all", verify_all, "run every builtin scenario");
  verify->add_flag("--json", verify_json, "print the reports as JSON");
  verify->add_option("-j,--jobs", jobs, "scenarios run in parallel")->check(CLI::PositiveNumber);

  auto* run = app.add_subcommand("run", "run one scenario and write CSV/JSON artifacts");
  RunArgs ra;
  run->add_option("-s,--scenario", ra.scenario, "builtin name or scenario JSON file")->required();
  run->add_option("-o,--out", ra.out, "output directory (default: $MADELUNG_OUT, else ./madelung_out)");
  run->add_option("--set", ra.overrides, "override a scenario key, e.g. grid.n=1024")->take_all();
  run->add_option("--snapshot-every", ra.snapshot_every, "write fields for every N-th snapshot");
  run->add_option("--emit-fields", ra.emit_fields, "write fields_t*.csv (true/false)");
  run->add_option("--emit-trajectories", ra.emit_trajectories, "write trajectories.csv (true/false)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (app.got_subcommand("list")) return cmd_list();
    if (app.got_subcommand("verify")) return cmd_verify(verify_all ? std::vector<std::string>{} : verify_names,
                                                        verify_json, jobs);
    return cmd_run(ra);
  } catch (const UnknownScenario& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUnknownScenario;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}
