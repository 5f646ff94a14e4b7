#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "madelung/io.hpp"

using namespace madelung;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "madelung_test_io";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("doubles survive a text round trip") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, std::numeric_limits<double>::denorm_min(),
                   std::nextafter(1.0, 2.0)}) {
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("csv round trip") {
  const CsvTable t{{"a", "b", "c"}, {{1.0 / 3.0, -0.0, 1e-310}, {std::nan(""), 2.0, -7.125}}};
  const std::string path = scratch("t.csv").string();
  write_csv(path, t);
  const CsvTable back = read_csv(path);
  CHECK(back.header == t.header);
  REQUIRE(back.rows.size() == 2);
  CHECK(back.rows[0][0] == t.rows[0][0]);
  CHECK(back.rows[0][2] == t.rows[0][2]);
  CHECK(std::isnan(back.rows[1][0]));
  CHECK(back.rows[1][2] == -7.125);
}

TEST_CASE("csv errors") {
  CHECK_THROWS_AS(write_csv(scratch("w.csv").string(), {{"a", "b"}, {{1.0}}}), IoError);
  CHECK_THROWS_AS(write_csv((scratch("missing_dir") / "x" / "y.csv").string(), {{"a"}, {}}), IoError);
  CHECK_THROWS_AS(read_csv(scratch("does_not_exist.csv").string()), IoError);
  {
    std::ofstream out(scratch("bad.csv"));
    out << "a,b\n1,2\n3\n";
  }
  CHECK_THROWS_AS(read_csv(scratch("bad.csv").string()), IoError);
  {
    std::ofstream out(scratch("bad2.csv"));
    out << "a,b\n1,zz\n";
  }
  CHECK_THROWS_AS(read_csv(scratch("bad2.csv").string()), IoError);
}

TEST_CASE("artifact tables keep a fixed column order") {
  const Grid g = make_grid(32, -8.0, 8.0);
  const WaveFunction wf = gaussian_packet(g, {}, 0.0, 1.0, 0.5);
  const MadelungFields f = compute_fields(wf);
  const CsvTable fields = fields_table(wf, f);
  CHECK(fields.header == kFieldColumns);
  CHECK(fields.header.front() == "x");
  REQUIRE(fields.rows.size() == 32);
  CHECK(fields.rows[3][0] == g.x(3));
  CHECK(fields.rows[3][3] == f.rho[3]);

  ExpectationReport e;
  e.t = 0.5;
  e.nonspread_residual = 1e-3;
  const CsvTable ts = timeseries_table({e});
  CHECK(ts.header == kTimeseriesColumns);
  CHECK(ts.rows[0][0] == 0.5);
  CHECK(std::isnan(ts.rows[0][10]));
  CHECK(ts.rows[0][11] == 1e-3);

  ParcelEnsemble pe = seed_parcels(f.rho, 3);
  record(pe, make_flow_snapshot(0.0, wf, make_external_potential({}, g, {})));
  const CsvTable tr = trajectories_table(pe);
  CHECK(tr.header == kTrajectoryColumns);
  CHECK(tr.rows.size() == 3);
  CHECK(tr.rows[2][0] == 2.0);
}

TEST_CASE("scenario json round trip") {
  for (const auto& s : builtin_scenarios()) {
    CAPTURE(s.name);
    const std::string text = scenario_to_json(s);
    const Scenario back = scenario_from_json(text);
    CHECK(scenario_to_json(back) == text);
    CHECK(back.checks.size() == s.checks.size());
  }
}

TEST_CASE("scenario json defaults and errors") {
  const Scenario s = scenario_from_json(R"({"name": "x", "state": {"factory": "gaussian", "x0": 0, "sigma0": 1,
    "k0": 0}, "propagation": {"dt": 0.01}})");
  CHECK(s.grid.n == 512);
  CHECK(s.propagation->dt == 0.01);
  CHECK(s.potential.kind == PotentialKind::free);
  CHECK(s.checks.empty());

  CHECK_THROWS_AS(scenario_from_json("{"), InvalidArgument);
  CHECK_THROWS_AS(scenario_from_json(R"({"state": {"factory": "gaussian"}})"), InvalidArgument);
  CHECK_THROWS_AS(scenario_from_json(R"({"name": "x", "state": {"factory": "gaussian", "x0": "a"}})"),
                  InvalidArgument);
  CHECK_THROWS_AS(scenario_from_json(R"({"name": "x", "state": {"factory": "gaussian"}, "diagnostic_only": true,
    "window": [1]})"), InvalidArgument);
}

TEST_CASE("scenario files") {
  const auto path = scratch("s.json");
  {
    std::ofstream out(path);
    out << scenario_to_json(find_builtin("moving_gaussian"));
  }
  CHECK(load_scenario(path.string()).name == "moving_gaussian");
  CHECK_THROWS_AS(load_scenario(scratch("nope.json").string()), IoError);
}

TEST_CASE("overrides") {
  const Scenario base = find_builtin("free_gaussian");
  const Scenario s = apply_overrides(base, {"grid.n=1024", "state.sigma0=1.5", "propagation.dt=0.002",
                                            "checks.0.tolerance=1e-3", "potential.kind=harmonic",
                                            "potential.omega=2"});
  CHECK(s.grid.n == 1024);
  CHECK(s.state.param("sigma0") == 1.5);
  CHECK(s.propagation->dt == 0.002);
  CHECK(s.checks[0].tolerance == 1e-3);
  CHECK(s.potential.kind == PotentialKind::harmonic);
  CHECK(s.potential.omega == 2.0);
  CHECK(apply_overrides(base, {"state.extra=3"}).state.param("extra") == 3.0);

  CHECK_THROWS_AS(apply_overrides(base, {"grid.m=3"}), InvalidArgument);
  CHECK_THROWS_AS(apply_overrides(base, {"grid.n"}), InvalidArgument);
  CHECK_THROWS_AS(apply_overrides(base, {"=3"}), InvalidArgument);
  CHECK_THROWS_AS(apply_overrides(base, {"checks.99.tolerance=1"}), InvalidArgument);
  CHECK_THROWS_AS(apply_overrides(base, {"grid.n.x=1"}), InvalidArgument);
  CHECK_THROWS_AS(apply_overrides(find_builtin("quantum_bouncer"), {"propagation.dt=0.1"}), InvalidArgument);
  CHECK_THROWS_AS(apply_overrides(base, {"potential.kind=quartic"}), InvalidArgument);
}

TEST_CASE("report json") {
  VerificationReport r;
  r.scenario = "demo";
  r.checks.push_back({.id = "norm_drift", .measured = std::nan(""), .tolerance = 1e-10});
  r.runtime_seconds = 1.5;
  const auto j = nlohmann::json::parse(report_json(r));
  CHECK(j["scenario"] == "demo");
  CHECK(j["checks"][0]["measured"].is_null());
  CHECK(j["runtime_seconds"] == 1.5);
  CHECK_FALSE(nlohmann::json::parse(report_json(r, false)).contains("runtime_seconds"));
  const auto suite = nlohmann::json::parse(suite_json({r, r}));
  CHECK(suite["reports"].size() == 2);
}
