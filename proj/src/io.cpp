#include "madelung/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace madelung {
namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_cell(const std::string& cell, const std::string& path, std::size_t line) {
  if (cell.empty()) return std::nan("");
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end == cell.c_str() || *end != '\0') {
    throw IoError(path + ":" + std::to_string(line) + ": not a number: '" + cell + "'");
  }
  return v;
}

double opt(const std::optional<double>& v) { return v ? *v : std::nan(""); }

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json check_json(const CheckSpec& c) {
  json j = {{"id", c.id}, {"tolerance", c.tolerance}, {"comparison", to_string(c.comparison)}};
  if (c.comparison == Comparison::within_range) j["upper"] = c.upper;
  if (c.expected) j["expected"] = *c.expected;
  if (c.expected_fail) j["expected_fail"] = true;
  if (!c.times.empty()) j["times"] = c.times;
  if (!c.params.empty()) j["params"] = c.params;
  return j;
}

CheckSpec check_from_json(const json& j) {
  CheckSpec c;
  c.id = j.at("id").get<std::string>();
  c.tolerance = j.value("tolerance", 0.0);
  c.comparison = comparison_from_string(j.value("comparison", std::string("<=")));
  c.upper = j.value("upper", 0.0);
  if (j.contains("expected") && !j["expected"].is_null()) c.expected = j["expected"].get<double>();
  c.expected_fail = j.value("expected_fail", false);
  if (j.contains("times")) c.times = j["times"].get<std::vector<double>>();
  if (j.contains("params")) c.params = j["params"].get<std::map<std::string, double>>();
  return c;
}

json scenario_json(const Scenario& s) {
  json state = {{"factory", s.state.factory}};
  for (const auto& [k, v] : s.state.params) state[k] = v;
  json j = {
      {"name", s.name},
      {"description", s.description},
      {"constants", {{"hbar", s.constants.hbar}, {"mass", s.constants.mass}}},
      {"grid", {{"n", s.grid.n}, {"x_min", s.grid.x_min}, {"x_max", s.grid.x_max}}},
      {"state", state},
      {"potential",
       {{"kind", to_string(s.potential.kind)},
        {"g", s.potential.g},
        {"omega", s.potential.omega},
        {"reflect_at_origin", s.potential.reflect_at_origin},
        {"table", s.potential_table}}},
      {"diagnostic_only", s.diagnostic_only},
      {"density_floor", s.density_floor},
      {"parcels", s.parcels},
  };
  j["propagation"] = s.propagation ? json{{"dt", s.propagation->dt},
                                          {"n_steps", s.propagation->n_steps},
                                          {"snapshot_every", s.propagation->snapshot_every}}
                                   : json(nullptr);
  j["window"] = s.window ? json::array({s.window->first, s.window->second}) : json(nullptr);
  j["checks"] = json::array();
  for (const auto& c : s.checks) j["checks"].push_back(check_json(c));
  return j;
}

Scenario scenario_from(const json& j) {
  Scenario s;
  s.name = j.at("name").get<std::string>();
  s.description = j.value("description", std::string());
  if (j.contains("constants")) {
    s.constants.hbar = j["constants"].value("hbar", 1.0);
    s.constants.mass = j["constants"].value("mass", 1.0);
  }
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    s.grid.n = g.value("n", s.grid.n);
    s.grid.x_min = g.value("x_min", s.grid.x_min);
    s.grid.x_max = g.value("x_max", s.grid.x_max);
  }
  const auto& st = j.at("state");
  s.state.factory = st.at("factory").get<std::string>();
  for (const auto& [k, v] : st.items()) {
    if (k == "factory") continue;
    if (!v.is_number()) throw InvalidArgument("state parameter '" + k + "' must be a number");
    s.state.params[k] = v.get<double>();
  }
  if (j.contains("potential")) {
    const auto& p = j["potential"];
    s.potential.kind = potential_kind_from_string(p.value("kind", std::string("free")));
    s.potential.g = p.value("g", 0.0);
    s.potential.omega = p.value("omega", 0.0);
    s.potential.reflect_at_origin = p.value("reflect_at_origin", false);
    s.potential_table = p.value("table", std::string());
  }
  if (j.contains("propagation") && !j["propagation"].is_null()) {
    const auto& p = j["propagation"];
    PropagatorConfig c;
    c.dt = p.value("dt", c.dt);
    c.n_steps = p.value("n_steps", c.n_steps);
    c.snapshot_every = p.value("snapshot_every", c.snapshot_every);
    s.propagation = c;
  }
  s.diagnostic_only = j.value("diagnostic_only", false);
  s.density_floor = j.value("density_floor", kDefaultDensityFloor);
  s.parcels = j.value("parcels", 0);
  if (j.contains("window") && !j["window"].is_null()) {
    const auto w = j["window"].get<std::vector<double>>();
    if (w.size() != 2) throw InvalidArgument("window must have two entries");
    s.window = std::make_pair(w[0], w[1]);
  }
  if (j.contains("checks")) {
    for (const auto& c : j["checks"]) s.checks.push_back(check_from_json(c));
  }
  s.validate();
  return s;
}

bool is_free_form(const std::vector<std::string>& path) {
  // state parameters and check params are open maps
  if (path.size() == 2 && path[0] == "state") return true;
  return path.size() == 4 && path[0] == "checks" && path[2] == "params";
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  for (std::size_t c = 0; c < table.header.size(); ++c) out << (c ? "," : "") << table.header[c];
  out << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) throw IoError("csv row width does not match header");
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
    out << '\n';
  }
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + ": empty file");
  t.header = split(line, ',');
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != t.header.size()) throw IoError(path + ":" + std::to_string(lineno) + ": wrong number of cells");
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_cell(c, path, lineno));
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable timeseries_table(const std::vector<ExpectationReport>& rows) {
  CsvTable t{kTimeseriesColumns, {}};
  for (const auto& r : rows) {
    t.rows.push_back({r.t, r.norm, r.K, r.Q, r.U, r.I, r.E, r.FI, r.accel, r.vi_mean, opt(r.bernoulli_residual_max),
                      opt(r.nonspread_residual)});
  }
  return t;
}

CsvTable fields_table(const WaveFunction& wf, const MadelungFields& f) {
  CsvTable t{kFieldColumns, {}};
  const Grid& g = wf.grid();
  for (std::size_t i = 0; i < g.n(); ++i) {
    t.rows.push_back({g.x(i), wf.psi[i].real(), wf.psi[i].imag(), f.rho[i], f.S[i], f.u[i], f.div_u[i], f.Q_tilde[i],
                      f.Pi[i], f.internal_density[i], f.v_i[i]});
  }
  return t;
}

CsvTable trajectories_table(const ParcelEnsemble& e) {
  CsvTable t{kTrajectoryColumns, {}};
  for (std::size_t p = 0; p < e.size(); ++p) {
    for (std::size_t j = 0; j < e.record_count(); ++j) {
      t.rows.push_back({static_cast<double>(p), e.times[j], e.x_records[p][j], e.u_records[p][j],
                        e.ln_rho_records[p][j], e.div_u_records[p][j], e.action_records[p][j], e.S_records[p][j]});
    }
  }
  return t;
}

namespace {

json report_object(const VerificationReport& r, bool include_runtime) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    json jc = {{"id", c.id},
               {"measured", number_or_null(c.measured)},
               {"tolerance", c.tolerance},
               {"comparison", to_string(c.comparison)},
               {"pass", c.pass},
               {"expected_fail", c.expected_fail}};
    if (c.comparison == Comparison::within_range) jc["upper"] = c.upper;
    checks.push_back(jc);
  }
  json j = {{"scenario", r.scenario},
            {"checks", checks},
            {"ok", r.ok()},
            {"grid", {{"n", r.n}, {"x_min", r.x_min}, {"x_max", r.x_max}}},
            {"dt", r.dt},
            {"n_steps", r.n_steps},
            {"diagnostic_only", r.diagnostic_only}};
  if (include_runtime) j["runtime_seconds"] = r.runtime_seconds;
  return j;
}

}  // namespace

std::string report_json(const VerificationReport& report, bool include_runtime) {
  return report_object(report, include_runtime).dump(2);
}

std::string suite_json(const std::vector<VerificationReport>& reports, bool include_runtime) {
  json arr = json::array();
  bool ok = true;
  for (const auto& r : reports) {
    arr.push_back(report_object(r, include_runtime));
    ok = ok && r.ok();
  }
  return json{{"reports", arr}, {"ok", ok}}.dump(2);
}

std::string scenario_to_json(const Scenario& s) { return scenario_json(s).dump(2); }

Scenario scenario_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("scenario JSON: ") + e.what());
  }
  try {
    return scenario_from(j);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("scenario JSON: ") + e.what());
  }
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return scenario_from_json(ss.str());
}

Scenario apply_overrides(const Scenario& s, const std::vector<std::string>& overrides) {
  json j = scenario_json(s);
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) throw InvalidArgument("override '" + o + "' is not key=value");
    const std::string key = o.substr(0, eq);
    const std::string text = o.substr(eq + 1);
    json value;
    try {
      value = json::parse(text);
    } catch (const json::exception&) {
      value = text;
    }
    const auto path = split(key, '.');
    json* node = &j;
    for (std::size_t i = 0; i < path.size(); ++i) {
      const std::string& part = path[i];
      const bool last = i + 1 == path.size();
      if (node->is_array()) {
        std::size_t idx = 0;
        const auto r = std::from_chars(part.data(), part.data() + part.size(), idx);
        if (r.ec != std::errc() || r.ptr != part.data() + part.size() || idx >= node->size()) {
          throw InvalidArgument("override '" + key + "': bad index '" + part + "'");
        }
        node = &(*node)[idx];
      } else if (node->is_object()) {
        if (!node->contains(part) && !(last && is_free_form(path))) {
          throw InvalidArgument("override '" + key + "': no such key '" + part + "'");
        }
        node = &(*node)[part];
      } else if (node->is_null() && !last) {
        // e.g. propagation.dt on a diagnostic-only scenario
        throw InvalidArgument("override '" + key + "': '" + part + "' is not set in this scenario");
      } else {
        throw InvalidArgument("override '" + key + "': cannot descend into a value");
      }
    }
    *node = value;
  }
  try {
    return scenario_from(j);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("override: ") + e.what());
  }
}

}  // namespace madelung
