#include "madelung/scenario.hpp"

#include <algorithm>
#include <set>

namespace madelung {
namespace {

// Checks that only make sense for a propagated run.
const std::set<std::string>& dynamic_checks() {
  static const std::set<std::string> ids = {
      "bernoulli_max", "bernoulli_order",       "momentum_order", "spreading_law", "mean_drift",
      "peak_tracking", "continuity",            "continuity_order", "quantile_preservation", "action",
      "incompressible", "ln_rho_constancy",     "propagator_order"};
  return ids;
}

const std::set<std::string>& parcel_checks() {
  static const std::set<std::string> ids = {"continuity",       "continuity_order", "quantile_preservation",
                                            "action",           "incompressible",   "ln_rho_constancy"};
  return ids;
}

CheckSpec le(std::string id, double tol) {
  CheckSpec c;
  c.id = std::move(id);
  c.tolerance = tol;
  return c;
}

CheckSpec expect_value(std::string id, double expected, double tol) {
  CheckSpec c = le(std::move(id), tol);
  c.expected = expected;
  return c;
}

CheckSpec order(std::string id, std::map<std::string, double> params) {
  CheckSpec c;
  c.id = std::move(id);
  c.comparison = Comparison::within_range;
  c.tolerance = 3.5;
  c.upper = 4.5;
  c.params = std::move(params);
  return c;
}

// Identities every snapshot of a normalizable run must satisfy.
std::vector<CheckSpec> identity_checks() {
  return {le("norm_drift", 1e-10),      le("energy_drift", 1e-8),      le("energy_forms", 1e-9),
          le("kinetic_split", 1e-9),    le("fisher_identity", 1e-10),  le("pressure_integral", 1e-10),
          le("enthalpy_split", 1e-7),   le("fisher_score", 1e-10)};
}

void append(std::vector<CheckSpec>& to, std::vector<CheckSpec> more) {
  for (auto& c : more) to.push_back(std::move(c));
}

Scenario base(std::string name, std::string description) {
  Scenario s;
  s.name = std::move(name);
  s.description = std::move(description);
  s.propagation = PropagatorConfig{1e-3, 1000, 1};
  return s;
}

}  // namespace

double StateSpec::param(const std::string& key) const {
  const auto it = params.find(key);
  if (it == params.end()) throw InvalidArgument("state '" + factory + "' is missing parameter '" + key + "'");
  return it->second;
}

double CheckSpec::param(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

std::string to_string(Comparison c) {
  switch (c) {
    case Comparison::less_equal: return "<=";
    case Comparison::greater_than: return ">";
    case Comparison::within_range: return "range";
  }
  return "?";
}

Comparison comparison_from_string(const std::string& s) {
  if (s == "<=") return Comparison::less_equal;
  if (s == ">") return Comparison::greater_than;
  if (s == "range") return Comparison::within_range;
  throw InvalidArgument("unknown comparison '" + s + "' (expected <=, > or range)");
}

const std::vector<std::string>& registered_checks() {
  static const std::vector<std::string> ids = {
      "norm_drift",      "energy_drift",   "energy_forms",     "kinetic_split",   "fisher_identity",
      "pressure_integral", "enthalpy_split", "ehrenfest_accel", "fisher_score",    "nonspread_max",
      "nonspread_final", "bernoulli_max",  "bernoulli_order",  "momentum_order",  "spreading_law",
      "mean_drift",      "peak_tracking",  "FI_at_t0",         "Q_at_t0",         "E_at_t0",
      "K_at_t0",         "U_at_t0",        "continuity",       "continuity_order", "quantile_preservation",
      "action",          "incompressible", "ln_rho_constancy", "propagator_order"};
  return ids;
}

void Scenario::validate() const {
  if (name.empty()) throw InvalidArgument("scenario needs a name");
  constants.validate();
  if (diagnostic_only && propagation) throw InvalidArgument(name + ": diagnostic_only scenarios carry no propagation");
  if (!diagnostic_only && !propagation) throw InvalidArgument(name + ": missing propagation settings");
  static const std::set<std::string> factories = {"gaussian", "plane_wave", "harmonic_ground", "airy", "bouncer"};
  if (!factories.count(state.factory)) throw InvalidArgument(name + ": unknown state factory '" + state.factory + "'");
  if (window && !(window->second > window->first)) throw InvalidArgument(name + ": window must satisfy lo < hi");
  if (parcels < 0) throw InvalidArgument(name + ": parcels must be non-negative");
  if (!(density_floor >= 0.0)) throw InvalidArgument(name + ": density_floor must be non-negative");
  const auto& ids = registered_checks();
  for (const auto& c : checks) {
    if (std::find(ids.begin(), ids.end(), c.id) == ids.end()) {
      throw InvalidArgument(name + ": unknown check id '" + c.id + "'");
    }
    if (diagnostic_only && dynamic_checks().count(c.id)) {
      throw InvalidArgument(name + ": check '" + c.id + "' needs a propagated run");
    }
    if (parcel_checks().count(c.id) && parcels < 1) {
      throw InvalidArgument(name + ": check '" + c.id + "' needs parcels");
    }
    if (c.id.ends_with("_at_t0") && !c.expected) throw InvalidArgument(name + ": check '" + c.id + "' needs expected");
  }
}

std::vector<Scenario> builtin_scenarios() {
  std::vector<Scenario> out;

  {
    Scenario s = base("plane_wave", "single plane wave, U = 0: uniform flow, zero Bohm potential");
    s.state = {"plane_wave", {{"mode", 2}}};
    s.parcels = 8;
    s.checks = identity_checks();
    append(s.checks, {le("ehrenfest_accel", 1e-8), le("nonspread_max", 1e-6), le("bernoulli_max", 1e-5),
                      le("continuity", 1e-4), le("action", 1e-4), le("incompressible", 1e-6),
                      le("ln_rho_constancy", 1e-6)});
    out.push_back(std::move(s));
  }
  {
    Scenario s = base("free_gaussian", "free Gaussian, sigma0 = 1, spreading from rest");
    s.state = {"gaussian", {{"x0", 0.0}, {"sigma0", 1.0}, {"k0", 0.0}}};
    s.propagation->n_steps = 2000;
    s.parcels = 16;
    s.checks = identity_checks();
    CheckSpec spread = le("spreading_law", 1e-4);
    spread.times = {0.5, 1.0, 2.0};
    CheckSpec control = le("nonspread_final", 1e-6);
    control.expected_fail = true;
    CheckSpec cont_order;
    cont_order.id = "continuity_order";
    cont_order.comparison = Comparison::greater_than;
    cont_order.tolerance = 3.5;
    cont_order.params = {{"t_end", 0.5}};
    append(s.checks, {le("ehrenfest_accel", 1e-8), expect_value("FI_at_t0", 1.0, 1e-6),
                      expect_value("Q_at_t0", 0.125, 1e-7), spread, control,
                      order("bernoulli_order", {{"dt", 1e-2}, {"t", 0.5}, {"floor", 1e-6}}),
                      order("momentum_order", {{"dt", 1e-2}, {"t", 0.5}, {"floor", 1e-6}}),
                      le("continuity", 1e-4), cont_order, le("quantile_preservation", 1e-4), le("action", 1e-4)});
    out.push_back(std::move(s));
  }
  {
    Scenario s = base("moving_gaussian", "free Gaussian launched with k0 = 2 from x0 = -2");
    s.state = {"gaussian", {{"x0", -2.0}, {"sigma0", 1.0}, {"k0", 2.0}}};
    s.parcels = 16;
    s.checks = identity_checks();
    CheckSpec drift = le("mean_drift", 1e-6);
    drift.times = {1.0};
    append(s.checks, {le("ehrenfest_accel", 1e-8), drift, le("continuity", 1e-4),
                      le("quantile_preservation", 1e-4), le("action", 1e-4)});
    out.push_back(std::move(s));
  }
  {
    Scenario s = base("harmonic_ground", "harmonic oscillator ground state, omega = 1: stationary");
    s.state = {"harmonic_ground", {{"omega", 1.0}}};
    s.potential.kind = PotentialKind::harmonic;
    s.potential.omega = 1.0;
    s.parcels = 8;
    s.checks = identity_checks();
    append(s.checks, {le("ehrenfest_accel", 1e-8), expect_value("E_at_t0", 0.5, 1e-8),
                      expect_value("K_at_t0", 0.0, 1e-10), expect_value("Q_at_t0", 0.25, 1e-7),
                      expect_value("U_at_t0", 0.25, 1e-7), le("nonspread_max", 1e-6), le("bernoulli_max", 1e-5),
                      le("continuity", 1e-4), le("quantile_preservation", 1e-4), le("action", 1e-4),
                      order("propagator_order", {})});
    out.push_back(std::move(s));
  }
  {
    Scenario s = base("airy_packet", "free accelerating Airy packet, B = 1, tapered and windowed");
    s.state = {"airy", {{"B", 1.0}, {"t0", 0.0}}};
    s.window = std::make_pair(-10.0, 10.0);
    s.parcels = 8;
    // the windowed state is not normalizable, so the Fisher identity is not asserted
    s.checks = identity_checks();
    std::erase_if(s.checks, [](const CheckSpec& c) { return c.id == "fisher_identity"; });
    CheckSpec peak = le("peak_tracking", 1e-3);
    peak.times = {0.25, 0.5, 1.0};
    append(s.checks, {le("nonspread_max", 1e-3), peak, le("continuity", 1e-4), le("incompressible", 1e-6),
                      le("ln_rho_constancy", 1e-6)});
    out.push_back(std::move(s));
  }
  {
    Scenario s;
    s.name = "quantum_bouncer";
    s.description = "gravitational bouncer ground state, g = 1 (static, image extension across the wall)";
    // the image extension has a discontinuous fourth derivative at the wall
    s.grid = {2048, -10.0, 10.0};
    s.state = {"bouncer", {{"g", 1.0}}};
    s.potential.kind = PotentialKind::linear;
    s.potential.g = 1.0;
    s.potential.reflect_at_origin = true;
    s.diagnostic_only = true;
    s.window = std::make_pair(0.5, 5.0);
    s.checks = {le("norm_drift", 1e-10),
                le("energy_forms", 1e-9),
                le("kinetic_split", 1e-9),
                le("fisher_identity", 1e-10),
                le("pressure_integral", 1e-10),
                le("enthalpy_split", 1e-7),
                le("fisher_score", 1e-10),
                le("nonspread_max", 1e-6),
                expect_value("K_at_t0", 0.0, 1e-10),
                expect_value("E_at_t0", bouncer_energy(s.constants, 1.0), 1e-6)};
    out.push_back(std::move(s));
  }
  {
    Scenario s = base("spreading_negative_control", "free Gaussian, sigma0 = 0.7: must violate the linear constraint");
    s.state = {"gaussian", {{"x0", 0.0}, {"sigma0", 0.7}, {"k0", 0.0}}};
    CheckSpec control;
    control.id = "nonspread_final";
    control.comparison = Comparison::greater_than;
    control.tolerance = 1e-2;
    s.checks = {le("norm_drift", 1e-10), control};
    out.push_back(std::move(s));
  }
  return out;
}

Scenario find_builtin(const std::string& name) {
  for (auto& s : builtin_scenarios()) {
    if (s.name == name) return s;
  }
  throw UnknownScenario("unknown scenario '" + name + "'");
}

ScenarioSetup build(const Scenario& s) {
  s.validate();
  Grid grid = make_grid(s.grid.n, s.grid.x_min, s.grid.x_max);
  const PhysicalConstants& c = s.constants;
  const StateSpec& st = s.state;
  WaveFunction wf = [&] {
    if (st.factory == "gaussian") return gaussian_packet(grid, c, st.param("x0"), st.param("sigma0"), st.param("k0"));
    if (st.factory == "plane_wave") return plane_wave(grid, c, static_cast<int>(st.param("mode")));
    if (st.factory == "harmonic_ground") return harmonic_ground_state(grid, c, st.param("omega"));
    if (st.factory == "airy") {
      const double t0 = st.params.count("t0") ? st.param("t0") : 0.0;
      return airy_packet(grid, c, st.param("B"), t0);
    }
    return bouncer_eigenstate(grid, c, st.param("g"));
  }();
  PotentialSpec spec = s.potential;
  if (spec.kind == PotentialKind::tabulated && !spec.table) spec = load_tabulated_potential(s.potential_table, grid);
  ExternalPotential potential = make_external_potential(spec, grid, c);
  return ScenarioSetup{std::move(grid), std::move(wf), std::move(potential)};
}

}  // namespace madelung
