#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "madelung/potential.hpp"
#include "madelung/propagator.hpp"
#include "madelung/state.hpp"

namespace madelung {

struct GridSpec {
  std::size_t n = 512;
  double x_min = -20.0;
  double x_max = 20.0;
};

/// Factory id plus its numeric parameters.
///
///   gaussian:  x0, sigma0, k0
///   plane_wave: mode
///   harmonic_ground: omega
///   airy:      B, t0
///   bouncer:   g
struct StateSpec {
  std::string factory;
  std::map<std::string, double> params;

  double param(const std::string& key) const;
};

enum class Comparison {
  less_equal,     // measured <= tolerance
  greater_than,   // measured > tolerance
  within_range,   // tolerance <= measured <= upper
};

std::string to_string(Comparison c);
Comparison comparison_from_string(const std::string& s);

/// One configured check. The meaning of measured, times and params depends
/// on the id; see registered_checks().
struct CheckSpec {
  std::string id;
  double tolerance = 0.0;
  Comparison comparison = Comparison::less_equal;
  double upper = 0.0;
  /// reference value for the *_at_t0 checks (measured = |value - expected|)
  std::optional<double> expected;
  /// checks expected to fail (negative controls); reported, not counted
  bool expected_fail = false;
  std::vector<double> times;
  std::map<std::string, double> params;

  double param(const std::string& key, double fallback) const;
};

struct Scenario {
  std::string name;
  std::string description;
  PhysicalConstants constants;
  GridSpec grid;
  StateSpec state;
  PotentialSpec potential;
  /// path of a tabulated potential, read when potential.kind is tabulated
  std::string potential_table;
  std::optional<PropagatorConfig> propagation;
  bool diagnostic_only = false;
  double density_floor = kDefaultDensityFloor;
  /// restricts window-aware diagnostics (non-spreading fit, parcel seeding)
  std::optional<std::pair<double, double>> window;
  int parcels = 0;
  std::vector<CheckSpec> checks;

  /// Throws InvalidArgument for inconsistent settings (diagnostic_only with
  /// a propagation config, unknown check ids, unknown factory, ...).
  void validate() const;
};

/// Ids accepted in CheckSpec::id.
const std::vector<std::string>& registered_checks();

/// plane_wave, free_gaussian, moving_gaussian, harmonic_ground, airy_packet,
/// quantum_bouncer, spreading_negative_control.
std::vector<Scenario> builtin_scenarios();

/// Throws UnknownScenario if no builtin has that name.
Scenario find_builtin(const std::string& name);

/// Builds the initial state, grid and potential of a scenario.
struct ScenarioSetup {
  Grid grid;
  WaveFunction initial;
  ExternalPotential potential;
};
ScenarioSetup build(const Scenario& s);

}  // namespace madelung
