#include "madelung/potential.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "madelung/spectral.hpp"

namespace madelung {

std::string to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::free: return "free";
    case PotentialKind::linear: return "linear";
    case PotentialKind::harmonic: return "harmonic";
    case PotentialKind::tabulated: return "tabulated";
  }
  return "unknown";
}

PotentialKind potential_kind_from_string(const std::string& name) {
  if (name == "free") return PotentialKind::free;
  if (name == "linear") return PotentialKind::linear;
  if (name == "harmonic") return PotentialKind::harmonic;
  if (name == "tabulated") return PotentialKind::tabulated;
  throw InvalidArgument("unknown potential kind '" + name + "'");
}

namespace {

const RealField& checked_table(const PotentialSpec& spec, const Grid& grid) {
  if (!spec.table) throw InvalidArgument("tabulated potential without a table");
  if (spec.table->size() != grid.n()) {
    throw InvalidArgument("tabulated potential has " + std::to_string(spec.table->size()) + " entries, grid has " +
                          std::to_string(grid.n()));
  }
  require_finite(spec.table->values(), "tabulated potential");
  return *spec.table;
}

}  // namespace

RealField evaluate_potential(const PotentialSpec& spec, const Grid& grid, const PhysicalConstants& constants) {
  constants.validate();
  RealField u(grid);
  const double m = constants.mass;
  switch (spec.kind) {
    case PotentialKind::free:
      break;
    case PotentialKind::linear:
      for (std::size_t i = 0; i < grid.n(); ++i) {
        const double x = spec.reflect_at_origin ? std::fabs(grid.x(i)) : grid.x(i);
        u[i] = m * spec.g * x;
      }
      break;
    case PotentialKind::harmonic:
      if (!(spec.omega > 0.0)) throw InvalidArgument("harmonic potential requires omega > 0");
      for (std::size_t i = 0; i < grid.n(); ++i) {
        const double x = grid.x(i);
        u[i] = 0.5 * m * spec.omega * spec.omega * x * x;
      }
      break;
    case PotentialKind::tabulated: {
      const RealField& t = checked_table(spec, grid);
      for (std::size_t i = 0; i < grid.n(); ++i) u[i] = t[i];
      break;
    }
  }
  return u;
}

RealField potential_gradient(const PotentialSpec& spec, const Grid& grid, const PhysicalConstants& constants) {
  constants.validate();
  RealField du(grid);
  const double m = constants.mass;
  switch (spec.kind) {
    case PotentialKind::free:
      break;
    case PotentialKind::linear:
      for (std::size_t i = 0; i < grid.n(); ++i) {
        const double x = grid.x(i);
        const double slope = spec.reflect_at_origin ? (x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0)) : 1.0;
        du[i] = m * spec.g * slope;
      }
      break;
    case PotentialKind::harmonic:
      if (!(spec.omega > 0.0)) throw InvalidArgument("harmonic potential requires omega > 0");
      for (std::size_t i = 0; i < grid.n(); ++i) du[i] = m * spec.omega * spec.omega * grid.x(i);
      break;
    case PotentialKind::tabulated:
      du = spectral_derivative(checked_table(spec, grid), 1);
      break;
  }
  return du;
}

ExternalPotential make_external_potential(const PotentialSpec& spec, const Grid& grid,
                                          const PhysicalConstants& constants) {
  return ExternalPotential{evaluate_potential(spec, grid, constants), potential_gradient(spec, grid, constants)};
}

PotentialSpec load_tabulated_potential(const std::string& path, const Grid& grid) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open potential table '" + path + "'");
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    double x = 0.0, u = 0.0;
    if (!(ss >> x >> u)) {
      throw InvalidArgument(path + ":" + std::to_string(lineno) + ": expected two numeric columns");
    }
    const std::size_t i = values.size();
    if (i >= grid.n()) throw InvalidArgument(path + ": more rows than grid points");
    if (std::fabs(x - grid.x(i)) > 1e-9) {
      throw InvalidArgument(path + ":" + std::to_string(lineno) + ": x = " + std::to_string(x) +
                            " does not match grid point " + std::to_string(grid.x(i)));
    }
    values.push_back(u);
  }
  if (values.size() != grid.n()) {
    throw InvalidArgument(path + ": " + std::to_string(values.size()) + " rows, grid has " + std::to_string(grid.n()));
  }
  PotentialSpec spec;
  spec.kind = PotentialKind::tabulated;
  spec.table = RealField(grid, std::move(values));
  return spec;
}

}  // namespace madelung
