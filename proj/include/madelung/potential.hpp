#pragma once

#include <optional>
#include <string>

#include "madelung/grid.hpp"
#include "madelung/state.hpp"

namespace madelung {

enum class PotentialKind { free, linear, harmonic, tabulated };

/// Time-independent external potential U(x).
///
/// linear: U = m g x, or m g |x| when reflect_at_origin is set (the image
/// problem of a hard wall at x = 0, used by the bouncer).
/// harmonic: U = m omega^2 x^2 / 2.
/// tabulated: the values in table, copied as given.
struct PotentialSpec {
  PotentialKind kind = PotentialKind::free;
  double g = 0.0;
  double omega = 0.0;
  bool reflect_at_origin = false;
  std::optional<RealField> table;
};

std::string to_string(PotentialKind kind);
PotentialKind potential_kind_from_string(const std::string& name);

/// U sampled on the grid.
RealField evaluate_potential(const PotentialSpec& spec, const Grid& grid, const PhysicalConstants& constants);

/// dU/dx. Analytic for the built-in kinds (one-sided slope sign(x) m g for
/// the reflected linear case, 0 at the origin); spectral for tabulated
/// potentials.
RealField potential_gradient(const PotentialSpec& spec, const Grid& grid, const PhysicalConstants& constants);

/// U together with its gradient, both on the same grid.
struct ExternalPotential {
  RealField value;
  RealField gradient;
};

ExternalPotential make_external_potential(const PotentialSpec& spec, const Grid& grid,
                                          const PhysicalConstants& constants);

/// Reads a two-column (x, U) whitespace-separated text file. Lines starting
/// with '#' are comments. The x column must reproduce the grid points within
/// 1e-9; the result is a tabulated PotentialSpec.
PotentialSpec load_tabulated_potential(const std::string& path, const Grid& grid);

}  // namespace madelung
