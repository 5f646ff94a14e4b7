#pragma once

#include <optional>

#include "madelung/grid.hpp"
#include "madelung/potential.hpp"
#include "madelung/state.hpp"

namespace madelung {

/// Fluid fields of one snapshot. Quantities carrying a tilde are per unit
/// mass; S holds the phase action S (not S/m).
///
/// Everything is pointwise algebra on Psi, Psi' and Psi'' (spectral), so
/// nodes of Psi need no special treatment. Fields that divide by rho are
/// evaluated on valid_mask and copied from the nearest valid point
/// elsewhere; Pi and bohm_force_density are defined everywhere.
struct MadelungFields {
  RealField rho;
  RealField S;
  RealField amplitude;  // signed R from polar_decompose; informational
  RealField u;
  RealField div_u;
  RealField Q_tilde;
  RealField grad_Q_tilde;
  RealField Pi;
  RealField internal_density;
  RealField v_i;
  RealField kinetic_density;
  /// -rho dQ/dx = -dPi/dx
  RealField bohm_force_density;
  Mask valid_mask;
};

MadelungFields compute_fields(const WaveFunction& wf, double floor_rel = kDefaultDensityFloor);

/// u = (hbar/m) Im(Psi* Psi') / rho.
RealField velocity(const WaveFunction& wf, double floor_rel = kDefaultDensityFloor);

/// Q = -(hbar^2/2m^2) R''/R from a (possibly signed) amplitude R.
RealField bohm_potential(const RealField& amplitude, const PhysicalConstants& c,
                         double floor_rel = kDefaultDensityFloor);
/// Q from rho alone: R = sqrt(rho). Only valid for node-free densities.
RealField bohm_potential_from_density(const RealField& rho, const PhysicalConstants& c,
                                      double floor_rel = kDefaultDensityFloor);
/// -(hbar/2m)^2 [ (ln rho)'' + (ln rho)'^2 / 2 ], with the log-derivatives
/// taken analytically from Psi, Psi', Psi''. Cross-check for bohm_potential.
RealField bohm_potential_log_form(const WaveFunction& wf, double floor_rel = kDefaultDensityFloor);

/// Pi = -(hbar/2m)^2 rho (ln rho)'' = -2 (hbar/2m)^2 (R R'' - R'^2), gauge f = 0.
RealField pseudo_pressure(const RealField& amplitude, const PhysicalConstants& c);

/// integral of (rho')^2 / rho; rho' is spectral. Below the floor the
/// integrand takes its limit at a quadratic zero, 2 rho'' (clipped at 0),
/// so that exact nodes on grid points keep their contribution.
double fisher_information(const RealField& rho, double floor_rel = kDefaultDensityFloor);

/// Scalar expectations. Integrals run over the whole grid with division-free
/// integrands (rho K, rho Q, ... written in terms of Psi and its
/// derivatives); FI goes through rho alone.
struct ExpectationReport {
  double t = 0.0;
  double norm = 0.0;
  double K = 0.0;
  double Q = 0.0;
  double U = 0.0;
  double I = 0.0;
  /// <K + Q + U>
  double E = 0.0;
  /// (1/m) <Psi|H|Psi>, the Hamiltonian quadratic form
  double E_hamiltonian = 0.0;
  /// -(hbar^2/2m^2) integral Re(Psi* Psi'')
  double kinetic_hamiltonian = 0.0;
  double FI = 0.0;
  double accel = 0.0;
  double vi_mean = 0.0;
  /// integral of Pi
  double Pi_integral = 0.0;
  std::optional<double> bernoulli_residual_max;
  std::optional<double> nonspread_residual;
};

ExpectationReport expectations(const WaveFunction& wf, const ExternalPotential& potential,
                               double floor_rel = kDefaultDensityFloor);
/// Same, reusing fields already computed for wf.
ExpectationReport expectations(const WaveFunction& wf, const MadelungFields& fields,
                               const ExternalPotential& potential, double floor_rel = kDefaultDensityFloor);

/// A residual field together with the points where it is defined.
struct MaskedResidual {
  RealField values;
  Mask mask;

  double max_abs() const;
};

/// r = dS~/dt + (K + Q + U) with dS~ = (hbar/m) arg(Psi_next Psi_prev*),
/// the nearest-branch phase increment per point, and K + Q + U averaged over
/// the two snapshots. Defined where both snapshots are valid.
MaskedResidual bernoulli_residual(const WaveFunction& prev, const WaveFunction& next, const RealField& potential,
                                  double dt, double floor_rel = kDefaultDensityFloor);
/// Same, with the fields of both snapshots already computed.
MaskedResidual bernoulli_residual(const WaveFunction& prev, const MadelungFields& prev_fields,
                                  const WaveFunction& next, const MadelungFields& next_fields,
                                  const RealField& potential, double dt);

/// Momentum equation residual du/dt + u du/dx + d(Q + U)/dx at the middle of
/// three snapshots spaced dt apart; du/dt by central difference.
MaskedResidual momentum_residual(const WaveFunction& prev, const WaveFunction& mid, const WaveFunction& next,
                                 const ExternalPotential& potential, double dt,
                                 double floor_rel = kDefaultDensityFloor);

/// Least-squares fit of Q + U/m against x over valid_mask (intersected with
/// region when given). Returns the largest fit residual divided by the
/// largest of the ranges of Q and U/m and of max |K + Q + U/m| over the
/// region; when all vanish the absolute residual is returned. Needs >= 16
/// points.
double nonspreading_residual(const MadelungFields& fields, const RealField& potential,
                             const PhysicalConstants& c, const std::optional<Mask>& region = std::nullopt);

}  // namespace madelung
