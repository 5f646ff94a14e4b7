#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "madelung/diagnostics.hpp"
#include "madelung/grid.hpp"
#include "madelung/potential.hpp"
#include "madelung/spectral.hpp"
#include "madelung/state.hpp"

namespace madelung {

/// Fields a parcel needs from one snapshot, all per unit mass.
struct FlowSnapshot {
  double t = 0.0;
  RealField u;
  RealField div_u;
  RealField ln_rho;
  /// S / m, unwrapped in space
  RealField S_tilde;
  /// K - Q - U/m
  RealField lagrangian;
  /// cumulative mass from x_min, for the quantile records
  std::optional<TrigInterpolant> cdf;
};

FlowSnapshot make_flow_snapshot(double t, const WaveFunction& wf, const ExternalPotential& potential,
                                double floor_rel = kDefaultDensityFloor);
FlowSnapshot make_flow_snapshot(double t, const WaveFunction& wf, const MadelungFields& fields,
                                const ExternalPotential& potential);

/// Bohmian parcels and their along-trajectory records. Record j of every
/// parcel belongs to times[j].
struct ParcelEnsemble {
  PhysicalConstants constants;
  /// current positions, wrapped into the domain
  std::vector<double> positions;
  /// positions without the periodic wrap
  std::vector<double> unwrapped;
  std::vector<double> times;
  std::vector<std::vector<double>> x_records;
  std::vector<std::vector<double>> u_records;
  std::vector<std::vector<double>> ln_rho_records;
  std::vector<std::vector<double>> div_u_records;
  std::vector<std::vector<double>> action_records;
  std::vector<std::vector<double>> S_records;
  std::vector<std::vector<double>> lagrangian_records;
  std::vector<std::vector<double>> quantile_records;

  std::size_t size() const { return positions.size(); }
  std::size_t record_count() const { return times.size(); }
};

/// Parcels at the quantiles (i + 1/2)/n of the cumulative distribution of
/// rho (trigonometric antiderivative, inverted by bisection). rho need not
/// be normalized; it is rescaled by its total mass.
ParcelEnsemble seed_parcels(const RealField& rho, int n_parcels, const PhysicalConstants& constants = {});

/// Returns the snapshot with the given index, or nullptr when it is missing.
using SnapshotProvider = std::function<const FlowSnapshot*(std::size_t index)>;

/// Appends the records of every parcel for snapshot s (the first record
/// starts the action at zero; later ones add the trapezoid increment). S
/// samples are shifted by multiples of 2 pi hbar/m onto the branch of the
/// previous record.
void record(ParcelEnsemble& ensemble, const FlowSnapshot& s);

/// One classical RK4 step of length h = s2.t - s0.t using snapshots at the
/// start, midpoint and end; u is interpolated with periodic cubics. Records
/// s2 afterwards.
void rk4_step(ParcelEnsemble& ensemble, const FlowSnapshot& s0, const FlowSnapshot& s1, const FlowSnapshot& s2);

/// Runs n_steps RK4 steps. Step j uses snapshots 2j, 2j+1 and 2j+2, so the
/// parcel step is twice the snapshot spacing. Records snapshot 0 first when
/// the ensemble has no records yet. Throws Error on a missing snapshot.
void advect(ParcelEnsemble& ensemble, const SnapshotProvider& provider, int n_steps);

/// Streams snapshots into an ensemble while a run is in progress, keeping
/// only the two most recent ones.
class ParcelTracker {
 public:
  explicit ParcelTracker(ParcelEnsemble seeds);

  void push(FlowSnapshot snapshot);
  const ParcelEnsemble& ensemble() const { return ensemble_; }

 private:
  ParcelEnsemble ensemble_;
  std::optional<FlowSnapshot> start_;
  std::optional<FlowSnapshot> mid_;
};

/// Per parcel, max over interior records of |d(ln rho)/dt + div u| with the
/// time derivative by central difference. Needs >= 3 records.
std::vector<double> continuity_residual(const ParcelEnsemble& ensemble);

/// Per parcel, |(S(T) - S(0)) - action(T)| for the last record. Throws Error
/// if consecutive S samples jump by more than pi hbar/m.
std::vector<double> action_check(const ParcelEnsemble& ensemble);

/// Per parcel, the largest change of the mass to its left relative to the
/// first record.
std::vector<double> quantile_drift(const ParcelEnsemble& ensemble);

}  // namespace madelung
