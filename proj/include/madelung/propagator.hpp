#pragma once

#include <functional>
#include <vector>

#include "madelung/grid.hpp"
#include "madelung/state.hpp"

namespace madelung {

struct PropagatorConfig {
  double dt = 1e-3;
  int n_steps = 1000;
  int snapshot_every = 1;
};

/// Strang-split evolution under H = -hbar^2/2m d^2/dx^2 + U:
///   exp(-i U dt / 2 hbar) exp(-i T dt / hbar) exp(-i U dt / 2 hbar),
/// with T applied exactly in wavenumber space. Phase tables are built once
/// per (grid, U, dt).
class SplitStepPropagator {
 public:
  SplitStepPropagator(const Grid& grid, const PhysicalConstants& constants, const RealField& potential, double dt);

  /// Advances psi in place by one step.
  void step(ComplexField& psi) const;

  double dt() const { return dt_; }

 private:
  Grid grid_;
  double dt_;
  std::vector<Complex> half_potential_;
  std::vector<Complex> kinetic_;  // includes the 1/n of the inverse transform
  mutable std::vector<Complex> work_;
};

/// Rejects dt <= 0, negative n_steps, snapshot_every < 1, and steps whose
/// largest kinetic phase hbar k_max^2 dt / 2m reaches pi.
void validate(const PropagatorConfig& config, const Grid& grid, const PhysicalConstants& constants);

/// One Strang step; dt = 0 returns the input unchanged.
WaveFunction step(const WaveFunction& wf, const RealField& potential, double dt);

/// Called with (t, state) at t = 0 and after every snapshot_every steps.
/// Observers must not keep references to the state past the call.
using SnapshotObserver = std::function<void(double t, const WaveFunction& state)>;

/// Runs config.n_steps steps. Time is step_index * dt (no accumulation).
/// Exceptions thrown by observers abort the run.
WaveFunction evolve(const WaveFunction& wf, const RealField& potential, const PropagatorConfig& config,
                    const std::vector<SnapshotObserver>& observers = {});

}  // namespace madelung
