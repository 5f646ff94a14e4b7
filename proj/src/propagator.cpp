#include "madelung/propagator.hpp"

#include <cmath>
#include <numbers>

#include "madelung/kernels.hpp"

namespace madelung {

SplitStepPropagator::SplitStepPropagator(const Grid& grid, const PhysicalConstants& constants,
                                         const RealField& potential, double dt)
    : grid_(grid), dt_(dt), half_potential_(grid.n()), kinetic_(grid.n()), work_(grid.n()) {
  constants.validate();
  require_same_grid(grid, potential.grid(), "SplitStepPropagator");
  require_finite(potential.values(), "SplitStepPropagator potential");
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw InvalidArgument("time step must be finite and non-negative");
  const double hbar = constants.hbar, m = constants.mass;
  const auto k = grid.wavenumbers();
  const double inv_n = 1.0 / static_cast<double>(grid.n());
  for (std::size_t i = 0; i < grid.n(); ++i) {
    half_potential_[i] = std::polar(1.0, -potential[i] * dt / (2.0 * hbar));
    kinetic_[i] = std::polar(inv_n, -hbar * k[i] * k[i] * dt / (2.0 * m));
  }
}

void SplitStepPropagator::step(ComplexField& psi) const {
  auto v = psi.values();
  kernels::cmul_inplace(v, half_potential_);
  grid_.forward(v, work_);
  kernels::cmul_inplace(work_, kinetic_);
  grid_.backward(work_, v);
  kernels::cmul_inplace(v, half_potential_);
}

void validate(const PropagatorConfig& config, const Grid& grid, const PhysicalConstants& constants) {
  constants.validate();
  if (!(config.dt > 0.0) || !std::isfinite(config.dt)) throw InvalidArgument("propagation dt must be positive");
  if (config.n_steps < 0) throw InvalidArgument("propagation n_steps must be non-negative");
  if (config.snapshot_every < 1) throw InvalidArgument("snapshot_every must be >= 1");
  const double kmax = grid.k_nyquist();
  const double phase = constants.hbar * kmax * kmax * config.dt / (2.0 * constants.mass);
  if (phase >= std::numbers::pi) {
    throw InvalidArgument("time step too large: kinetic phase per step " + std::to_string(phase) + " >= pi");
  }
}

WaveFunction step(const WaveFunction& wf, const RealField& potential, double dt) {
  WaveFunction out = wf;
  if (dt == 0.0) return out;
  SplitStepPropagator prop(wf.grid(), wf.constants, potential, dt);
  prop.step(out.psi);
  return out;
}

WaveFunction evolve(const WaveFunction& wf, const RealField& potential, const PropagatorConfig& config,
                    const std::vector<SnapshotObserver>& observers) {
  validate(config, wf.grid(), wf.constants);
  SplitStepPropagator prop(wf.grid(), wf.constants, potential, config.dt);
  WaveFunction state = wf;
  const auto notify = [&](int step_index) {
    const double t = step_index * config.dt;
    for (const auto& obs : observers) obs(t, state);
  };
  notify(0);
  for (int s = 1; s <= config.n_steps; ++s) {
    prop.step(state.psi);
    if (s % config.snapshot_every == 0) notify(s);
  }
  return state;
}

}  // namespace madelung
