#include "madelung/trajectories.hpp"

#include <cmath>
#include <numbers>

#include "madelung/spectral.hpp"

namespace madelung {
namespace {

double cdf_fraction(const TrigInterpolant& cdf, const Grid& grid, double x) {
  return cdf.antiderivative(x) / (cdf.mean() * grid.length());
}

// Samples every record field at the current positions.
void append_records(ParcelEnsemble& e, const FlowSnapshot& s) {
  const Grid& grid = s.u.grid();
  const double branch = 2.0 * std::numbers::pi * e.constants.hbar / e.constants.mass;
  const bool first = e.times.empty();
  const double h = first ? 0.0 : s.t - e.times.back();
  for (std::size_t p = 0; p < e.size(); ++p) {
    const double x = e.positions[p];
    const double lag = interpolate_cubic_periodic(s.lagrangian, x);
    double S = interpolate_cubic_clamped(s.S_tilde, x);
    double action = 0.0;
    if (!first) {
      S -= branch * std::round((S - e.S_records[p].back()) / branch);
      action = e.action_records[p].back() + 0.5 * h * (e.lagrangian_records[p].back() + lag);
    }
    e.x_records[p].push_back(x);
    e.u_records[p].push_back(interpolate_cubic_periodic(s.u, x));
    e.ln_rho_records[p].push_back(interpolate_cubic_periodic(s.ln_rho, x));
    e.div_u_records[p].push_back(interpolate_cubic_periodic(s.div_u, x));
    e.S_records[p].push_back(S);
    e.lagrangian_records[p].push_back(lag);
    e.action_records[p].push_back(action);
    e.quantile_records[p].push_back(s.cdf ? cdf_fraction(*s.cdf, grid, x) : std::nan(""));
  }
  e.times.push_back(s.t);
}

}  // namespace

FlowSnapshot make_flow_snapshot(double t, const WaveFunction& wf, const ExternalPotential& potential,
                                double floor_rel) {
  return make_flow_snapshot(t, wf, compute_fields(wf, floor_rel), potential);
}

FlowSnapshot make_flow_snapshot(double t, const WaveFunction& wf, const MadelungFields& f,
                                const ExternalPotential& potential) {
  const Grid& grid = wf.grid();
  require_same_grid(grid, potential.value.grid(), "make_flow_snapshot");
  const double m = wf.constants.mass;
  FlowSnapshot s{t, f.u, f.div_u, RealField(grid), RealField(grid), RealField(grid), std::nullopt};
  const auto nearest = nearest_valid_indices(f.valid_mask);
  for (std::size_t i = 0; i < grid.n(); ++i) {
    s.ln_rho[i] = std::log(f.rho[nearest[i]]);
    s.S_tilde[i] = f.S[i] / m;
    s.lagrangian[i] = f.kinetic_density[i] - f.Q_tilde[i] - potential.value[i] / m;
  }
  s.cdf.emplace(f.rho);
  return s;
}

ParcelEnsemble seed_parcels(const RealField& rho, int n_parcels, const PhysicalConstants& constants) {
  if (n_parcels < 1) throw InvalidArgument("seed_parcels: need at least one parcel");
  require_finite(rho.values(), "seed_parcels");
  constants.validate();
  const Grid& grid = rho.grid();
  const TrigInterpolant cdf(rho);
  if (!(cdf.mean() > 0.0)) throw InvalidArgument("seed_parcels: density has no mass");

  ParcelEnsemble e;
  e.constants = constants;
  const auto n = static_cast<std::size_t>(n_parcels);
  e.positions.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    double lo = grid.x_min(), hi = grid.x_max();
    for (int it = 0; it < 200 && hi - lo > 1e-15 * grid.length(); ++it) {
      const double mid = 0.5 * (lo + hi);
      (cdf_fraction(cdf, grid, mid) < p ? lo : hi) = mid;
    }
    e.positions[i] = 0.5 * (lo + hi);
  }
  e.unwrapped = e.positions;
  for (auto* r : {&e.x_records, &e.u_records, &e.ln_rho_records, &e.div_u_records, &e.action_records, &e.S_records,
                  &e.lagrangian_records, &e.quantile_records}) {
    r->assign(n, {});
  }
  return e;
}

void record(ParcelEnsemble& ensemble, const FlowSnapshot& s) { append_records(ensemble, s); }

void rk4_step(ParcelEnsemble& e, const FlowSnapshot& s0, const FlowSnapshot& s1, const FlowSnapshot& s2) {
  const Grid& grid = s0.u.grid();
  const double h = s2.t - s0.t;
  if (!(h > 0.0)) throw InvalidArgument("rk4_step: snapshots must advance in time");
  for (std::size_t p = 0; p < e.size(); ++p) {
    const double x = e.unwrapped[p];
    const double k1 = interpolate_cubic_periodic(s0.u, grid.wrap(x));
    const double k2 = interpolate_cubic_periodic(s1.u, grid.wrap(x + 0.5 * h * k1));
    const double k3 = interpolate_cubic_periodic(s1.u, grid.wrap(x + 0.5 * h * k2));
    const double k4 = interpolate_cubic_periodic(s2.u, grid.wrap(x + h * k3));
    e.unwrapped[p] = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    e.positions[p] = grid.wrap(e.unwrapped[p]);
  }
  append_records(e, s2);
}

void advect(ParcelEnsemble& ensemble, const SnapshotProvider& provider, int n_steps) {
  if (n_steps < 0) throw InvalidArgument("advect: n_steps must be non-negative");
  const auto get = [&](std::size_t i) {
    const FlowSnapshot* s = provider(i);
    if (s == nullptr) throw Error("advect: snapshot " + std::to_string(i) + " is missing from the provider");
    return s;
  };
  if (ensemble.times.empty()) append_records(ensemble, *get(0));
  for (int j = 0; j < n_steps; ++j) {
    const auto b = 2 * static_cast<std::size_t>(j);
    const FlowSnapshot* s0 = get(b);
    const FlowSnapshot* s1 = get(b + 1);
    const FlowSnapshot* s2 = get(b + 2);
    rk4_step(ensemble, *s0, *s1, *s2);
  }
}

ParcelTracker::ParcelTracker(ParcelEnsemble seeds) : ensemble_(std::move(seeds)) {}

void ParcelTracker::push(FlowSnapshot snapshot) {
  if (!start_) {
    if (ensemble_.times.empty()) append_records(ensemble_, snapshot);
    start_ = std::move(snapshot);
    return;
  }
  if (!mid_) {
    mid_ = std::move(snapshot);
    return;
  }
  rk4_step(ensemble_, *start_, *mid_, snapshot);
  start_ = std::move(snapshot);
  mid_.reset();
}

std::vector<double> continuity_residual(const ParcelEnsemble& e) {
  if (e.record_count() < 3) throw Error("continuity_residual: need at least 3 records");
  std::vector<double> out(e.size(), 0.0);
  for (std::size_t p = 0; p < e.size(); ++p) {
    const auto& lr = e.ln_rho_records[p];
    for (std::size_t j = 1; j + 1 < e.record_count(); ++j) {
      const double dlr = (lr[j + 1] - lr[j - 1]) / (e.times[j + 1] - e.times[j - 1]);
      out[p] = std::max(out[p], std::fabs(dlr + e.div_u_records[p][j]));
    }
  }
  return out;
}

std::vector<double> action_check(const ParcelEnsemble& e) {
  const double limit = std::numbers::pi * e.constants.hbar / e.constants.mass;
  std::vector<double> out(e.size(), 0.0);
  if (e.record_count() == 0) return out;
  for (std::size_t p = 0; p < e.size(); ++p) {
    const auto& S = e.S_records[p];
    for (std::size_t j = 1; j < S.size(); ++j) {
      if (std::fabs(S[j] - S[j - 1]) > limit) {
        throw Error("action_check: phase branch mismatch for parcel " + std::to_string(p) + " at record " +
                    std::to_string(j));
      }
    }
    out[p] = std::fabs((S.back() - S.front()) - e.action_records[p].back());
  }
  return out;
}

std::vector<double> quantile_drift(const ParcelEnsemble& e) {
  std::vector<double> out(e.size(), 0.0);
  for (std::size_t p = 0; p < e.size(); ++p) {
    const auto& q = e.quantile_records[p];
    for (double v : q) out[p] = std::max(out[p], std::fabs(v - q.front()));
  }
  return out;
}

}  // namespace madelung
