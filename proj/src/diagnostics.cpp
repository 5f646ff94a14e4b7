#include "madelung/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "madelung/kernels.hpp"
#include "madelung/spectral.hpp"

namespace madelung {
namespace {

Mask density_mask(const RealField& rho, double floor_rel) {
  if (!(floor_rel >= 0.0)) throw InvalidArgument("density floor must be non-negative");
  const double rho_max = *std::max_element(rho.begin(), rho.end());
  if (!(rho_max > 0.0)) throw Error("density vanished (empty valid mask)");
  Mask m(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) m[i] = rho[i] >= floor_rel * rho_max;
  return m;
}

// Replaces masked-out entries by the nearest valid value.
void extend_from_mask(RealField& f, const std::vector<std::size_t>& nearest, const Mask& mask) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!mask[i]) f[i] = f[nearest[i]];
  }
}

void require_floor(double floor_rel) {
  if (!(floor_rel >= 0.0)) throw InvalidArgument("density floor must be non-negative");
}

}  // namespace

MadelungFields compute_fields(const WaveFunction& wf, double floor_rel) {
  require_floor(floor_rel);
  const Grid& grid = wf.grid();
  const std::size_t n = grid.n();
  const double hbar = wf.constants.hbar, m = wf.constants.mass;
  const double c_h = hbar / m;
  const double c_q = hbar * hbar / (2.0 * m * m);

  PolarDecomposition polar = polar_decompose(wf, floor_rel);
  const auto d = spectral_derivatives(wf.psi, 2);

  MadelungFields f{polar.rho,       polar.S,         polar.amplitude, RealField(grid), RealField(grid),
                   RealField(grid), RealField(grid), RealField(grid), RealField(grid), RealField(grid),
                   RealField(grid), RealField(grid), polar.valid_mask};

  // With psi = R exp(i theta): j = Im(psi* psi') = rho theta', g = Re(psi* psi')
  // = R R', kappa = j^2 / rho = rho theta'^2 <= |psi'|^2, and
  // R R'' = Re(psi* psi'') + kappa, R'^2 = |psi'|^2 - kappa.
  RealField rr2(grid);
  for (std::size_t i = 0; i < n; ++i) {
    const double rho = polar.rho[i];
    const Complex p = wf.psi[i];
    const Complex a1 = std::conj(p) * d[0][i];
    const Complex a2 = std::conj(p) * d[1][i];
    const double kappa = rho > 0.0 ? a1.imag() * a1.imag() / rho : 0.0;
    rr2[i] = a2.real() + kappa;
    f.Pi[i] = -c_q * (rr2[i] - (std::norm(d[0][i]) - kappa));
    if (!f.valid_mask[i]) continue;
    f.u[i] = c_h * a1.imag() / rho;
    f.div_u[i] = c_h * (a2.imag() / rho - 2.0 * a1.imag() * a1.real() / (rho * rho));
    f.Q_tilde[i] = -c_q * rr2[i] / rho;
    f.v_i[i] = -c_h * a1.real() / rho;
  }
  // rho dQ/dx = dPi/dx: the Bohm force is the gradient of the pseudo-pressure
  const RealField dPi = spectral_derivative(f.Pi, 1);
  for (std::size_t i = 0; i < n; ++i) {
    f.bohm_force_density[i] = -dPi[i];
    if (f.valid_mask[i]) f.grad_Q_tilde[i] = dPi[i] / polar.rho[i];
  }
  const auto nearest = nearest_valid_indices(f.valid_mask);
  for (RealField* g : {&f.u, &f.div_u, &f.Q_tilde, &f.grad_Q_tilde, &f.v_i}) extend_from_mask(*g, nearest, f.valid_mask);
  for (std::size_t i = 0; i < n; ++i) {
    f.internal_density[i] = 0.5 * f.v_i[i] * f.v_i[i];
    f.kinetic_density[i] = 0.5 * f.u[i] * f.u[i];
  }
  return f;
}

RealField velocity(const WaveFunction& wf, double floor_rel) {
  require_floor(floor_rel);
  const Grid& grid = wf.grid();
  RealField rho(grid);
  kernels::abs2(wf.psi.values(), rho.values());
  const Mask mask = density_mask(rho, floor_rel);
  const ComplexField d1 = spectral_derivative(wf.psi, 1);
  const double c_h = wf.constants.hbar / wf.constants.mass;
  RealField u(grid);
  for (std::size_t i = 0; i < grid.n(); ++i) {
    if (mask[i]) u[i] = c_h * (std::conj(wf.psi[i]) * d1[i]).imag() / rho[i];
  }
  extend_from_mask(u, nearest_valid_indices(mask), mask);
  return u;
}

RealField bohm_potential(const RealField& amplitude, const PhysicalConstants& c, double floor_rel) {
  c.validate();
  require_floor(floor_rel);
  const Grid& grid = amplitude.grid();
  require_finite(amplitude.values(), "bohm_potential");
  RealField rho(grid);
  for (std::size_t i = 0; i < grid.n(); ++i) rho[i] = amplitude[i] * amplitude[i];
  const Mask mask = density_mask(rho, floor_rel);
  const RealField R2 = spectral_derivative(amplitude, 2);
  const double c_q = c.hbar * c.hbar / (2.0 * c.mass * c.mass);
  RealField q(grid);
  for (std::size_t i = 0; i < grid.n(); ++i) {
    if (mask[i]) q[i] = -c_q * R2[i] / amplitude[i];
  }
  extend_from_mask(q, nearest_valid_indices(mask), mask);
  return q;
}

RealField bohm_potential_from_density(const RealField& rho, const PhysicalConstants& c, double floor_rel) {
  RealField amp(rho.grid());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (!(rho[i] >= 0.0)) throw InvalidArgument("bohm_potential: density must be non-negative");
    amp[i] = std::sqrt(rho[i]);
  }
  return bohm_potential(amp, c, floor_rel);
}

RealField bohm_potential_log_form(const WaveFunction& wf, double floor_rel) {
  require_floor(floor_rel);
  const Grid& grid = wf.grid();
  RealField rho(grid);
  kernels::abs2(wf.psi.values(), rho.values());
  const Mask mask = density_mask(rho, floor_rel);
  const auto d = spectral_derivatives(wf.psi, 2);
  const double hm = wf.constants.hbar / (2.0 * wf.constants.mass);
  RealField q(grid);
  for (std::size_t i = 0; i < grid.n(); ++i) {
    if (!mask[i]) continue;
    const Complex p = wf.psi[i];
    const double l1 = 2.0 * (std::conj(p) * d[0][i]).real() / rho[i];
    const double l2 = 2.0 * ((std::conj(p) * d[1][i]).real() + std::norm(d[0][i])) / rho[i] - l1 * l1;
    q[i] = -hm * hm * (l2 + 0.5 * l1 * l1);
  }
  extend_from_mask(q, nearest_valid_indices(mask), mask);
  return q;
}

RealField pseudo_pressure(const RealField& amplitude, const PhysicalConstants& c) {
  c.validate();
  require_finite(amplitude.values(), "pseudo_pressure");
  const auto d = spectral_derivatives(amplitude, 2);
  const double a = (c.hbar / (2.0 * c.mass)) * (c.hbar / (2.0 * c.mass));
  RealField pi(amplitude.grid());
  for (std::size_t i = 0; i < pi.size(); ++i) pi[i] = -2.0 * a * (amplitude[i] * d[1][i] - d[0][i] * d[0][i]);
  return pi;
}

double fisher_information(const RealField& rho, double floor_rel) {
  require_finite(rho.values(), "fisher_information");
  const Mask mask = density_mask(rho, floor_rel);
  const auto d = spectral_derivatives(rho, 2);
  double s = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    // below the floor use the limit of rho'^2/rho at a quadratic zero, 2 rho''
    s += mask[i] ? d[0][i] * d[0][i] / rho[i] : 2.0 * std::max(d[1][i], 0.0);
  }
  return s * rho.grid().dx();
}

ExpectationReport expectations(const WaveFunction& wf, const ExternalPotential& potential, double floor_rel) {
  return expectations(wf, compute_fields(wf, floor_rel), potential, floor_rel);
}

ExpectationReport expectations(const WaveFunction& wf, const MadelungFields& f, const ExternalPotential& potential,
                               double floor_rel) {
  const Grid& grid = wf.grid();
  require_same_grid(grid, potential.value.grid(), "expectations");
  require_same_grid(grid, f.rho.grid(), "expectations");
  const std::size_t n = grid.n();
  const double dx = grid.dx();
  const double m = wf.constants.mass;
  const double c_h = wf.constants.hbar / m;
  const double c_q = wf.constants.hbar * wf.constants.hbar / (2.0 * m * m);

  // Integrands in the division-free forms rho*K = c_q kappa, rho*Q = -c_q R R'',
  // rho*I = c_q R'^2, rho*v_i = -c_h R R', all finite at nodes.
  const auto d = spectral_derivatives(wf.psi, 2);
  std::vector<double> k(n), q(n), u(n), in(n), force(n), vi(n), kin(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double rho = f.rho[i];
    const Complex a1 = std::conj(wf.psi[i]) * d[0][i];
    const Complex a2 = std::conj(wf.psi[i]) * d[1][i];
    const double kappa = rho > 0.0 ? a1.imag() * a1.imag() / rho : 0.0;
    k[i] = c_q * kappa;
    q[i] = -c_q * (a2.real() + kappa);
    in[i] = c_q * (std::norm(d[0][i]) - kappa);
    vi[i] = -c_h * a1.real();
    u[i] = rho * potential.value[i] / m;
    force[i] = f.bohm_force_density[i] - rho * potential.gradient[i] / m;
    kin[i] = -c_q * a2.real();
  }

  ExpectationReport r;
  r.norm = kernels::sum(f.rho.values()) * dx;
  r.K = kernels::sum(k) * dx;
  r.Q = kernels::sum(q) * dx;
  r.U = kernels::sum(u) * dx;
  r.I = kernels::sum(in) * dx;
  r.E = r.K + r.Q + r.U;
  r.FI = fisher_information(f.rho, floor_rel);
  r.accel = kernels::sum(force) * dx;
  r.vi_mean = kernels::sum(vi) * dx;
  r.Pi_integral = kernels::sum(f.Pi.values()) * dx;
  r.kinetic_hamiltonian = kernels::sum(kin) * dx;
  r.E_hamiltonian = r.kinetic_hamiltonian + r.U;

  for (double v : {r.norm, r.K, r.Q, r.U, r.I, r.FI, r.accel, r.vi_mean, r.E_hamiltonian}) {
    if (!std::isfinite(v)) throw Error("expectations: non-finite result");
  }
  return r;
}

double MaskedResidual::max_abs() const {
  double mx = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (mask[i]) mx = std::max(mx, std::fabs(values[i]));
  }
  return mx;
}

MaskedResidual bernoulli_residual(const WaveFunction& prev, const WaveFunction& next, const RealField& potential,
                                  double dt, double floor_rel) {
  return bernoulli_residual(prev, compute_fields(prev, floor_rel), next, compute_fields(next, floor_rel), potential,
                            dt);
}

MaskedResidual bernoulli_residual(const WaveFunction& prev, const MadelungFields& a, const WaveFunction& next,
                                  const MadelungFields& b, const RealField& potential, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("bernoulli_residual: dt must be positive");
  require_same_grid(prev.grid(), next.grid(), "bernoulli_residual");
  require_same_grid(prev.grid(), potential.grid(), "bernoulli_residual");
  const double m = prev.constants.mass;
  const double hbar = prev.constants.hbar;
  MaskedResidual out{RealField(prev.grid()), mask_and(a.valid_mask, b.valid_mask)};
  if (mask_count(out.mask) == 0) throw Error("bernoulli_residual: snapshots share no valid points");
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    if (!out.mask[i]) continue;
    const double ds = hbar * std::arg(next.psi[i] * std::conj(prev.psi[i])) / m;
    const double h_prev = a.kinetic_density[i] + a.Q_tilde[i];
    const double h_next = b.kinetic_density[i] + b.Q_tilde[i];
    out.values[i] = ds / dt + 0.5 * (h_prev + h_next) + potential[i] / m;
  }
  return out;
}

MaskedResidual momentum_residual(const WaveFunction& prev, const WaveFunction& mid, const WaveFunction& next,
                                 const ExternalPotential& potential, double dt, double floor_rel) {
  if (!(dt > 0.0)) throw InvalidArgument("momentum_residual: dt must be positive");
  require_same_grid(prev.grid(), mid.grid(), "momentum_residual");
  require_same_grid(prev.grid(), next.grid(), "momentum_residual");
  const RealField u_prev = velocity(prev, floor_rel);
  const RealField u_next = velocity(next, floor_rel);
  const MadelungFields f = compute_fields(mid, floor_rel);
  RealField rho_prev(prev.grid()), rho_next(next.grid());
  kernels::abs2(prev.psi.values(), rho_prev.values());
  kernels::abs2(next.psi.values(), rho_next.values());
  const Mask mask = mask_and(f.valid_mask, mask_and(density_mask(rho_prev, floor_rel), density_mask(rho_next, floor_rel)));
  const double m = mid.constants.mass;
  MaskedResidual out{RealField(mid.grid()), mask};
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    const double dudt = (u_next[i] - u_prev[i]) / (2.0 * dt);
    out.values[i] = dudt + f.u[i] * f.div_u[i] + f.grad_Q_tilde[i] + potential.gradient[i] / m;
  }
  return out;
}

double nonspreading_residual(const MadelungFields& fields, const RealField& potential, const PhysicalConstants& c,
                             const std::optional<Mask>& region) {
  require_same_grid(fields.rho.grid(), potential.grid(), "nonspreading_residual");
  const Grid& grid = potential.grid();
  const Mask mask = region ? mask_and(fields.valid_mask, *region) : fields.valid_mask;
  const std::size_t count = mask_count(mask);
  if (count < 16) throw Error("nonspreading_residual: fewer than 16 valid points");

  // centred abscissa keeps the 2x2 normal equations well conditioned
  double xm = 0.0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) xm += grid.x(i);
  }
  xm /= static_cast<double>(count);
  double sy = 0.0, sxx = 0.0, sxy = 0.0;
  double q_lo = HUGE_VAL, q_hi = -HUGE_VAL, u_lo = HUGE_VAL, u_hi = -HUGE_VAL, e_max = 0.0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    const double x = grid.x(i) - xm;
    const double ut = potential[i] / c.mass;
    const double y = fields.Q_tilde[i] + ut;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    q_lo = std::min(q_lo, fields.Q_tilde[i]);
    q_hi = std::max(q_hi, fields.Q_tilde[i]);
    u_lo = std::min(u_lo, ut);
    u_hi = std::max(u_hi, ut);
    e_max = std::max(e_max, std::fabs(y + fields.kinetic_density[i]));
  }
  const double b = sy / static_cast<double>(count);
  const double slope = sxy / sxx;
  double worst = 0.0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    const double x = grid.x(i) - xm;
    const double y = fields.Q_tilde[i] + potential[i] / c.mass;
    worst = std::max(worst, std::fabs(y - (b + slope * x)));
  }
  const double scale = std::max({q_hi - q_lo, u_hi - u_lo, e_max});
  return scale > 0.0 ? worst / scale : worst;
}

}  // namespace madelung
