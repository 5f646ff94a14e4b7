#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "madelung/diagnostics.hpp"
#include "madelung/potential.hpp"
#include "madelung/propagator.hpp"
#include "madelung/spectral.hpp"
#include "madelung/state.hpp"

using namespace madelung;
using std::numbers::pi;

namespace {

const Grid kGrid = make_grid(512, -20.0, 20.0);

ExternalPotential harmonic(const Grid& g, const PhysicalConstants& c, double omega) {
  PotentialSpec h;
  h.kind = PotentialKind::harmonic;
  h.omega = omega;
  return make_external_potential(h, g, c);
}

ExternalPotential free_potential(const Grid& g) { return make_external_potential({}, g, {}); }

// exp(-x^2/4s^2) freely evolved to time t (hbar = m = 1)
WaveFunction spread_gaussian(const Grid& g, double s, double t) {
  WaveFunction wf{ComplexField(g), {}, true};
  const Complex a = 1.0 + Complex(0.0, t / (2.0 * s * s));
  for (std::size_t i = 0; i < g.n(); ++i) {
    const double x = g.x(i);
    wf.psi[i] = std::pow(2.0 * pi * s * s, -0.25) / std::sqrt(a) * std::exp(-x * x / (4.0 * s * s * a));
  }
  return wf;
}

double max_abs_on(const RealField& f, const Mask& m) {
  double out = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (m[i]) out = std::max(out, std::fabs(f[i]));
  }
  return out;
}

Mask density_above(const RealField& rho, double level) {
  Mask m(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) m[i] = rho[i] > level;
  return m;
}

}  // namespace

TEST_CASE("gaussian: Fisher information, Bohm potential and pressure") {
  for (double s : {1.0, 2.0}) {
    CAPTURE(s);
    const WaveFunction wf = gaussian_packet(kGrid, {}, 0.0, s, 0.0);
    const MadelungFields f = compute_fields(wf);
    CHECK(fisher_information(f.rho) == doctest::Approx(1.0 / (s * s)).epsilon(1e-10));

    const Mask core = window_mask(kGrid, -4.0 * s, 4.0 * s);
    for (std::size_t i = 0; i < kGrid.n(); ++i) {
      const double x = kGrid.x(i);
      if (core[i]) CHECK(f.Q_tilde[i] == doctest::Approx(1.0 / (4 * s * s) - x * x / (8 * s * s * s * s)).scale(1.0).epsilon(1e-9));
      CHECK(f.Pi[i] == doctest::Approx(f.rho[i] / (4.0 * s * s)).scale(1.0).epsilon(1e-12));
    }
    const ExpectationReport e = expectations(wf, free_potential(kGrid));
    CHECK(e.Q == doctest::Approx(1.0 / (8 * s * s)).epsilon(1e-10));
    CHECK(e.I == doctest::Approx(e.FI / 8.0).epsilon(1e-10));
    CHECK(e.Pi_integral == doctest::Approx(2.0 * e.I).epsilon(1e-10));
  }
}

TEST_CASE("sigma 1 Bohm potential profile") {
  const MadelungFields f = compute_fields(gaussian_packet(kGrid, {}, 0.0, 1.0, 0.0));
  for (std::size_t i = 0; i < kGrid.n(); ++i) {
    const double x = kGrid.x(i);
    if (std::fabs(x) <= 5.0) CHECK(f.Q_tilde[i] == doctest::Approx(0.25 * (1.0 - 0.5 * x * x)).scale(1.0).epsilon(1e-9));
  }
}

TEST_CASE("uniform density has no quantum potential or pressure") {
  const WaveFunction wf = plane_wave(kGrid, {}, 7);
  const MadelungFields f = compute_fields(wf);
  CHECK(max_abs_on(f.Q_tilde, f.valid_mask) < 1e-10);
  CHECK(max_abs_on(f.Pi, Mask(kGrid.n(), true)) < 1e-12);
  CHECK(std::fabs(fisher_information(f.rho)) < 1e-12);
  // u = hbar k / m everywhere
  const double k = 7.0 * kGrid.dk();
  for (double v : f.u) CHECK(v == doctest::Approx(k).epsilon(1e-12));
}

TEST_CASE("log form and sqrt-density form of Q agree") {
  const WaveFunction wf = gaussian_packet(kGrid, {}, 0.5, 1.2, 1.0);
  const RealField a = bohm_potential_log_form(wf);
  const RealField b = bohm_potential_from_density(polar_decompose(wf).rho, wf.constants);
  const Mask core = window_mask(kGrid, -5.0, 6.0);
  double err = 0.0;
  for (std::size_t i = 0; i < kGrid.n(); ++i) {
    if (core[i]) err = std::max(err, std::fabs(a[i] - b[i]));
  }
  CHECK(err <= 1e-7);
  const RealField c = compute_fields(wf).Q_tilde;
  for (std::size_t i = 0; i < kGrid.n(); ++i) {
    if (core[i]) CHECK(c[i] == doctest::Approx(a[i]).scale(1.0).epsilon(1e-9));
  }
}

TEST_CASE("velocity matches a finite-difference phase gradient") {
  const Grid g = make_grid(2048, -20.0, 20.0);
  const WaveFunction wf = gaussian_packet(g, {}, -1.0, 1.0, 1.5);
  const PolarDecomposition p = polar_decompose(wf);
  const RealField u = velocity(wf);
  const double h = g.dx();
  const Mask core = density_above(p.rho, 1e-6);
  for (std::size_t i = 2; i + 2 < g.n(); ++i) {
    if (!core[i]) continue;
    // fourth-order central difference of S / m
    const double d = (-p.S[i + 2] + 8.0 * p.S[i + 1] - 8.0 * p.S[i - 1] + p.S[i - 2]) / (12.0 * h);
    CHECK(u[i] == doctest::Approx(d).scale(1.0).epsilon(1e-6));
  }
}

TEST_CASE("moving packet flows uniformly") {
  const WaveFunction wf = gaussian_packet(kGrid, {}, 0.0, 1.0, 2.0);
  const MadelungFields f = compute_fields(wf);
  // rounding in u grows like eps / rho toward the floor
  const Mask core = density_above(f.rho, 1e-8);
  for (std::size_t i = 0; i < kGrid.n(); ++i) {
    if (core[i]) CHECK(f.u[i] == doctest::Approx(2.0).epsilon(1e-11));
    if (f.valid_mask[i]) CHECK(f.u[i] == doctest::Approx(2.0).epsilon(1e-9));
  }
}

TEST_CASE("spreading gaussian has a linear velocity field") {
  const double s = 1.0;
  for (double t : {0.5, 1.0, 3.0}) {
    CAPTURE(t);
    const WaveFunction wf = spread_gaussian(kGrid, s, t);
    const MadelungFields f = compute_fields(wf);
    const double slope = t / (t * t + 4.0 * s * s * s * s);
    const Mask core = window_mask(kGrid, -6.0, 6.0);
    for (std::size_t i = 0; i < kGrid.n(); ++i) {
      if (core[i]) CHECK(f.u[i] == doctest::Approx(slope * kGrid.x(i)).scale(1.0).epsilon(1e-9));
      if (core[i]) CHECK(f.div_u[i] == doctest::Approx(slope).epsilon(1e-8));
    }
  }
}

TEST_CASE("harmonic ground state balances Q against U") {
  const PhysicalConstants c;
  const WaveFunction wf = harmonic_ground_state(kGrid, c, 1.0);
  const ExternalPotential pot = harmonic(kGrid, c, 1.0);
  const MadelungFields f = compute_fields(wf);
  const Mask core = window_mask(kGrid, -4.0, 4.0);
  for (std::size_t i = 0; i < kGrid.n(); ++i) {
    if (core[i]) CHECK(f.Q_tilde[i] + pot.value[i] == doctest::Approx(0.5).epsilon(1e-10));
  }
  const ExpectationReport e = expectations(wf, f, pot);
  CHECK(e.E == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::fabs(e.K) < 1e-14);
  CHECK(e.Q == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(e.U == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(std::fabs(e.accel) < 1e-12);
  CHECK(std::fabs(e.vi_mean) < 1e-12);
}

TEST_CASE("per-unit-mass energies scale with the mass") {
  const PhysicalConstants c{1.0, 2.0};
  const WaveFunction wf = harmonic_ground_state(kGrid, c, 1.0);
  const ExpectationReport e = expectations(wf, harmonic(kGrid, c, 1.0));
  // E / m = hbar omega / 2m
  CHECK(e.E == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(e.E_hamiltonian == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("expectation identities") {
  const ExternalPotential pot = harmonic(kGrid, {}, 0.8);
  for (const WaveFunction& wf : {gaussian_packet(kGrid, {}, 1.0, 0.7, -1.5), spread_gaussian(kGrid, 1.3, 0.7)}) {
    const ExpectationReport e = expectations(wf, pot);
    CHECK(e.norm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.E == doctest::Approx(e.E_hamiltonian).epsilon(1e-10));
    CHECK(e.kinetic_hamiltonian == doctest::Approx(e.K + e.Q).epsilon(1e-10));
    CHECK(e.Q == doctest::Approx(e.I).epsilon(1e-10));
    CHECK(e.I == doctest::Approx(e.FI / 8.0).epsilon(1e-9));
    // Ehrenfest: the Bohm force integrates to zero
    const double mean_grad = integrate_product(polar_decompose(wf).rho, pot.gradient);
    CHECK(e.accel == doctest::Approx(-mean_grad).scale(1.0).epsilon(1e-10));
  }
}

TEST_CASE("internal energy density is non-negative") {
  const WaveFunction wf = gaussian_packet(kGrid, {}, 0.0, 0.9, 3.0);
  const MadelungFields f = compute_fields(wf);
  double peak = 0.0;
  for (double v : f.internal_density) peak = std::max(peak, v);
  for (double v : f.internal_density) CHECK(v >= -1e-14 * peak);
}

TEST_CASE("Fisher information keeps exact nodes") {
  // rho = x^2 exp(-x^2) has a quadratic zero on the grid point x = 0
  const Grid g = make_grid(256, -12.0, 12.0);
  RealField rho(g);
  for (std::size_t i = 0; i < g.n(); ++i) rho[i] = g.x(i) * g.x(i) * std::exp(-g.x(i) * g.x(i));
  // integral of 4 (1 - x^2)^2 exp(-x^2) = 4 sqrt(pi) (1 - 1 + 3/4)
  CHECK(fisher_information(rho) == doctest::Approx(3.0 * std::sqrt(pi)).epsilon(1e-10));
}

TEST_CASE("Bernoulli residual for stationary and uniform flows") {
  const double dt = 1e-3;
  {
    // the split step is not exact for the ground state; what is left is O(dt^2)
    const WaveFunction a = harmonic_ground_state(kGrid, {}, 1.0);
    const ExternalPotential pot = harmonic(kGrid, {}, 1.0);
    const auto residual = [&](double h) { return bernoulli_residual(a, step(a, pot.value, h), pot.value, h, 1e-6); };
    const MaskedResidual r = residual(dt);
    CHECK(mask_count(r.mask) > 0);
    CHECK(r.max_abs() <= 2e-6);
    CHECK(r.max_abs() / residual(dt / 2).max_abs() == doctest::Approx(4.0).epsilon(0.05));
  }
  {
    const WaveFunction a = plane_wave(kGrid, {}, 4);
    const WaveFunction b = step(a, RealField(kGrid), dt);
    CHECK(bernoulli_residual(a, b, RealField(kGrid), dt).max_abs() <= 1e-9);
  }
}

TEST_CASE("momentum residual converges at second order") {
  const Grid g = make_grid(128, -16.0, 16.0);
  const ExternalPotential pot = harmonic(g, {}, 1.0);
  const WaveFunction start = gaussian_packet(g, {}, 1.0, 0.8, 0.5);
  const auto residual = [&](double dt) {
    const int n = static_cast<int>(std::lround(0.5 / dt));
    const WaveFunction prev = evolve(start, pot.value, {dt, n - 1, 1000000});
    const WaveFunction mid = step(prev, pot.value, dt);
    const WaveFunction next = step(mid, pot.value, dt);
    return momentum_residual(prev, mid, next, pot, dt, 1e-6).max_abs();
  };
  const double a = residual(2e-2), b = residual(1e-2);
  CAPTURE(a);
  CAPTURE(b);
  CHECK(a / b >= 3.0);
  CHECK(a / b <= 5.0);
}

TEST_CASE("non-spreading residual") {
  {
    const WaveFunction wf = harmonic_ground_state(kGrid, {}, 1.0);
    const ExternalPotential pot = harmonic(kGrid, {}, 1.0);
    CHECK(nonspreading_residual(compute_fields(wf), pot.value, {}, window_mask(kGrid, -4.0, 4.0)) <= 1e-7);
  }
  {
    const Grid g = make_grid(2048, -10.0, 10.0);
    const WaveFunction wf = bouncer_eigenstate(g, {}, 1.0);
    PotentialSpec lin;
    lin.kind = PotentialKind::linear;
    lin.g = 1.0;
    lin.reflect_at_origin = true;
    const RealField U = evaluate_potential(lin, g, {});
    CHECK(nonspreading_residual(compute_fields(wf), U, {}, window_mask(g, 0.5, 5.0)) <= 1e-6);
  }
  {
    const WaveFunction wf = spread_gaussian(kGrid, 1.0, 1.0);
    CHECK(nonspreading_residual(compute_fields(wf), RealField(kGrid), {}, window_mask(kGrid, -4.0, 4.0)) > 1e-2);
  }
  CHECK_THROWS(nonspreading_residual(compute_fields(gaussian_packet(kGrid, {}, 0.0, 1.0, 0.0)), RealField(kGrid), {},
                                     window_mask(kGrid, 0.0, 0.5)));
}
