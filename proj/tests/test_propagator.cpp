#include <doctest.h>

#include <cmath>
#include <numbers>

#include "madelung/potential.hpp"
#include "madelung/propagator.hpp"
#include "madelung/state.hpp"

using namespace madelung;
using std::numbers::pi;

namespace {

const Grid kGrid = make_grid(512, -20.0, 20.0);

RealField harmonic(const Grid& g, double omega) {
  PotentialSpec h;
  h.kind = PotentialKind::harmonic;
  h.omega = omega;
  return evaluate_potential(h, g, {});
}

// Closed-form free evolution of exp(-(x-x0)^2/4s^2 + i k0 x) (hbar = m = 1).
Complex free_gaussian(double x, double t, double x0, double s, double k0) {
  const Complex a = 1.0 + Complex(0.0, t / (2.0 * s * s));
  const double xc = x - x0 - k0 * t;
  const Complex e = -xc * xc / (4.0 * s * s * a) + Complex(0.0, k0 * (x - x0) - 0.5 * k0 * k0 * t);
  return std::pow(2.0 * pi * s * s, -0.25) / std::sqrt(a) * std::exp(e) * std::polar(1.0, k0 * x0);
}

double l2(const ComplexField& a, const ComplexField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s * a.grid().dx());
}

}  // namespace

TEST_CASE("plane wave acquires the kinetic phase") {
  const WaveFunction wf = plane_wave(kGrid, {}, 5);
  const double k = 5.0 * kGrid.dk(), dt = 0.01;
  const WaveFunction next = step(wf, RealField(kGrid), dt);
  const Complex rot = std::polar(1.0, -k * k * dt / 2.0);
  for (std::size_t i = 0; i < kGrid.n(); ++i) {
    CHECK(std::abs(next.psi[i] - rot * wf.psi[i]) <= 1e-14);
    CHECK(std::abs(next.psi[i]) == doctest::Approx(std::abs(wf.psi[i])).epsilon(1e-14));
  }
}

TEST_CASE("stationary state keeps its density and rotates its phase") {
  const double omega = 1.0, dt = 1e-3;
  const WaveFunction wf = harmonic_ground_state(kGrid, {}, omega);
  const RealField U = harmonic(kGrid, omega);
  const WaveFunction next = step(wf, U, dt);
  const std::size_t c = kGrid.n() / 2;
  for (std::size_t i = 0; i < kGrid.n(); ++i) {
    CHECK(std::fabs(std::norm(next.psi[i]) - std::norm(wf.psi[i])) <= 1e-10);
  }
  // global phase -E0 dt / hbar with E0 = hbar omega / 2
  CHECK(std::arg(next.psi[c] / wf.psi[c]) == doctest::Approx(-0.5 * omega * dt).epsilon(1e-8));
}

TEST_CASE("zero step is the identity") {
  const WaveFunction wf = gaussian_packet(kGrid, {}, 0.5, 1.0, 1.0);
  const WaveFunction same = step(wf, harmonic(kGrid, 1.0), 0.0);
  for (std::size_t i = 0; i < kGrid.n(); ++i) CHECK(same.psi[i] == wf.psi[i]);
  CHECK_THROWS_AS(step(wf, RealField(kGrid), -1e-3), InvalidArgument);
}

TEST_CASE("configuration checks") {
  CHECK_NOTHROW(validate({1e-3, 10, 1}, kGrid, {}));
  CHECK_THROWS_AS(validate({0.0, 10, 1}, kGrid, {}), InvalidArgument);
  CHECK_THROWS_AS(validate({1e-3, -1, 1}, kGrid, {}), InvalidArgument);
  CHECK_THROWS_AS(validate({1e-3, 10, 0}, kGrid, {}), InvalidArgument);
  // k_max^2 dt / 2 >= pi
  const double k = kGrid.k_nyquist();
  CHECK_THROWS_AS(validate({2.0 * pi / (k * k) * 1.01, 1, 1}, kGrid, {}), InvalidArgument);
}

TEST_CASE("evolve with no steps") {
  const WaveFunction wf = gaussian_packet(kGrid, {}, 0.0, 1.0, 0.0);
  std::vector<double> times;
  const WaveFunction out = evolve(wf, RealField(kGrid), {1e-3, 0, 1}, {[&](double t, const WaveFunction&) {
                                    times.push_back(t);
                                  }});
  CHECK(times == std::vector<double>{0.0});
  for (std::size_t i = 0; i < kGrid.n(); ++i) CHECK(out.psi[i] == wf.psi[i]);
}

TEST_CASE("observer cadence and abort") {
  const WaveFunction wf = gaussian_packet(kGrid, {}, 0.0, 1.0, 0.0);
  std::vector<double> times;
  evolve(wf, RealField(kGrid), {1e-3, 10, 4}, {[&](double t, const WaveFunction&) { times.push_back(t); }});
  REQUIRE(times.size() == 3);
  CHECK(times[1] == 4e-3);
  CHECK(times[2] == 8e-3);

  int calls = 0;
  CHECK_THROWS_AS(evolve(wf, RealField(kGrid), {1e-3, 10, 1}, {[&](double t, const WaveFunction&) {
                           ++calls;
                           if (t > 2e-3) throw std::runtime_error("stop");
                         }}),
                  std::runtime_error);
  CHECK(calls == 4);
}

TEST_CASE("free gaussian matches the closed form and spreads") {
  const double s0 = 1.0;
  const WaveFunction wf = gaussian_packet(kGrid, {}, 0.0, s0, 0.0);
  std::vector<std::pair<double, double>> widths;
  const WaveFunction out = evolve(wf, RealField(kGrid), {1e-3, 2000, 500}, {[&](double t, const WaveFunction& s) {
                                    widths.emplace_back(t, position_std(polar_decompose(s).rho));
                                  }});
  for (auto [t, w] : widths) {
    CAPTURE(t);
    CHECK(std::fabs(w / (s0 * std::sqrt(1.0 + std::pow(t / (2.0 * s0 * s0), 2))) - 1.0) <= 1e-4);
  }
  CHECK(widths.back().second == doctest::Approx(std::sqrt(2.0)).epsilon(1e-4));
  ComplexField exact(kGrid);
  for (std::size_t i = 0; i < kGrid.n(); ++i) exact[i] = free_gaussian(kGrid.x(i), 2.0, 0.0, s0, 0.0);
  CHECK(l2(out.psi, exact) < 1e-10);
}

TEST_CASE("moving gaussian drifts at constant velocity") {
  const WaveFunction wf = gaussian_packet(kGrid, {}, -2.0, 1.0, 2.0);
  const WaveFunction out = evolve(wf, RealField(kGrid), {1e-3, 1000, 1000});
  const double moved = mean_position(polar_decompose(out).rho) - mean_position(polar_decompose(wf).rho);
  CHECK(std::fabs(moved - 2.0) <= 1e-6);
  ComplexField exact(kGrid);
  for (std::size_t i = 0; i < kGrid.n(); ++i) exact[i] = free_gaussian(kGrid.x(i), 1.0, -2.0, 1.0, 2.0);
  CHECK(l2(out.psi, exact) < 1e-10);
}

TEST_CASE("norm is preserved") {
  const WaveFunction wf = gaussian_packet(kGrid, {}, 1.0, 1.0, -1.0);
  const WaveFunction out = evolve(wf, harmonic(kGrid, 1.0), {1e-3, 1000, 1000});
  CHECK(std::fabs(norm(out) - 1.0) <= 1e-10);
}

TEST_CASE("second-order convergence") {
  // displaced packet in a harmonic well: the split is not exact
  const Grid g = make_grid(128, -20.0, 20.0);
  const WaveFunction wf = gaussian_packet(g, {}, 1.5, 0.8, 0.0);
  const RealField U = harmonic(g, 1.0);
  const double T = 1.0;
  const auto run = [&](double dt) { return evolve(wf, U, {dt, static_cast<int>(std::lround(T / dt)), 1000000}).psi; };
  const auto err = [&](double dt) { return l2(run(dt), run(dt / 4)); };
  const double ratio = err(2e-2) / err(1e-2);
  CHECK(ratio >= 3.5);
  CHECK(ratio <= 4.5);
}

TEST_CASE("propagator object matches the free function") {
  const WaveFunction wf = gaussian_packet(kGrid, {}, 0.0, 1.0, 1.0);
  const RealField U = harmonic(kGrid, 0.7);
  SplitStepPropagator p(kGrid, wf.constants, U, 2e-3);
  ComplexField psi = wf.psi;
  p.step(psi);
  const WaveFunction ref = step(wf, U, 2e-3);
  for (std::size_t i = 0; i < kGrid.n(); ++i) CHECK(psi[i] == ref.psi[i]);
}
