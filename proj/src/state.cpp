#include "madelung/state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "madelung/airy.hpp"
#include "madelung/kernels.hpp"
#include "madelung/spectral.hpp"

namespace madelung {
namespace {

constexpr double kTailMassLimit = 1e-12;

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * std::numbers::pi);
  return a;
}

// Analytic probability mass of N(x0, sigma^2) outside [x_min, x_max].
double gaussian_tail_mass(const Grid& grid, double x0, double sigma) {
  const double r = (grid.x_max() - x0) / (std::numbers::sqrt2 * sigma);
  const double l = (x0 - grid.x_min()) / (std::numbers::sqrt2 * sigma);
  return 0.5 * std::erfc(r) + 0.5 * std::erfc(l);
}

void require_gaussian_fits(const Grid& grid, double x0, double sigma, double k0, const char* what) {
  const double tail = gaussian_tail_mass(grid, x0, sigma);
  if (tail > kTailMassLimit) {
    throw InvalidArgument(std::string(what) + ": tail mass " + std::to_string(tail) + " outside the domain exceeds 1e-12");
  }
  // the density std sigma corresponds to a wavenumber spread 1/(2 sigma)
  const double k_extent = std::fabs(k0) + 10.0 / (2.0 * sigma);
  if (k_extent > grid.k_nyquist()) {
    throw InvalidArgument(std::string(what) + ": packet is not resolved by the grid");
  }
}

// C-infinity step: 0 for s <= 0, 1 for s >= 1.
double smooth_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / s);
  const double b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

// Asymptotic location of the k-th zero of Ai (k >= 1); good to ~1e-3 for k = 1.
double airy_zero_estimate(int k) {
  const double t = 3.0 * std::numbers::pi * (4.0 * k - 1.0) / 8.0;
  return -std::pow(t, 2.0 / 3.0);
}

}  // namespace

void PhysicalConstants::validate() const {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw InvalidArgument("hbar must be positive");
  if (!(mass > 0.0) || !std::isfinite(mass)) throw InvalidArgument("mass must be positive");
}

double norm(const WaveFunction& wf) {
  RealField rho(wf.grid());
  kernels::abs2(wf.psi.values(), rho.values());
  return integrate(rho);
}

void normalize(WaveFunction& wf) {
  const double nrm = norm(wf);
  if (!(nrm > 0.0) || !std::isfinite(nrm)) throw Error("normalize: state has zero or non-finite norm");
  kernels::cscale_inplace(wf.psi.values(), 1.0 / std::sqrt(nrm));
}

PolarDecomposition polar_decompose(const WaveFunction& wf, double density_floor_rel) {
  const Grid& grid = wf.grid();
  const std::size_t n = grid.n();
  require_finite(wf.psi.values(), "polar_decompose");
  if (!(density_floor_rel >= 0.0)) throw InvalidArgument("density floor must be non-negative");

  PolarDecomposition out{RealField(grid), RealField(grid), RealField(grid), Mask(n, false), 0};
  kernels::abs2(wf.psi.values(), out.rho.values());
  const auto max_it = std::max_element(out.rho.begin(), out.rho.end());
  const double rho_max = *max_it;
  if (!(rho_max > 0.0)) throw Error("polar_decompose: state vanished (empty valid mask)");
  out.anchor = static_cast<std::size_t>(max_it - out.rho.begin());
  const double floor = density_floor_rel * rho_max;
  for (std::size_t i = 0; i < n; ++i) out.valid_mask[i] = out.rho[i] >= floor;

  std::vector<double> arg(n), mag(n);
  for (std::size_t i = 0; i < n; ++i) {
    arg[i] = std::arg(wf.psi[i]);
    mag[i] = std::abs(wf.psi[i]);
  }

  // Phase: accumulate wrapped increments between consecutive valid points,
  // outward from the anchor. Sign: flip across an isolated node, recognised
  // by a local amplitude minimum with a phase jump of more than pi/2 between
  // valid points at most two cells apart.
  std::vector<double> phase(n, 0.0);
  std::vector<int> sign(n, 1);
  const auto is_node = [&](std::size_t lo, std::size_t hi) {
    if (hi - lo > 2) return false;
    if (std::fabs(wrap_angle(arg[hi] - arg[lo])) <= std::numbers::pi / 2.0) return false;
    const bool left_min = lo == 0 || mag[lo] <= mag[lo - 1];
    const bool right_min = hi + 1 >= n || mag[hi] <= mag[hi + 1];
    return left_min && right_min;
  };

  const std::size_t a = out.anchor;
  phase[a] = arg[a];
  {
    std::size_t prev = a;
    for (std::size_t i = a + 1; i < n; ++i) {
      if (!out.valid_mask[i]) continue;
      phase[i] = phase[prev] + wrap_angle(arg[i] - arg[prev]);
      sign[i] = is_node(prev, i) ? -sign[prev] : sign[prev];
      prev = i;
    }
  }
  {
    std::size_t prev = a;
    for (std::size_t i = a; i-- > 0;) {
      if (!out.valid_mask[i]) continue;
      phase[i] = phase[prev] + wrap_angle(arg[i] - arg[prev]);
      sign[i] = is_node(i, prev) ? -sign[prev] : sign[prev];
      prev = i;
    }
  }

  // Masked points take the phase and sign of the nearest valid point.
  const auto nearest = nearest_valid_indices(out.valid_mask);

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t src = nearest[i];
    const double ph = out.valid_mask[i] ? phase[i] : phase[src];
    const int sg = out.valid_mask[i] ? sign[i] : sign[src];
    out.S[i] = wf.constants.hbar * ph;
    out.amplitude[i] = sg * mag[i];
  }
  return out;
}

double mean_position(const RealField& rho) {
  const Grid& g = rho.grid();
  RealField x(g, std::vector<double>(g.points().begin(), g.points().end()));
  return integrate_product(x, rho) / integrate(rho);
}

double position_std(const RealField& rho) {
  const Grid& g = rho.grid();
  const double mu = mean_position(rho);
  RealField d2(g);
  for (std::size_t i = 0; i < g.n(); ++i) d2[i] = (g.x(i) - mu) * (g.x(i) - mu);
  return std::sqrt(integrate_product(d2, rho) / integrate(rho));
}

WaveFunction gaussian_packet(const Grid& grid, const PhysicalConstants& c, double x0, double sigma0, double k0) {
  c.validate();
  if (!(sigma0 > 0.0)) throw InvalidArgument("gaussian_packet: sigma0 must be positive");
  require_gaussian_fits(grid, x0, sigma0, k0, "gaussian_packet");
  ComplexField psi(grid);
  for (std::size_t i = 0; i < grid.n(); ++i) {
    const double d = grid.x(i) - x0;
    psi[i] = std::exp(-d * d / (4.0 * sigma0 * sigma0)) * std::polar(1.0, k0 * grid.x(i));
  }
  WaveFunction wf{std::move(psi), c, true};
  normalize(wf);
  return wf;
}

WaveFunction plane_wave(const Grid& grid, const PhysicalConstants& c, int mode_index) {
  c.validate();
  const auto half = static_cast<long>(grid.n() / 2);
  if (std::labs(mode_index) >= half) throw InvalidArgument("plane_wave: mode index beyond the Nyquist mode");
  const double k = mode_index * grid.dk();
  const double amp = 1.0 / std::sqrt(grid.length());
  ComplexField psi(grid);
  for (std::size_t i = 0; i < grid.n(); ++i) {
    psi[i] = std::polar(amp, k * (grid.x(i) - grid.x_min()));
  }
  return WaveFunction{std::move(psi), c, true};
}

WaveFunction harmonic_ground_state(const Grid& grid, const PhysicalConstants& c, double omega) {
  c.validate();
  if (!(omega > 0.0)) throw InvalidArgument("harmonic_ground_state: omega must be positive");
  const double a2 = c.hbar / (c.mass * omega);  // oscillator length squared
  const double sigma = std::sqrt(a2 / 2.0);     // density std
  require_gaussian_fits(grid, 0.0, sigma, 0.0, "harmonic_ground_state");
  ComplexField psi(grid);
  for (std::size_t i = 0; i < grid.n(); ++i) {
    const double x = grid.x(i);
    psi[i] = std::exp(-x * x / (2.0 * a2));
  }
  WaveFunction wf{std::move(psi), c, true};
  normalize(wf);
  return wf;
}

std::pair<double, double> central_window(const Grid& grid) {
  const double q = grid.length() / 4.0;
  return {grid.x_min() + q, grid.x_max() - q};
}

WaveFunction airy_packet(const Grid& grid, const PhysicalConstants& c, double scale_B, double t,
                         const AiryWindow& window) {
  c.validate();
  if (!(scale_B > 0.0)) throw InvalidArgument("airy_packet: scale_B must be positive");
  if (!(window.taper_start >= 0.0 && window.taper_end > window.taper_start && window.taper_end < 1.0)) {
    throw InvalidArgument("airy_packet: bad taper window");
  }
  const double hbar = c.hbar, m = c.mass;
  const double b3 = scale_B * scale_B * scale_B;
  const double shift = b3 * t * t / (4.0 * m * m);
  const double x_scale = std::pow(hbar, 2.0 / 3.0) / scale_B;  // length per unit Airy argument
  const double L = grid.length();
  const double taper_lo = grid.x_min() + window.taper_start * L;
  const double taper_hi = grid.x_min() + window.taper_end * L;

  const auto [win_lo, win_hi] = central_window(grid);
  int zeros_inside = 0;
  for (int k = 1; k < 10000; ++k) {
    const double xk = shift + airy_zero_estimate(k) * x_scale;
    if (xk < win_lo) break;
    if (xk <= win_hi) ++zeros_inside;
  }
  if (zeros_inside < 3) {
    throw InvalidArgument("airy_packet: fewer than 3 Airy oscillations inside the interior window");
  }

  ComplexField psi(grid);
  for (std::size_t i = 0; i < grid.n(); ++i) {
    const double x = grid.x(i);
    const double w = smooth_step((x - taper_lo) / (taper_hi - taper_lo));
    if (w == 0.0) continue;
    const double s = (x - shift) / x_scale;
    if (s < -30.0) throw InvalidArgument("airy_packet: taper support reaches beyond the Airy evaluation range");
    const double ai = s > 30.0 ? 0.0 : airy_ai(s);
    const double phase = b3 * t / (2.0 * m * hbar) * (x - b3 * t * t / (6.0 * m * m));
    psi[i] = w * ai * std::polar(1.0, phase);
  }
  WaveFunction wf{std::move(psi), c, false};
  normalize(wf);

  // at least 99% of the windowed mass away from the outer 5% margins
  RealField rho(grid);
  kernels::abs2(wf.psi.values(), rho.values());
  Mask margin(grid.n());
  for (std::size_t i = 0; i < grid.n(); ++i) {
    const double x = grid.x(i);
    margin[i] = x > grid.x_min() + 0.05 * L && x < grid.x_max() - 0.05 * L;
  }
  if (integrate_masked(rho, margin) < 0.99) {
    throw InvalidArgument("airy_packet: domain too narrow, packet mass reaches the edges");
  }
  return wf;
}

double bouncer_length(const PhysicalConstants& c, double g) {
  return std::cbrt(c.hbar * c.hbar / (2.0 * c.mass * c.mass * g));
}

double bouncer_energy(const PhysicalConstants& c, double g) {
  return -kAiryFirstZero * std::cbrt(c.mass * g * g * c.hbar * c.hbar / 2.0);
}

WaveFunction bouncer_eigenstate(const Grid& grid, const PhysicalConstants& c, double g) {
  c.validate();
  if (!(g > 0.0)) throw InvalidArgument("bouncer_eigenstate: g must be positive");
  if (!(grid.x_min() < 0.0 && grid.x_max() > 0.0)) {
    throw InvalidArgument("bouncer_eigenstate: domain must contain the wall at x = 0");
  }
  const double ell = bouncer_length(c, g);
  if (ell / grid.dx() < 8.0) throw InvalidArgument("bouncer_eigenstate: length scale resolved by fewer than 8 points");
  // density at the domain edges must be negligible
  const double edge_arg = std::min(-grid.x_min(), grid.x_max()) / ell + kAiryFirstZero;
  if (edge_arg < 8.0) throw InvalidArgument("bouncer_eigenstate: domain too short for the decaying tail");

  ComplexField psi(grid);
  for (std::size_t i = 0; i < grid.n(); ++i) {
    const double x = grid.x(i);
    if (x == 0.0) continue;
    const double s = std::fabs(x) / ell + kAiryFirstZero;
    const double ai = s > 30.0 ? 0.0 : airy_ai(s);
    psi[i] = (x > 0.0 ? ai : -ai);
  }
  WaveFunction wf{std::move(psi), c, true};
  normalize(wf);
  return wf;
}

}  // namespace madelung
