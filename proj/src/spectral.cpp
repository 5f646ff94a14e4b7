#include "madelung/spectral.hpp"

#include <cmath>
#include <numbers>

#include "madelung/kernels.hpp"

namespace madelung {
namespace {

// (ik)^order / n, with the Nyquist entry zeroed for odd orders.
std::vector<Complex> derivative_factor(const Grid& grid, int order) {
  const std::size_t n = grid.n();
  const auto k = grid.wavenumbers();
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<Complex> factor(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (order % 2 == 1 && i == n / 2) {
      factor[i] = 0.0;
      continue;
    }
    Complex ik(0.0, k[i]);
    Complex p(1.0, 0.0);
    for (int o = 0; o < order; ++o) p *= ik;
    factor[i] = p * inv_n;
  }
  return factor;
}

void check_order(int order, int lo, int hi) {
  if (order < lo || order > hi) {
    throw InvalidArgument("derivative order " + std::to_string(order) + " outside [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
  }
}

std::vector<Complex> to_complex(const RealField& f) {
  std::vector<Complex> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i];
  return out;
}

RealField real_part(const Grid& grid, std::span<const Complex> z) {
  RealField out(grid);
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i].real();
  return out;
}

int lagrange_base(double s) { return static_cast<int>(std::floor(s)) - 1; }

// Weights of the four-point Lagrange stencil at nodes 0..3 evaluated at t
// (t measured from node 0).
void lagrange_weights(double t, double w[4]) {
  const double t0 = t, t1 = t - 1.0, t2 = t - 2.0, t3 = t - 3.0;
  w[0] = -t1 * t2 * t3 / 6.0;
  w[1] = t0 * t2 * t3 / 2.0;
  w[2] = -t0 * t1 * t3 / 2.0;
  w[3] = t0 * t1 * t2 / 6.0;
}

}  // namespace

std::vector<ComplexField> spectral_derivatives(const ComplexField& f, int highest) {
  check_order(highest, 1, 3);
  require_finite(f.values(), "spectral_derivatives");
  const Grid& grid = f.grid();
  std::vector<Complex> spectrum(grid.n());
  grid.forward(f.values(), spectrum);
  std::vector<ComplexField> out;
  out.reserve(static_cast<std::size_t>(highest));
  std::vector<Complex> work(grid.n());
  for (int order = 1; order <= highest; ++order) {
    work = spectrum;
    kernels::cmul_inplace(work, derivative_factor(grid, order));
    ComplexField d(grid);
    grid.backward(work, d.values());
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<RealField> spectral_derivatives(const RealField& f, int highest) {
  ComplexField z(f.grid(), to_complex(f));
  auto dz = spectral_derivatives(z, highest);
  std::vector<RealField> out;
  out.reserve(dz.size());
  for (const auto& d : dz) out.push_back(real_part(f.grid(), d.values()));
  return out;
}

ComplexField spectral_derivative(const ComplexField& f, int order) {
  check_order(order, 1, 2);
  const Grid& grid = f.grid();
  require_finite(f.values(), "spectral_derivative");
  std::vector<Complex> work(grid.n());
  grid.forward(f.values(), work);
  kernels::cmul_inplace(work, derivative_factor(grid, order));
  ComplexField out(grid);
  grid.backward(work, out.values());
  return out;
}

RealField spectral_derivative(const RealField& f, int order) {
  check_order(order, 1, 2);
  ComplexField z(f.grid(), to_complex(f));
  const ComplexField d = spectral_derivative(z, order);
  return real_part(f.grid(), d.values());
}

double integrate(const RealField& f) { return kernels::sum(f.values()) * f.grid().dx(); }

double integrate_product(const RealField& a, const RealField& b) {
  require_same_grid(a.grid(), b.grid(), "integrate_product");
  return kernels::dot(a.values(), b.values()) * a.grid().dx();
}

double integrate_masked(const RealField& f, const Mask& mask) {
  if (mask.size() != f.size()) throw InvalidArgument("integrate_masked: mask length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (mask[i]) acc += f[i];
  }
  return acc * f.grid().dx();
}

TrigInterpolant::TrigInterpolant(const RealField& f) : grid_(f.grid()), coeffs_(f.size()) {
  const auto z = to_complex(f);
  grid_.forward(z, coeffs_);
  const double inv_n = 1.0 / static_cast<double>(f.size());
  for (auto& c : coeffs_) c *= inv_n;
  mean_ = coeffs_[0].real();
}

// The Nyquist coefficient is evaluated as a cosine so the interpolant of real
// data stays real off the grid.
double TrigInterpolant::value(double x) const {
  const std::size_t n = coeffs_.size();
  const auto k = grid_.wavenumbers();
  const double s = x - grid_.x_min();
  double acc = coeffs_[0].real();
  for (std::size_t i = 1; i < n; ++i) {
    if (i == n / 2) {
      acc += coeffs_[i].real() * std::cos(k[i] * s);
      continue;
    }
    acc += (coeffs_[i] * std::polar(1.0, k[i] * s)).real();
  }
  return acc;
}

double TrigInterpolant::derivative(double x) const {
  const std::size_t n = coeffs_.size();
  const auto k = grid_.wavenumbers();
  const double s = x - grid_.x_min();
  double acc = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    if (i == n / 2) {
      acc -= coeffs_[i].real() * k[i] * std::sin(k[i] * s);
      continue;
    }
    acc += (Complex(0.0, k[i]) * coeffs_[i] * std::polar(1.0, k[i] * s)).real();
  }
  return acc;
}

double TrigInterpolant::antiderivative(double x) const {
  const std::size_t n = coeffs_.size();
  const auto k = grid_.wavenumbers();
  const double s = x - grid_.x_min();
  double acc = mean_ * s;
  for (std::size_t i = 1; i < n; ++i) {
    if (i == n / 2) {
      acc += coeffs_[i].real() * std::sin(k[i] * s) / k[i];
      continue;
    }
    acc += (coeffs_[i] * (std::polar(1.0, k[i] * s) - 1.0) / Complex(0.0, k[i])).real();
  }
  return acc;
}

double interpolate_cubic_periodic(const RealField& f, double x) {
  const Grid& g = f.grid();
  const auto n = static_cast<std::ptrdiff_t>(g.n());
  const double s = (g.wrap(x) - g.x_min()) / g.dx();
  const int base = lagrange_base(s);
  double w[4];
  lagrange_weights(s - base, w);
  double acc = 0.0;
  for (int j = 0; j < 4; ++j) {
    std::ptrdiff_t idx = (base + j) % n;
    if (idx < 0) idx += n;
    acc += w[j] * f[static_cast<std::size_t>(idx)];
  }
  return acc;
}

double interpolate_cubic_clamped(const RealField& f, double x) {
  const Grid& g = f.grid();
  const int n = static_cast<int>(g.n());
  const double s = (x - g.x_min()) / g.dx();
  int base = lagrange_base(s);
  if (base < 0) base = 0;
  if (base > n - 4) base = n - 4;
  double w[4];
  lagrange_weights(s - base, w);
  double acc = 0.0;
  for (int j = 0; j < 4; ++j) acc += w[j] * f[static_cast<std::size_t>(base + j)];
  return acc;
}

}  // namespace madelung
