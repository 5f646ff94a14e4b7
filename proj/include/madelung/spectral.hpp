#pragma once

#include <vector>

#include "madelung/grid.hpp"

namespace madelung {

/// d^order f / dx^order by multiplication with (ik)^order in wavenumber space.
/// Only orders 1 and 2 are accepted. The Nyquist mode is dropped for odd
/// orders so that real input stays real.
ComplexField spectral_derivative(const ComplexField& f, int order);
RealField spectral_derivative(const RealField& f, int order);

/// Derivatives of orders 1..highest (highest <= 3) from a single forward
/// transform. Result[j] holds the (j+1)-th derivative.
std::vector<ComplexField> spectral_derivatives(const ComplexField& f, int highest);
std::vector<RealField> spectral_derivatives(const RealField& f, int highest);

/// Rectangle rule sum(f) * dx; exact for band-limited periodic integrands.
double integrate(const RealField& f);
/// sum(a*b) * dx
double integrate_product(const RealField& a, const RealField& b);
/// Rectangle rule restricted to mask.
double integrate_masked(const RealField& f, const Mask& mask);

/// Trigonometric interpolant of a real periodic field. Evaluation at
/// off-grid points, derivative and antiderivative are all exact for
/// band-limited data.
class TrigInterpolant {
 public:
  explicit TrigInterpolant(const RealField& f);

  double value(double x) const;
  double derivative(double x) const;
  /// Integral of the field from grid.x_min() to x (x may lie outside the
  /// primary cell; the linear growth of the mean term is kept).
  double antiderivative(double x) const;
  double mean() const { return mean_; }

 private:
  Grid grid_;
  std::vector<Complex> coeffs_;  // forward DFT / n
  double mean_ = 0.0;
};

/// Four-point Lagrange interpolation with periodic wrap-around.
double interpolate_cubic_periodic(const RealField& f, double x);
/// Four-point Lagrange interpolation with the stencil kept inside
/// [0, n-1]; points past the last sample are extrapolated. Suitable for
/// non-periodic fields such as an unwrapped phase.
double interpolate_cubic_clamped(const RealField& f, double x);

}  // namespace madelung
