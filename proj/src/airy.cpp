#include "madelung/airy.hpp"

#include <cmath>
#include <numbers>

#include "madelung/grid.hpp"

namespace madelung {
namespace {

// Maclaurin series switch points. The negative side is carried further than
// the positive one because the oscillatory asymptotic expansion only reaches
// 1e-10 once zeta = (2/3)|x|^{3/2} is large enough; long double keeps the
// cancellation in the series under control out to |x| = 8.
constexpr double kSeriesLow = -8.0;
constexpr double kSeriesHigh = 5.0;

double series(double xd) {
  using real = long double;
  const real ai0 = 0.355028053887817239260063186004183177L;   // Ai(0)
  const real dai0 = 0.258819403792806798405183560189203963L;  // -Ai'(0)
  const real x = xd;
  const real x3 = x * x * x;
  real f_term = 1.0L, g_term = x;
  real f = f_term, g = g_term;
  for (int k = 1; k < 200; ++k) {
    const real k3 = 3.0L * k;
    f_term *= x3 / ((k3 - 1.0L) * k3);
    g_term *= x3 / (k3 * (k3 + 1.0L));
    f += f_term;
    g += g_term;
    if (std::fabs(f_term) + std::fabs(g_term) < 1e-24L * (std::fabs(f) + std::fabs(g))) break;
  }
  return static_cast<double>(ai0 * f - dai0 * g);
}

// u_k of the standard asymptotic expansion, u_k = u_{k-1} (6k-5)(6k-3)(6k-1) / ((2k-1) 216 k).
double next_u(double u_prev, int k) {
  return u_prev * (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k);
}

double asymptotic_positive(double x) {
  const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
  double u = 1.0, term = 1.0, acc = 1.0;
  for (int k = 1; k < 60; ++k) {
    u = next_u(u, k);
    const double next = ((k % 2) ? -1.0 : 1.0) * u / std::pow(zeta, k);
    if (std::fabs(next) >= std::fabs(term)) break;  // past the smallest term
    term = next;
    acc += term;
    if (std::fabs(term) < 1e-17 * std::fabs(acc)) break;
  }
  return std::exp(-zeta) / (2.0 * std::sqrt(std::numbers::pi) * std::pow(x, 0.25)) * acc;
}

double asymptotic_negative(double x) {
  const double z = -x;
  const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
  // even-index terms feed P, odd-index terms feed Q
  double p = 1.0, q = 0.0;
  double u = 1.0, last = 1.0;
  for (int k = 1; k < 80; ++k) {
    u = next_u(u, k);
    const double mag = u / std::pow(zeta, k);
    if (mag >= last) break;
    last = mag;
    const int j = k / 2;
    const double sign = (j % 2) ? -1.0 : 1.0;
    if (k % 2 == 0) {
      p += sign * mag;
    } else {
      q += sign * mag;
    }
    if (mag < 1e-17) break;
  }
  const double phase = zeta + std::numbers::pi / 4.0;
  return (std::sin(phase) * p - std::cos(phase) * q) / (std::sqrt(std::numbers::pi) * std::pow(z, 0.25));
}

}  // namespace

double airy_ai(double x) {
  if (!std::isfinite(x) || std::fabs(x) > 30.0) {
    throw InvalidArgument("airy_ai: argument outside [-30, 30]");
  }
  if (x >= kSeriesLow && x <= kSeriesHigh) return series(x);
  return x > 0.0 ? asymptotic_positive(x) : asymptotic_negative(x);
}

}  // namespace madelung
