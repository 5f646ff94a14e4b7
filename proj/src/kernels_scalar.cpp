#include "madelung/kernels.hpp"

namespace madelung::kernels {
namespace {

// Written out by hand: std::complex operator* goes through the Annex G
// NaN-recovery path, which is both slower and not what the SIMD variant does.
void cmul_inplace_scalar(Complex* z, const Complex* w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = z[i].real(), ai = z[i].imag();
    const double br = w[i].real(), bi = w[i].imag();
    z[i] = Complex(ar * br - ai * bi, ar * bi + ai * br);
  }
}

void cscale_inplace_scalar(Complex* z, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) z[i] = Complex(z[i].real() * s, z[i].imag() * s);
}

void abs2_scalar(const Complex* z, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
}

double sum_scalar(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", cmul_inplace_scalar, cscale_inplace_scalar, abs2_scalar,
                                 sum_scalar, dot_scalar};
  return table;
}

}  // namespace madelung::kernels
