#pragma once

// Data-parallel inner loops used by the propagator, the spectral operators and
// the quadrature. Each kernel has a scalar reference implementation and, on
// x86-64, an AVX2/FMA variant; the variant is picked once per process from the
// CPU feature flags (or the MADELUNG_SIMD environment variable).

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace madelung::kernels {

using Complex = std::complex<double>;

struct KernelTable {
  const char* name;
  /// z[i] *= w[i]
  void (*cmul_inplace)(Complex* z, const Complex* w, std::size_t n);
  /// z[i] *= s
  void (*cscale_inplace)(Complex* z, double s, std::size_t n);
  /// out[i] = |z[i]|^2
  void (*abs2)(const Complex* z, double* out, std::size_t n);
  /// sum of a[i]
  double (*sum)(const double* a, std::size_t n);
  /// sum of a[i]*b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_table();

/// Null when the AVX2 variants were not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();

/// The table used by the library. Selected on first use: MADELUNG_SIMD=scalar
/// forces the reference path, otherwise AVX2 when available.
const KernelTable& active();

inline void cmul_inplace(std::span<Complex> z, std::span<const Complex> w) {
  active().cmul_inplace(z.data(), w.data(), z.size());
}
inline void cscale_inplace(std::span<Complex> z, double s) {
  active().cscale_inplace(z.data(), s, z.size());
}
inline void abs2(std::span<const Complex> z, std::span<double> out) {
  active().abs2(z.data(), out.data(), z.size());
}
inline double sum(std::span<const double> a) { return active().sum(a.data(), a.size()); }
inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

}  // namespace madelung::kernels
