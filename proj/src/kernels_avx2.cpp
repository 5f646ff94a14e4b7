// Compiled with -mavx2 -mfma. Nothing in here may be called unless the
// dispatcher has confirmed CPU support.
#include <immintrin.h>

#include "madelung/kernels.hpp"

namespace madelung::kernels {
namespace {

void cmul_inplace_avx2(Complex* z, const Complex* w, std::size_t n) {
  auto* zp = reinterpret_cast<double*>(z);
  const auto* wp = reinterpret_cast<const double*>(w);
  std::size_t i = 0;
  // two complex numbers per register
  for (; i + 2 <= n; i += 2) {
    const __m256d a = _mm256_loadu_pd(zp + 2 * i);
    const __m256d b = _mm256_loadu_pd(wp + 2 * i);
    const __m256d b_re = _mm256_movedup_pd(b);
    const __m256d b_im = _mm256_permute_pd(b, 0xF);
    const __m256d a_swap = _mm256_permute_pd(a, 0x5);
    const __m256d cross = _mm256_mul_pd(a_swap, b_im);
    _mm256_storeu_pd(zp + 2 * i, _mm256_fmaddsub_pd(a, b_re, cross));
  }
  for (; i < n; ++i) {
    const double ar = z[i].real(), ai = z[i].imag();
    const double br = w[i].real(), bi = w[i].imag();
    z[i] = Complex(ar * br - ai * bi, ar * bi + ai * br);
  }
}

void cscale_inplace_avx2(Complex* z, double s, std::size_t n) {
  auto* zp = reinterpret_cast<double*>(z);
  const std::size_t m = 2 * n;
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) _mm256_storeu_pd(zp + i, _mm256_mul_pd(_mm256_loadu_pd(zp + i), vs));
  for (; i < m; ++i) zp[i] *= s;
}

void abs2_avx2(const Complex* z, double* out, std::size_t n) {
  const auto* zp = reinterpret_cast<const double*>(z);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(zp + 2 * i);      // r0 i0 r1 i1
    const __m256d b = _mm256_loadu_pd(zp + 2 * i + 4);  // r2 i2 r3 i3
    const __m256d hs = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));  // |0| |2| |1| |3|
    _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(hs, 0xD8));
  }
  for (; i < n; ++i) out[i] = z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
}

double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double sum_avx2(const double* a, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(a + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(a + i + 4));
  }
  double acc = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i];
  return acc;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  double acc = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace

const KernelTable& avx2_kernels() {
  static const KernelTable table{"avx2", cmul_inplace_avx2, cscale_inplace_avx2, abs2_avx2, sum_avx2,
                                 dot_avx2};
  return table;
}

}  // namespace madelung::kernels
