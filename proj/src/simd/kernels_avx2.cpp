// AVX2 + FMA variants. One __m256d holds two complex doubles laid out as
// [re0, im0, re1, im1], which is the memory layout of std::complex<double>.

#include <immintrin.h>

#include <cmath>

#include "decayalg/simd/kernels.hpp"

namespace decayalg::simd {
namespace {

inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }
inline __m256d swap_re_im(__m256d v) { return _mm256_permute_pd(v, 0x5); }

// (ar + i ai) * v for two packed complex values.
inline __m256d cmul(__m256d ar, __m256d ai, __m256d v) {
  return _mm256_fmaddsub_pd(ar, v, _mm256_mul_pd(ai, swap_re_im(v)));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Sum of even lanes minus sum of odd lanes.
inline double hsum_alt(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_sub_sd(s, _mm_unpackhi_pd(s, s)));
}

void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d y0 = _mm256_add_pd(load2(y + i), cmul(ar, ai, load2(x + i)));
    const __m256d y1 = _mm256_add_pd(load2(y + i + 2), cmul(ar, ai, load2(x + i + 2)));
    store2(y + i, y0);
    store2(y + i + 2, y1);
  }
  for (; i + 2 <= n; i += 2) store2(y + i, _mm256_add_pd(load2(y + i), cmul(ar, ai, load2(x + i))));
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = {y[i].real() + (alpha.real() * xr - alpha.imag() * xi), y[i].imag() + (alpha.real() * xi + alpha.imag() * xr)};
  }
}

// acc_direct accumulates [xr*yr, xi*yi], acc_cross accumulates [xr*yi, xi*yr].
template <bool Conj>
cplx dot(const cplx* x, const cplx* y, std::size_t n) {
  __m256d acc_direct = _mm256_setzero_pd();
  __m256d acc_cross = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = load2(x + i);
    const __m256d yv = load2(y + i);
    acc_direct = _mm256_fmadd_pd(xv, yv, acc_direct);
    acc_cross = _mm256_fmadd_pd(xv, swap_re_im(yv), acc_cross);
  }
  double re, im;
  if constexpr (Conj) {
    re = hsum(acc_direct);
    im = hsum_alt(acc_cross);
  } else {
    re = hsum_alt(acc_direct);
    im = hsum(acc_cross);
  }
  for (; i < n; ++i) {
    if constexpr (Conj) {
      re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
      im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
    } else {
      re += x[i].real() * y[i].real() - x[i].imag() * y[i].imag();
      im += x[i].real() * y[i].imag() + x[i].imag() * y[i].real();
    }
  }
  return {re, im};
}

cplx dotu(const cplx* x, const cplx* y, std::size_t n) { return dot<false>(x, y, n); }
cplx dotc(const cplx* x, const cplx* y, std::size_t n) { return dot<true>(x, y, n); }

double sum_abs2(const cplx* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = load2(x + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

double sum_abs(const cplx* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = load2(x + i);
    const __m256d sq = _mm256_mul_pd(v, v);
    // [|x0|^2, |x0|^2, |x1|^2, |x1|^2]
    acc = _mm256_add_pd(acc, _mm256_sqrt_pd(_mm256_hadd_pd(sq, sq)));
  }
  // Each modulus appears twice in acc.
  double s = 0.5 * hsum(acc);
  for (; i < n; ++i) s += std::sqrt(x[i].real() * x[i].real() + x[i].imag() * x[i].imag());
  return s;
}

void rot(cplx* x, cplx* y, std::size_t n, double c, cplx s_xy, cplx s_yx) {
  const __m256d cv = _mm256_set1_pd(c);
  const __m256d pr = _mm256_set1_pd(s_xy.real()), pi = _mm256_set1_pd(s_xy.imag());
  const __m256d qr = _mm256_set1_pd(s_yx.real()), qi = _mm256_set1_pd(s_yx.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = load2(x + i);
    const __m256d yv = load2(y + i);
    store2(x + i, _mm256_fmadd_pd(cv, xv, cmul(pr, pi, yv)));
    store2(y + i, _mm256_fmadd_pd(cv, yv, cmul(qr, qi, xv)));
  }
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    x[i] = {c * xr + (s_xy.real() * yr - s_xy.imag() * yi), c * xi + (s_xy.real() * yi + s_xy.imag() * yr)};
    y[i] = {c * yr + (s_yx.real() * xr - s_yx.imag() * xi), c * yi + (s_yx.real() * xi + s_yx.imag() * xr)};
  }
}

constexpr KernelTable kTable{axpy, dotu, dotc, sum_abs2, sum_abs, rot};

}  // namespace

const KernelTable& detail::avx2_table() noexcept { return kTable; }

}  // namespace decayalg::simd
