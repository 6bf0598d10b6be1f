#include <cmath>

#include "decayalg/simd/kernels.hpp"

namespace decayalg::simd {
namespace {

// Explicit real arithmetic: std::complex multiplication goes through the
// Annex G NaN-recovery path, which is slower and not what the SIMD variant does.

void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const double ar = alpha.real(), ai = alpha.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = {y[i].real() + (ar * xr - ai * xi), y[i].imag() + (ar * xi + ai * xr)};
  }
}

cplx dotu(const cplx* x, const cplx* y, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i].real() * y[i].real() - x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() + x[i].imag() * y[i].real();
  }
  return {re, im};
}

cplx dotc(const cplx* x, const cplx* y, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

double sum_abs2(const cplx* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

double sum_abs(const cplx* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::sqrt(x[i].real() * x[i].real() + x[i].imag() * x[i].imag());
  return s;
}

void rot(cplx* x, cplx* y, std::size_t n, double c, cplx s_xy, cplx s_yx) {
  const double pr = s_xy.real(), pi = s_xy.imag();
  const double qr = s_yx.real(), qi = s_yx.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    x[i] = {c * xr + (pr * yr - pi * yi), c * xi + (pr * yi + pi * yr)};
    y[i] = {c * yr + (qr * xr - qi * xi), c * yi + (qr * xi + qi * xr)};
  }
}

constexpr KernelTable kTable{axpy, dotu, dotc, sum_abs2, sum_abs, rot};

}  // namespace

const KernelTable& detail::scalar_table() noexcept { return kTable; }

}  // namespace decayalg::simd
