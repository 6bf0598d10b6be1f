// One-sided Jacobi SVD. Columns of A are orthogonalised by plane rotations
// applied from the right; the converged column norms are the singular values.
// Columns are kept as contiguous rows of a transposed work array so every
// rotation and inner product is a unit-stride kernel call.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "decayalg/dense.hpp"
#include "decayalg/simd/kernels.hpp"

namespace decayalg {
namespace {

constexpr int kMaxSweeps = 80;

struct JacobiResult {
  DenseBlock cols;  // row j holds column j of A V
  DenseBlock vcols; // row j holds column j of V (empty if not accumulated)
};

JacobiResult jacobi(const DenseBlock& a, bool want_v) {
  const std::size_t n = a.dim();
  JacobiResult r{DenseBlock(n), want_v ? DenseBlock::identity(n) : DenseBlock()};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r.cols(j, i) = a(i, j);

  const double tol = std::numeric_limits<double>::epsilon() * static_cast<double>(std::max<std::size_t>(n, 1));
  std::vector<double> norm2(n);
  for (std::size_t j = 0; j < n; ++j) norm2[j] = simd::sum_abs2(r.cols.row(j));

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = norm2[p];
        const double beta = norm2[q];
        const cplx gamma = simd::dotc(r.cols.row(p), r.cols.row(q));
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= tol * std::sqrt(alpha * beta)) continue;
        rotated = true;

        const cplx phase = gamma / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const cplx s_xy = -s * std::conj(phase);
        const cplx s_yx = s * phase;

        simd::rot(r.cols.row(p), r.cols.row(q), c, s_xy, s_yx);
        if (want_v) simd::rot(r.vcols.row(p), r.vcols.row(q), c, s_xy, s_yx);
        norm2[p] = simd::sum_abs2(r.cols.row(p));
        norm2[q] = simd::sum_abs2(r.cols.row(q));
      }
    }
    if (!rotated) break;
  }
  return r;
}

}  // namespace

std::vector<double> singular_values(const DenseBlock& a) {
  const auto r = jacobi(a, false);
  std::vector<double> sigma(a.dim());
  for (std::size_t j = 0; j < a.dim(); ++j) sigma[j] = std::sqrt(simd::sum_abs2(r.cols.row(j)));
  std::sort(sigma.begin(), sigma.end(), std::greater<>());
  return sigma;
}

Svd svd(const DenseBlock& a) {
  const std::size_t n = a.dim();
  const auto r = jacobi(a, true);
  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(simd::sum_abs2(r.cols.row(j)));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  Svd out{DenseBlock(n), std::vector<double>(n), DenseBlock(n)};
  const double smax = n ? sigma[order[0]] : 0.0;
  const double tiny = smax * std::numeric_limits<double>::epsilon() * static_cast<double>(n);

  // Left vectors for the nonzero singular values; the rest are completed to
  // an orthonormal basis by Gram-Schmidt against the standard basis.
  std::vector<std::vector<cplx>> ucols;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.sigma[k] = sigma[j];
    for (std::size_t i = 0; i < n; ++i) out.v(i, k) = r.vcols(j, i);
    std::vector<cplx> u(n);
    if (sigma[j] > tiny && sigma[j] > 0.0) {
      for (std::size_t i = 0; i < n; ++i) u[i] = r.cols(j, i) / sigma[j];
    }
    ucols.push_back(std::move(u));
  }
  std::size_t next_e = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (out.sigma[k] > tiny && out.sigma[k] > 0.0) continue;
    while (next_e < n) {
      std::vector<cplx> cand(n);
      cand[next_e++] = 1.0;
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t m = 0; m < n; ++m) {
          if (m == k) continue;
          const auto& um = ucols[m];
          if (simd::sum_abs2(um) == 0.0) continue;
          simd::axpy(-simd::dotc(um, cand), um, cand);
        }
      const double nrm = std::sqrt(simd::sum_abs2(cand));
      if (nrm > 0.5 / std::sqrt(static_cast<double>(n))) {
        for (auto& x : cand) x /= nrm;
        ucols[k] = std::move(cand);
        break;
      }
    }
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) out.u(i, k) = ucols[k][i];
  return out;
}

}  // namespace decayalg
