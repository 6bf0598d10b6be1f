#include "decayalg/dense.hpp"

#include <algorithm>
#include <cmath>

#include "decayalg/error.hpp"
#include "decayalg/simd/kernels.hpp"

namespace decayalg {

DenseBlock::DenseBlock(std::size_t d, std::vector<cplx> row_major) : d_(d), a_(std::move(row_major)) {
  require(a_.size() == d * d, ErrorKind::InvalidArgument, "block data must have d*d entries");
  for (const cplx& v : a_)
    require(std::isfinite(v.real()) && std::isfinite(v.imag()), ErrorKind::InvalidArgument,
            "block entries must be finite");
}

DenseBlock DenseBlock::identity(std::size_t d) {
  DenseBlock m(d);
  for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
  return m;
}

DenseBlock DenseBlock::diagonal(std::span<const cplx> diag) {
  DenseBlock m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

DenseBlock DenseBlock::outer(std::span<const cplx> y, std::span<const cplx> a) {
  require(y.size() == a.size(), ErrorKind::ShapeMismatch, "outer product length mismatch");
  DenseBlock m(y.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) m(i, j) = y[i] * a[j];
  return m;
}

bool DenseBlock::is_zero() const noexcept {
  return std::all_of(a_.begin(), a_.end(), [](const cplx& v) { return v == cplx{}; });
}

DenseBlock DenseBlock::adjoint() const {
  DenseBlock m(d_);
  for (std::size_t i = 0; i < d_; ++i)
    for (std::size_t j = 0; j < d_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

std::vector<cplx> DenseBlock::column(std::size_t j) const {
  std::vector<cplx> col(d_);
  for (std::size_t i = 0; i < d_; ++i) col[i] = (*this)(i, j);
  return col;
}

DenseBlock& DenseBlock::operator+=(const DenseBlock& o) {
  require(d_ == o.d_, ErrorKind::ShapeMismatch, "block dimension mismatch");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

DenseBlock& DenseBlock::operator-=(const DenseBlock& o) {
  require(d_ == o.d_, ErrorKind::ShapeMismatch, "block dimension mismatch");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

DenseBlock& DenseBlock::operator*=(cplx s) {
  for (auto& v : a_) v *= s;
  return *this;
}

DenseBlock operator*(const DenseBlock& a, const DenseBlock& b) {
  require(a.d_ == b.d_, ErrorKind::ShapeMismatch, "block dimension mismatch");
  const std::size_t d = a.d_;
  DenseBlock c(d);
  for (std::size_t i = 0; i < d; ++i) {
    auto crow = c.row(i);
    for (std::size_t k = 0; k < d; ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      simd::axpy(aik, b.row(k), crow);
    }
  }
  return c;
}

std::vector<cplx> matvec(const DenseBlock& a, std::span<const cplx> x) {
  std::vector<cplx> y(a.dim());
  matvec_add(a, x, y);
  return y;
}

void matvec_add(const DenseBlock& a, std::span<const cplx> x, std::span<cplx> y) {
  require(x.size() == a.dim() && y.size() == a.dim(), ErrorKind::ShapeMismatch, "matvec length mismatch");
  for (std::size_t i = 0; i < a.dim(); ++i) y[i] += simd::dotu(a.row(i), x);
}

double max_abs_diff(const DenseBlock& a, const DenseBlock& b) {
  require(a.dim() == b.dim(), ErrorKind::ShapeMismatch, "block dimension mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

LuFactorization::LuFactorization(const DenseBlock& a) : lu_(a), perm_(a.dim()) {
  const std::size_t n = a.dim();
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(lu_(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best == 0.0) fail(ErrorKind::NumericallySingular, "zero pivot in LU factorisation");
    if (p != k) {
      std::swap_ranges(lu_.row(k).begin(), lu_.row(k).end(), lu_.row(p).begin());
      std::swap(perm_[k], perm_[p]);
    }
    const cplx pivot = lu_(k, k);
    const auto tail = lu_.row(k).subspan(k + 1);
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx l = lu_(i, k) / pivot;
      lu_(i, k) = l;
      if (l != cplx{}) simd::axpy(-l, tail, lu_.row(i).subspan(k + 1));
    }
  }
}

std::vector<cplx> LuFactorization::solve(std::span<const cplx> b) const {
  const std::size_t n = dim();
  require(b.size() == n, ErrorKind::ShapeMismatch, "LU solve length mismatch");
  std::vector<cplx> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
  for (std::size_t i = 0; i < n; ++i) x[i] -= simd::dotu(lu_.row(i).first(i), std::span<const cplx>(x).first(i));
  for (std::size_t i = n; i-- > 0;) {
    const auto tail = lu_.row(i).subspan(i + 1);
    x[i] = (x[i] - simd::dotu(tail, std::span<const cplx>(x).subspan(i + 1))) / lu_(i, i);
  }
  return x;
}

DenseBlock LuFactorization::inverse() const {
  const std::size_t n = dim();
  // Solve for rows of the inverse's transpose, then transpose back.
  DenseBlock inv(n);
  std::vector<cplx> e(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), cplx{});
    e[j] = 1.0;
    const auto col = solve(e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

DenseBlock inverse(const DenseBlock& a) { return LuFactorization(a).inverse(); }

}  // namespace decayalg
