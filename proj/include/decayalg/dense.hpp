#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace decayalg {

using cplx = std::complex<double>;

/// A d x d complex matrix, row-major. Used both for the local blocks b_km and
/// for densified operators.
class DenseBlock {
public:
  DenseBlock() = default;
  explicit DenseBlock(std::size_t d) : d_(d), a_(d * d) {}
  /// Throws InvalidArgument on size mismatch or non-finite entries.
  DenseBlock(std::size_t d, std::vector<cplx> row_major);

  static DenseBlock identity(std::size_t d);
  static DenseBlock diagonal(std::span<const cplx> diag);
  /// y a^T as a matrix: the rank-one operator x -> (a . x) y.
  static DenseBlock outer(std::span<const cplx> y, std::span<const cplx> a);

  std::size_t dim() const noexcept { return d_; }
  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * d_ + j]; }
  cplx operator()(std::size_t i, std::size_t j) const { return a_[i * d_ + j]; }
  std::span<cplx> row(std::size_t i) { return {a_.data() + i * d_, d_}; }
  std::span<const cplx> row(std::size_t i) const { return {a_.data() + i * d_, d_}; }
  std::span<cplx> data() noexcept { return a_; }
  std::span<const cplx> data() const noexcept { return a_; }

  bool is_zero() const noexcept;
  DenseBlock adjoint() const;
  std::vector<cplx> column(std::size_t j) const;

  DenseBlock& operator+=(const DenseBlock& o);
  DenseBlock& operator-=(const DenseBlock& o);
  DenseBlock& operator*=(cplx s);
  friend DenseBlock operator+(DenseBlock a, const DenseBlock& b) { return a += b; }
  friend DenseBlock operator-(DenseBlock a, const DenseBlock& b) { return a -= b; }
  friend DenseBlock operator*(cplx s, DenseBlock a) { return a *= s; }
  friend DenseBlock operator*(const DenseBlock& a, const DenseBlock& b);

  bool operator==(const DenseBlock&) const = default;

private:
  std::size_t d_ = 0;
  std::vector<cplx> a_;
};

/// y = A x.
std::vector<cplx> matvec(const DenseBlock& a, std::span<const cplx> x);
/// y += A x.
void matvec_add(const DenseBlock& a, std::span<const cplx> x, std::span<cplx> y);

double max_abs_diff(const DenseBlock& a, const DenseBlock& b);

/// LU factorisation with partial pivoting, P A = L U.
class LuFactorization {
public:
  /// Throws NumericallySingular on an exactly zero pivot.
  explicit LuFactorization(const DenseBlock& a);

  std::size_t dim() const noexcept { return lu_.dim(); }
  std::vector<cplx> solve(std::span<const cplx> b) const;
  DenseBlock inverse() const;

private:
  DenseBlock lu_;
  std::vector<std::size_t> perm_;
};

DenseBlock inverse(const DenseBlock& a);

/// A = U diag(sigma) V^H with sigma sorted in decreasing order.
struct Svd {
  DenseBlock u;
  std::vector<double> sigma;
  DenseBlock v;
};

/// One-sided (Hestenes) Jacobi SVD.
Svd svd(const DenseBlock& a);
std::vector<double> singular_values(const DenseBlock& a);

}  // namespace decayalg
