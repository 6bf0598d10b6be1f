#pragma once

#include <optional>
#include <span>
#include <vector>

#include "decayalg/cd_operator.hpp"
#include "decayalg/nuclear.hpp"

namespace decayalg {

/// Samples of a function on the union of unit cells [0,1)^c + m, m in [-N,N]^c.
/// Each cell carries q^c samples at spacing h = 1/q in raster order (last axis
/// fastest); storage order is (cell, raster).
class GridFunction {
public:
  GridFunction() = default;
  GridFunction(int c, Coord cell_window, std::size_t samples_per_axis);

  int dim() const noexcept { return cells_.dim(); }
  const Window& cells() const noexcept { return cells_; }
  std::size_t samples_per_axis() const noexcept { return q_; }
  std::size_t samples_per_cell() const noexcept { return per_cell_; }
  /// h^c, the quadrature weight of one sample.
  double cell_volume() const noexcept;

  std::span<cplx> cell(std::size_t k) { return {values_.data() + k * per_cell_, per_cell_}; }
  std::span<const cplx> cell(std::size_t k) const { return {values_.data() + k * per_cell_, per_cell_}; }
  std::span<cplx> values() noexcept { return values_; }
  std::span<const cplx> values() const noexcept { return values_; }

  bool operator==(const GridFunction&) const = default;

private:
  Window cells_;
  std::size_t q_ = 1;
  std::size_t per_cell_ = 1;
  std::vector<cplx> values_;
};

/// x_m(t) = x(t + m): cell m becomes the m-th block of a BlockVector with
/// local dimension q^c. Pure re-indexing.
BlockVector block(const GridFunction& x, Exponent p = Exponent::two);
/// Inverse of block(); q is recovered from the local dimension (q^c = d).
GridFunction unblock(const BlockVector& v, std::size_t samples_per_axis);

/// (sum |x|^p h^c)^(1/p), or max |x| for p = inf. Per-cell partial sums are
/// accumulated first, in cell order.
double lp_norm(const GridFunction& x, Exponent p);
/// The same quantity computed as the l_p norm of the cell-wise L_p norms of a
/// blocked vector; summands and order match lp_norm exactly.
double blocked_lp_norm(const BlockVector& v, Exponent p, double cell_volume);

/// Discretised kernel n(t, s), stored by blocks (k, m) with l = k - m:
/// block values are n(t_k,i, s_l,j) over the raster samples of cells k and l.
class Kernel {
public:
  Kernel() = default;
  Kernel(int c, Coord cell_window, Coord band_radius, std::size_t samples_per_axis, Boundary boundary);

  const CDOperator& blocks() const noexcept { return blocks_; }
  CDOperator& blocks() noexcept { return blocks_; }
  std::size_t samples_per_axis() const noexcept { return q_; }
  double cell_volume() const noexcept;

private:
  CDOperator blocks_;
  std::size_t q_ = 1;
};

/// A convolution-dominated operator whose stored blocks carry nuclear
/// factorisations, indexed like the operator's blocks.
struct FactorizedOperator {
  CDOperator op;
  std::vector<std::optional<NuclearFactorization>> factors;  // [k_lin * band.size() + m_lin]

  const NuclearFactorization* find(std::size_t k_lin, std::size_t m_lin) const;
};

/// SVD factorisation of every stored block.
FactorizedOperator factorize_blocks(const CDOperator& t);

/// Kernel block (k, k-m) = sum_i y_i a_i^T / h^c, so quadrature application
/// reproduces the discrete block action. MissingFactorization if a stored
/// block has no factorisation.
Kernel assemble_kernel(const FactorizedOperator& t, std::size_t samples_per_axis);

/// (Ax)(t) = sum_s n(t, s) x(s) h^c.
GridFunction apply_kernel(const Kernel& k, const GridFunction& x);

}  // namespace decayalg
