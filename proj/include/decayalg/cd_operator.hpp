#pragma once

#include <optional>
#include <span>
#include <vector>

#include "decayalg/dense.hpp"
#include "decayalg/lattice.hpp"
#include "decayalg/nuclear.hpp"
#include "decayalg/seq_algebra.hpp"
#include "decayalg/weights.hpp"

namespace decayalg {

enum class Boundary { circulant, dirichlet };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

/// Element of l_p(Z^c, C^d) restricted to the window [-N,N]^c.
class BlockVector {
public:
  BlockVector() = default;
  BlockVector(int c, Coord window_radius, std::size_t local_dim, Exponent p = Exponent::two);

  const Window& window() const noexcept { return window_; }
  std::size_t local_dim() const noexcept { return d_; }
  Exponent exponent() const noexcept { return p_; }
  void set_exponent(Exponent p) noexcept { p_ = p; }

  std::span<cplx> cell(std::size_t k) { return {data_.data() + k * d_, d_}; }
  std::span<const cplx> cell(std::size_t k) const { return {data_.data() + k * d_, d_}; }
  std::span<cplx> cell(const LatticeIndex& k) { return cell(window_.linear(k)); }
  std::span<const cplx> cell(const LatticeIndex& k) const { return cell(window_.linear(k)); }
  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }

  /// (sum_k ||x_k||_p^p)^(1/p), or max_k ||x_k||_inf.
  double norm() const;

  BlockVector& operator+=(const BlockVector& o);
  bool operator==(const BlockVector&) const = default;

private:
  Window window_;
  std::size_t d_ = 0;
  Exponent p_ = Exponent::two;
  std::vector<cplx> data_;
};

/// Convolution-dominated block operator (Tx)_k = sum_m b_km x_{k-m} on the
/// window [-N,N]^c with band offsets m in [-W,W]^c. Absent blocks are zero.
class CDOperator {
public:
  CDOperator() = default;
  CDOperator(int c, Coord window_radius, Coord band_radius, std::size_t local_dim,
             Boundary boundary = Boundary::circulant);

  static CDOperator identity(int c, Coord window_radius, std::size_t local_dim, Boundary boundary = Boundary::circulant);

  int dim() const noexcept { return window_.dim(); }
  Coord window_radius() const noexcept { return window_.radius(); }
  Coord band_radius() const noexcept { return band_.radius(); }
  std::size_t local_dim() const noexcept { return d_; }
  Boundary boundary() const noexcept { return boundary_; }
  const Window& window() const noexcept { return window_; }
  const Window& band() const noexcept { return band_; }

  void set_block(const LatticeIndex& k, const LatticeIndex& m, DenseBlock b);
  /// Sets b_km = b for every k (shift-invariant band).
  void set_band(const LatticeIndex& m, const DenseBlock& b);
  void add_block(const LatticeIndex& k, const LatticeIndex& m, const DenseBlock& b);

  bool has_block(const LatticeIndex& k, const LatticeIndex& m) const;
  const DenseBlock* find_block(std::size_t k_lin, std::size_t m_lin) const;
  const DenseBlock* find_block(const LatticeIndex& k, const LatticeIndex& m) const;
  /// Zero block when absent.
  DenseBlock block(const LatticeIndex& k, const LatticeIndex& m) const;
  std::size_t stored_blocks() const noexcept;

  /// Column cell index k - m under the boundary rule; nullopt when the cell
  /// falls outside the window under the Dirichlet rule.
  std::optional<std::size_t> source_cell(std::size_t k_lin, const LatticeIndex& m) const;

  bool is_shift_invariant() const;

  bool operator==(const CDOperator&) const = default;

private:
  Window window_;
  Window band_;
  std::size_t d_ = 0;
  Boundary boundary_ = Boundary::circulant;
  std::vector<std::optional<DenseBlock>> blocks_;  // [k_lin * band.size() + m_lin]
};

/// Dense matrix of T on the window, rows/columns ordered (cell, local index).
DenseBlock densify(const CDOperator& t);

/// T + s 1 (adds s times the identity block at offset 0).
CDOperator plus_identity(const CDOperator& t, cplx s = 1.0);

struct NormKind {
  enum class Kind { operator_p, nuclear } kind = Kind::nuclear;
  Exponent p = Exponent::two;

  static NormKind nuclear() { return {Kind::nuclear, Exponent::two}; }
  static NormKind op(Exponent p) { return {Kind::operator_p, p}; }
};

double block_norm(const DenseBlock& b, NormKind kind);

/// beta_m on the band window; zero outside the band.
struct Envelope {
  Window band;
  std::vector<double> values;

  double operator[](const LatticeIndex& m) const;
  double l1() const;
  FiniteSeq as_sequence() const;
};

/// beta_m = max_k ||b_km|| (the least dominating envelope).
Envelope fit_envelope(const CDOperator& t, NormKind kind);
/// Largest excess ||b_km|| - beta_m over all stored blocks (<= 0 means dominated).
double domination_excess(const Envelope& env, const CDOperator& t, NormKind kind);

/// Convolution of envelopes; under the circulant rule offsets wrap onto the
/// window of the given radius.
Envelope convolve_envelopes(const Envelope& a, const Envelope& b, std::optional<Coord> wrap_radius = std::nullopt);

BlockVector apply(const CDOperator& t, const BlockVector& x);

/// KT with coefficients sum_m a_km b_{k-m, r-m}. The band radius of the result
/// is W_K + W_T, capped at N (circulant, offsets reduced mod 2N+1) or 2N (Dirichlet).
CDOperator compose(const CDOperator& k, const CDOperator& t);

/// T = sum_m B_m S_m with (B_m x)_k = b_km x_k and (S_m x)_k = x_{k-m}.
struct ShiftTerm {
  LatticeIndex offset;
  std::vector<std::pair<LatticeIndex, DenseBlock>> multipliers;  // k -> b_km
};

std::vector<ShiftTerm> shift_decomposition(const CDOperator& t);
/// B_m S_m as an operator with the same window, band and boundary as `like`.
CDOperator term_operator(const ShiftTerm& term, const CDOperator& like);
/// sum_m apply(B_m S_m, x), accumulated in offset order.
BlockVector apply_terms(const std::vector<ShiftTerm>& terms, const CDOperator& like, const BlockVector& x);

/// sum_m u^m b_m for a shift-invariant T (NotShiftInvariant otherwise).
DenseBlock laurent_symbol(const CDOperator& t, const TorusPoint& u);

struct LaurentInvertibility {
  bool invertible = false;
  double min_sigma = 0.0;
  TorusPoint argmin;
  double margin = 0.0;
  std::size_t grid = 0;
  bool sampled = true;
};

/// Minimum over the uniform grid theta_j = 2 pi j / grid of sigma_min(symbol).
LaurentInvertibility laurent_invertibility_test(const CDOperator& t, std::size_t grid, double margin);

struct EnvelopeRow {
  LatticeIndex m;
  double beta = 0.0;
  double weight = 0.0;
  double weighted_beta = 0.0;
  double cumsum = 0.0;
};

/// Rows in shell order (increasing |m|, then lexicographic).
std::vector<EnvelopeRow> envelope_table(const Envelope& env, const Weight& g);

/// Values below this are numerical zero for decay fits.
inline constexpr double kEnvelopeFloor = 1e-14;

/// Least-squares slope of ln beta_m against |m| over rows with beta > floor;
/// nullopt with fewer than two distinct |m| values.
std::optional<double> envelope_decay_slope(const std::vector<EnvelopeRow>& rows, IndexNorm kind,
                                           double floor = kEnvelopeFloor);

/// Sum of weighted_beta over the outermost shell divided by the total.
double final_shell_fraction(const std::vector<EnvelopeRow>& rows, IndexNorm kind);

struct InverseOnePlus {
  CDOperator t1;             // (1 + T)^-1 = 1 + T1, full band W = N
  double residual = 0.0;     // ||(1 + T)(1 + T1) - 1||_2 on the densified forms
  double condition = 0.0;    // ||1 + T||_1 ||(1 + T)^-1||_1
  Envelope envelope;         // nuclear envelope of T1
  std::vector<EnvelopeRow> envelope_report;
};

inline constexpr double kMaxCondition = 1e12;

/// Densify 1 + T, invert by LU, re-block the inverse minus 1. Circulant only.
/// NumericallySingular if the condition estimate exceeds kMaxCondition.
InverseOnePlus invert_one_plus(const CDOperator& t, const Weight& report_weight);

}  // namespace decayalg
