#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "decayalg/dense.hpp"

namespace decayalg {

/// Exponent p of the block geometry l^p(C^d); the dual exponent q pairs with it.
enum class Exponent { one, two, inf };

std::string to_string(Exponent p);
Exponent exponent_from_string(const std::string& s);
Exponent dual(Exponent p) noexcept;

double vector_norm(std::span<const cplx> x, Exponent p);

/// Sum of singular values (the nuclear norm in the l^2 geometry).
double trace_norm(const DenseBlock& a);

/// Induced l^p -> l^p norm: max column sum (1), largest singular value (2),
/// max row sum (inf).
double operator_norm(const DenseBlock& a, Exponent p);

/// Cost of the column representation A = sum_j e_j^* (x) (A e_j), i.e.
/// sum_j ||A e_j||_p. Always an upper bound for the nuclear norm in l^p.
double nuclear_upper_bound(const DenseBlock& a, Exponent p);

/// A = sum_i a_i (x) y_i, where the functional a_i acts as x -> sum_j a_i[j] x_j.
struct NuclearTerm {
  std::vector<cplx> functional;
  std::vector<cplx> vector;
};

struct NuclearFactorization {
  std::size_t dim = 0;
  std::vector<NuclearTerm> terms;

  DenseBlock assemble() const;
  /// sum_i ||a_i||_q ||y_i||_p with q dual to p.
  double cost(Exponent p = Exponent::two) const;
};

/// Factorisation from the SVD: a_i = sigma_i v_i^H, y_i = u_i. Zero singular
/// values contribute no term. Its l^2 cost equals trace_norm(a).
NuclearFactorization nuclear_factorization(const DenseBlock& a);

struct NeumannResult {
  DenseBlock inverse;          // partial sum S_n of A^-1 + A^-1 B A^-1 + ...
  int terms = 0;               // number of summed terms
  double contraction = 0.0;    // trace_norm(A^-1 B)
  double last_term_norm = 0.0; // trace norm of the last appended term
  double residual = 0.0;       // ||(A - B) S_n - 1||_2
  double kappa = 0.0;          // ||A - B||_2
};

/// (A - B)^-1 from A^-1 by the Neumann series. Requires trace_norm(A^-1 B) < 1
/// (NotContractive otherwise); Diverged if max_terms are used up before the
/// appended term's trace norm drops below tol.
NeumannResult neumann_inverse(const DenseBlock& a_inv, const DenseBlock& b, double tol, int max_terms = 10000);

/// Sampled path z(t_0) = mu, ..., z(t_n) = nu in C \ {0} along which 1 - zJ
/// stays invertible. resolvent_bound is the estimate of max ||(1 - zJ)^-1||_2.
struct HomotopyPath {
  std::vector<cplx> samples;
  double resolvent_bound = 1.0;
  double margin = 1.0;          // min over the path of sigma_min(1 - zJ)
  double j_trace_norm = 0.0;
  double max_step = 0.0;

  /// max_k |z_k - z_{k-1}| * ||J||_1 * M; < 1 is the contraction certificate.
  double step_certificate() const { return max_step * j_trace_norm * resolvent_bound; }
};

/// Step fraction of 1/M used when subdividing.
inline constexpr double kPathSafetyFactor = 0.5;
inline constexpr double kPathMinMargin = 1e-8;

/// Straight segment from mu to nu, subdivided until every step satisfies
/// |dz| * ||J||_1 < kPathSafetyFactor / M. Throws PathHitsSpectrum when
/// sigma_min(1 - zJ) falls below kPathMinMargin somewhere on the segment.
HomotopyPath build_path(const DenseBlock& j, cplx mu, cplx nu, int probe_points = 64);
/// Polyline through the given vertices (first = mu, last = nu).
HomotopyPath build_path(const DenseBlock& j, std::span<const cplx> vertices, int probe_points = 64);

/// Starting point on the ray towards nu with |mu| * ||J||_1 <= 1/2, so the
/// first inverse is a contractive Neumann series around the identity.
cplx default_start(const DenseBlock& j, cplx nu);

struct HomotopyStep {
  cplx from, to;
  double certificate = 0.0;  // |dz| * ||J||_1 * ||(1 - z_from J)^-1||_2
  double contraction = 0.0;
  int terms = 0;
  double condition = 0.0;    // ||1 - z_to J||_2 * ||(1 - z_to J)^-1||_2
};

struct HomotopyResult {
  DenseBlock inverse;
  cplx scalar_part{1.0, 0.0};
  DenseBlock nuclear_part;        // inverse - scalar_part * 1
  double nuclear_trace_norm = 0.0;
  double residual = 0.0;          // ||inverse (1 - nu J) - 1||_2
  double observed_resolvent = 0.0; // max over samples of the computed ||(1 - zJ)^-1||_2
  std::vector<HomotopyStep> steps;
};

/// (1 - nu J)^-1 by chaining Neumann series along the path. StepTooLarge if
/// the path's certificate or a per-step contraction bound fails.
HomotopyResult homotopy_inverse(const DenseBlock& j, cplx nu, const HomotopyPath& path, double tol);

}  // namespace decayalg
