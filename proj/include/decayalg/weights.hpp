#pragma once

#include <optional>
#include <string>
#include <vector>

#include "decayalg/lattice.hpp"

namespace decayalg {

/// Admissible weight on Z^c from the family
///   g(n) = exp(a |n|^b) (1 + |n|)^s ln^t(e + |n|),   a >= 0, 0 <= b < 1, s, t >= 0.
/// Parameters are validated on construction, so every Weight satisfies the
/// admissibility axioms; verify_axioms() is a numerical cross-check.
class Weight {
public:
  Weight() = default;  // constant weight g = 1
  Weight(double a, double b, double s, double t, IndexNorm index_norm = IndexNorm::l1);

  static Weight constant() { return {}; }
  static Weight polynomial(double s, IndexNorm k = IndexNorm::l1) { return {0.0, 0.0, s, 0.0, k}; }
  static Weight subexponential(double a, double b, double s = 0.0, IndexNorm k = IndexNorm::l1) {
    return {a, b, s, 0.0, k};
  }

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double s() const noexcept { return s_; }
  double t() const noexcept { return t_; }
  IndexNorm index_norm() const noexcept { return norm_; }

  double operator()(const LatticeIndex& n) const { return eval_radial(norm(n, norm_)); }
  /// g as a function of r = |n|.
  double eval_radial(double r) const;
  /// ln g as a function of r = |n|, evaluated without forming g.
  double log_radial(double r) const;

  bool operator==(const Weight&) const = default;

private:
  double a_ = 0.0, b_ = 0.0, s_ = 0.0, t_ = 0.0;
  IndexNorm norm_ = IndexNorm::l1;
};

inline double eval(const Weight& w, const LatticeIndex& n) { return w(n); }

struct AxiomCheck {
  std::string axiom;
  bool pass = true;
  double worst_violation = 0.0;  // largest amount by which the inequality fails
  std::optional<LatticeIndex> witness_m;
  std::optional<LatticeIndex> witness_n;
};

struct AxiomReport {
  int c = 1;
  Coord window_radius = 0;
  std::vector<AxiomCheck> checks;  // (a) g(0)=1, (b) submultiplicative, (c) symmetric, (d) g>=1
  bool all_pass() const;
};

/// Exhaustive check of axioms (a)-(d) on [-R,R]^c. Submultiplicativity is
/// tested with relative tolerance 1e-12 over all m, n with m, n, m+n in the cube.
AxiomReport verify_axioms(const Weight& w, int c, Coord window_radius);

/// ln g(n t) / n for n = 1..n_max.
std::vector<double> grs_sequence(const Weight& w, const LatticeIndex& t, int n_max);

}  // namespace decayalg
