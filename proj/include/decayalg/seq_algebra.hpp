#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "decayalg/lattice.hpp"
#include "decayalg/weights.hpp"

namespace decayalg {

using cplx = std::complex<double>;

/// A finitely supported sequence on Z^c: an element of the truncated
/// weighted convolution algebra. Coefficients are stored densely on the cube
/// [-R,R]^c; everything outside the cube is exactly zero.
class FiniteSeq {
public:
  FiniteSeq() : FiniteSeq(1, 0) {}
  FiniteSeq(int c, Coord radius);

  static FiniteSeq delta(int c);

  int dim() const noexcept { return window_.dim(); }
  Coord radius() const noexcept { return window_.radius(); }
  const Window& window() const noexcept { return window_; }

  cplx operator[](const LatticeIndex& n) const;
  void set(const LatticeIndex& n, cplx value);
  void add(const LatticeIndex& n, cplx value);

  std::span<const cplx> values() const noexcept { return values_; }
  std::span<cplx> values() noexcept { return values_; }

  /// Same coefficients on a cube of a different radius; shrinking drops
  /// coefficients outside the new cube.
  FiniteSeq resized(Coord radius) const;

  FiniteSeq& operator+=(const FiniteSeq& o);
  FiniteSeq& operator-=(const FiniteSeq& o);
  FiniteSeq& operator*=(cplx s);
  friend FiniteSeq operator+(FiniteSeq a, const FiniteSeq& b) { return a += b; }
  friend FiniteSeq operator-(FiniteSeq a, const FiniteSeq& b) { return a -= b; }
  friend FiniteSeq operator*(cplx s, FiniteSeq a) { return a *= s; }

  bool operator==(const FiniteSeq&) const = default;

private:
  Window window_;
  std::vector<cplx> values_;
};

/// u in U^c stored by its phases (u_j = exp(i theta_j)).
struct TorusPoint {
  std::vector<double> phases;

  int dim() const noexcept { return static_cast<int>(phases.size()); }
  /// u^n = exp(i <theta, n>).
  cplx power(const LatticeIndex& n) const;
};

/// The basis element epsilon^n (1 at n, 0 elsewhere).
FiniteSeq basis(const LatticeIndex& n);

double weighted_norm(const FiniteSeq& a, const Weight& g);
double l1_norm(const FiniteSeq& a);

/// (a * b)_k = sum_m a_m b_{k-m}; the result has radius R_a + R_b.
FiniteSeq convolve(const FiniteSeq& a, const FiniteSeq& b);

/// sum_n u^n a_n.
cplx character_eval(const FiniteSeq& a, const TorusPoint& u);

/// Character values on the uniform torus grid theta_j = 2 pi j / N.
struct SymbolGrid {
  int c = 1;
  std::size_t n = 0;
  std::vector<cplx> values;  // row-major over [0,N)^c

  TorusPoint point(std::size_t linear) const;
};

/// Requires N >= 2R+1. Power-of-two N uses the FFT, other N the direct sum.
SymbolGrid symbol_on_grid(const FiniteSeq& a, std::size_t n);

struct InvertibilityReport {
  bool invertible = false;
  double min_modulus = 0.0;
  TorusPoint argmin;
  double margin = 0.0;
  std::size_t grid = 0;
  // Only grid points were inspected; the symbol may vanish between them.
  bool sampled = true;
};

InvertibilityReport invertibility_test(const FiniteSeq& a, std::size_t n, double margin);

struct WienerInverse {
  FiniteSeq inverse;
  double residual = 0.0;  // || a * b - delta ||_{l1}
  double min_modulus = 0.0;
  std::size_t grid = 0;
};

/// Approximate inverse in l_{1,g}: samples 1/symbol on an N-point grid per
/// axis, transforms back and truncates to radius R'. N must be a power of two
/// with N >= 2(R + R') + 2.
WienerInverse wiener_inverse(const FiniteSeq& a, std::size_t n, Coord out_radius,
                             std::optional<double> residual_cap = std::nullopt);

}  // namespace decayalg
