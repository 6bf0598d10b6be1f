#pragma once

// Shared generators and Eigen bridges for the test binaries. Eigen is used
// here only as an independent reference; the library never includes it.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "decayalg/blocking_kernel.hpp"
#include "decayalg/cd_operator.hpp"
#include "decayalg/dense.hpp"
#include "decayalg/nuclear.hpp"
#include "decayalg/rng.hpp"
#include "decayalg/seq_algebra.hpp"
#include "decayalg/weights.hpp"

namespace dtest {

using namespace decayalg;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

inline FiniteSeq random_seq(Rng& rng, int c, Coord radius, double sparsity = 0.0) {
  FiniteSeq a(c, radius);
  for (auto& v : a.values())
    if (rng.uniform01() >= sparsity) v = rng.complex_normal();
  return a;
}

inline TorusPoint random_torus_point(Rng& rng, int c) {
  TorusPoint u;
  for (int i = 0; i < c; ++i) u.phases.push_back(rng.uniform(0.0, 2.0 * M_PI));
  return u;
}

inline DenseBlock random_block(Rng& rng, std::size_t d, double scale = 1.0) {
  DenseBlock b(d);
  for (auto& v : b.data()) v = scale * rng.complex_normal();
  return b;
}

inline DenseBlock random_rank_block(Rng& rng, std::size_t d, std::size_t rank) {
  DenseBlock b(d);
  std::vector<cplx> y(d), a(d);
  for (std::size_t r = 0; r < rank; ++r) {
    for (auto& v : y) v = rng.complex_normal();
    for (auto& v : a) v = rng.complex_normal();
    b += DenseBlock::outer(y, a);
  }
  return b;
}

inline std::vector<cplx> random_vector(Rng& rng, std::size_t n) {
  std::vector<cplx> x(n);
  for (auto& v : x) v = rng.complex_normal();
  return x;
}

inline MatrixXcd to_eigen(const DenseBlock& b) {
  const auto d = static_cast<Eigen::Index>(b.dim());
  MatrixXcd m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = b(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return m;
}

inline DenseBlock from_eigen(const MatrixXcd& m) {
  DenseBlock b(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) b(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
  return b;
}

inline double eigen_op2(const MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<MatrixXcd>(m).singularValues()(0);
}

/// sum sqrt(eig(A^H A)) by a Hermitian eigensolver.
inline double eigen_trace_norm(const MatrixXcd& m) {
  const MatrixXcd h = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) s += std::sqrt(std::max(0.0, es.eigenvalues()(i)));
  return s;
}

inline double max_abs(const MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

inline CDOperator random_cd(Rng& rng, int c, Coord n, Coord w, std::size_t d, Boundary boundary, double fill = 1.0,
                            double scale = 1.0) {
  CDOperator t(c, n, w, d, boundary);
  for (std::size_t k = 0; k < t.window().size(); ++k)
    for (std::size_t m = 0; m < t.band().size(); ++m)
      if (rng.uniform01() < fill) t.set_block(t.window().index(k), t.band().index(m), random_block(rng, d, scale));
  return t;
}

inline CDOperator random_shift_invariant(Rng& rng, int c, Coord n, Coord w, std::size_t d, double scale = 1.0) {
  CDOperator t(c, n, w, d, Boundary::circulant);
  for (std::size_t m = 0; m < t.band().size(); ++m) t.set_band(t.band().index(m), random_block(rng, d, scale));
  return t;
}

inline BlockVector random_block_vector(Rng& rng, const CDOperator& t, Exponent p = Exponent::two) {
  BlockVector x(t.dim(), t.window_radius(), t.local_dim(), p);
  for (auto& v : x.data()) v = rng.complex_normal();
  return x;
}

/// Dense matrix built straight from the definition (Tx)_k = sum_m b_km x_{k-m},
/// independently of densify().
inline MatrixXcd reference_dense(const CDOperator& t) {
  const std::size_t d = t.local_dim();
  const auto n = static_cast<Eigen::Index>(t.window().size() * d);
  MatrixXcd m = MatrixXcd::Zero(n, n);
  const Window& win = t.window();
  for (std::size_t k = 0; k < win.size(); ++k) {
    const LatticeIndex kk = win.index(k);
    for (std::size_t mi = 0; mi < t.band().size(); ++mi) {
      const LatticeIndex off = t.band().index(mi);
      const DenseBlock* b = t.find_block(k, mi);
      if (!b) continue;
      LatticeIndex src = kk - off;
      if (t.boundary() == Boundary::circulant) {
        for (int a = 0; a < src.dim(); ++a) {
          const Coord side = win.side();
          Coord v = (src[a] + win.radius()) % side;
          if (v < 0) v += side;
          src[a] = v - win.radius();
        }
      } else if (!win.contains(src)) {
        continue;
      }
      const std::size_t l = win.linear(src);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          m(static_cast<Eigen::Index>(k * d + i), static_cast<Eigen::Index>(l * d + j)) += (*b)(i, j);
    }
  }
  return m;
}

}  // namespace dtest
