#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "decayalg/error.hpp"
#include "support.hpp"

using namespace dtest;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidArgument;
}

VectorXcd as_eigen(const BlockVector& x) {
  return Eigen::Map<const VectorXcd>(x.data().data(), static_cast<Eigen::Index>(x.data().size()));
}

double p_norm(const BlockVector& x) { return x.norm(); }

// Greedy nearest matching of two eigenvalue multisets; returns the worst distance.
double multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
  double worst = 0;
  for (cplx v : a) {
    auto it = std::min_element(b.begin(), b.end(), [&](cplx x, cplx y) { return std::abs(x - v) < std::abs(y - v); });
    worst = std::max(worst, std::abs(*it - v));
    b.erase(it);
  }
  return worst;
}

}  // namespace

TEST_SUITE("cd_operator") {
  TEST_CASE("construction limits") {
    CHECK_THROWS_AS(CDOperator(1, 3, 4, 2, Boundary::circulant), Error);
    CHECK_NOTHROW(CDOperator(1, 3, 6, 2, Boundary::dirichlet));
    CHECK_THROWS_AS(CDOperator(1, 3, 7, 2, Boundary::dirichlet), Error);
    CDOperator t(1, 3, 1, 2);
    CHECK_THROWS_AS(t.set_block({0}, {2}, DenseBlock(2)), Error);
    CHECK_THROWS_AS(t.set_block({0}, {1}, DenseBlock(3)), Error);
    CHECK(boundary_from_string(to_string(Boundary::dirichlet)) == Boundary::dirichlet);
  }

  TEST_CASE("property: densify matches the definition") {
    Rng rng(1);
    for (int rep = 0; rep < 40; ++rep) {
      const int c = static_cast<int>(rng.uniform_int(1, 2));
      const Boundary bd = rep % 2 ? Boundary::circulant : Boundary::dirichlet;
      const Coord n = rng.uniform_int(1, c == 1 ? 5 : 2);
      const Coord w = rng.uniform_int(0, bd == Boundary::circulant ? n : 2 * n);
      const CDOperator t = random_cd(rng, c, n, w, 1 + static_cast<std::size_t>(rng.uniform_int(0, 2)), bd, 0.7);
      CHECK(max_abs(to_eigen(densify(t)) - reference_dense(t)) == 0.0);
    }
  }

  TEST_CASE("fit envelope") {
    CDOperator zero(1, 4, 2, 3);
    for (double v : fit_envelope(zero, NormKind::nuclear()).values) CHECK(v == 0.0);

    CDOperator t(2, 3, 2, 3);
    for (std::size_t m = 0; m < t.band().size(); ++m) {
      const LatticeIndex off = t.band().index(m);
      t.set_band(off, std::exp(-norm(off, IndexNorm::l1)) * DenseBlock::identity(3));
    }
    const Envelope e = fit_envelope(t, NormKind::nuclear());
    for (std::size_t m = 0; m < e.band.size(); ++m)
      CHECK(rel_diff(e.values[m], 3 * std::exp(-norm(e.band.index(m), IndexNorm::l1))) <= 1e-13);

    Rng rng(2);
    for (int rep = 0; rep < 10; ++rep) {
      const CDOperator r = random_cd(rng, 1, 5, 3, 3, Boundary::circulant, 0.6);
      for (NormKind k : {NormKind::nuclear(), NormKind::op(Exponent::one), NormKind::op(Exponent::two), NormKind::op(Exponent::inf)}) {
        const Envelope env = fit_envelope(r, k);
        CHECK(domination_excess(env, r, k) <= 0.0);
        // tight: each nonzero beta_m is attained by some stored block
        for (std::size_t m = 0; m < env.band.size(); ++m) {
          double best = 0;
          for (std::size_t kk = 0; kk < r.window().size(); ++kk)
            if (const DenseBlock* b = r.find_block(kk, m)) best = std::max(best, block_norm(*b, k));
          CHECK(best == env.values[m]);
        }
      }
    }
  }

  TEST_CASE("apply examples") {
    Rng rng(3);
    const CDOperator id = CDOperator::identity(1, 4, 3);
    const BlockVector x = random_block_vector(rng, id);
    CHECK(apply(id, x) == x);

    CDOperator shift(1, 4, 1, 3);
    shift.set_band({1}, 2.0 * DenseBlock::identity(3));
    const BlockVector y = apply(shift, x);
    for (Coord k = -4; k <= 4; ++k) {
      const LatticeIndex src = shift.window().wrap({k - 1});
      for (std::size_t i = 0; i < 3; ++i) CHECK(y.cell(LatticeIndex{k})[i] == 2.0 * x.cell(src)[i]);
    }

    CHECK_THROWS_AS(apply(id, BlockVector(1, 3, 3)), Error);
    CHECK_THROWS_AS(apply(id, BlockVector(1, 4, 2)), Error);
  }

  TEST_CASE("property: apply equals the dense product") {
    Rng rng(4);
    for (int rep = 0; rep < 30; ++rep) {
      const Boundary bd = rep % 2 ? Boundary::circulant : Boundary::dirichlet;
      const CDOperator t = random_cd(rng, 1 + rep % 2, 2, 1, 2, bd, 0.8);
      const BlockVector x = random_block_vector(rng, t);
      const VectorXcd ref = reference_dense(t) * as_eigen(x);
      CHECK((as_eigen(apply(t, x)) - ref).cwiseAbs().maxCoeff() <= 1e-12 * (1 + ref.cwiseAbs().maxCoeff()));
    }
  }

  TEST_CASE("property: norm bound by the l1 norm of the operator envelope") {
    Rng rng(5);
    for (int rep = 0; rep < 100; ++rep) {
      const Exponent p = static_cast<Exponent>(rep % 3);
      const Boundary bd = rep % 2 ? Boundary::circulant : Boundary::dirichlet;
      const CDOperator t = random_cd(rng, 1 + (rep / 3) % 2, 3, 2, 3, bd, 0.7);
      const BlockVector x = random_block_vector(rng, t, p);
      const double beta = fit_envelope(t, NormKind::op(p)).l1();
      CHECK(p_norm(apply(t, x)) <= beta * p_norm(x) * (1 + 1e-10));
    }
  }

  TEST_CASE("compose examples") {
    Rng rng(6);
    const CDOperator t = random_cd(rng, 1, 4, 2, 3, Boundary::circulant, 0.8);
    const CDOperator kt = compose(CDOperator::identity(1, 4, 3), t);
    CHECK(max_abs(to_eigen(densify(kt)) - to_eigen(densify(t))) == 0.0);

    const DenseBlock a = random_block(rng, 2), b = random_block(rng, 2);
    CDOperator k1(1, 5, 2, 2), t1(1, 5, 1, 2);
    k1.set_band({2}, a);
    t1.set_band({-1}, b);
    const CDOperator p = compose(k1, t1);
    CHECK(p.band_radius() == 3);
    for (std::size_t k = 0; k < p.window().size(); ++k)
      for (std::size_t m = 0; m < p.band().size(); ++m) {
        const DenseBlock* blk = p.find_block(k, m);
        if (p.band().index(m) == LatticeIndex{1}) {
          REQUIRE(blk);
          CHECK(max_abs_diff(*blk, a * b) <= 1e-15);
        } else {
          CHECK((!blk || blk->is_zero()));
        }
      }
    CHECK_THROWS_AS(compose(CDOperator(1, 4, 1, 2), CDOperator(1, 5, 1, 2)), Error);
    CHECK_THROWS_AS(compose(CDOperator(1, 4, 1, 2, Boundary::dirichlet), CDOperator(1, 4, 1, 2)), Error);
  }

  TEST_CASE("property: densify is multiplicative under compose") {
    Rng rng(7);
    for (int rep = 0; rep < 60; ++rep) {
      const Boundary bd = rep % 2 ? Boundary::circulant : Boundary::dirichlet;
      const int c = rep % 3 == 0 ? 2 : 1;
      const Coord n = rng.uniform_int(1, c == 1 ? 6 : 2);
      const Coord lim = bd == Boundary::circulant ? n : 2 * n;
      const std::size_t d = 1 + static_cast<std::size_t>(rng.uniform_int(0, 3));
      const CDOperator k = random_cd(rng, c, n, rng.uniform_int(0, lim), d, bd, 0.8);
      const CDOperator t = random_cd(rng, c, n, rng.uniform_int(0, lim), d, bd, 0.8);
      const MatrixXcd ref = reference_dense(k) * reference_dense(t);
      CHECK(max_abs(to_eigen(densify(compose(k, t))) - ref) <= 1e-12);
    }
  }

  TEST_CASE("property: composition envelope is dominated by the envelope convolution") {
    Rng rng(8);
    for (int rep = 0; rep < 40; ++rep) {
      const Boundary bd = rep % 2 ? Boundary::circulant : Boundary::dirichlet;
      const Coord n = rng.uniform_int(2, 5);
      const CDOperator k = random_cd(rng, 1, n, rng.uniform_int(0, n / 2 + 1), 3, bd, 0.8);
      const CDOperator t = random_cd(rng, 1, n, rng.uniform_int(0, n / 2 + 1), 3, bd, 0.8);
      const CDOperator kt = compose(k, t);
      const Envelope alpha = fit_envelope(k, NormKind::nuclear()), beta = fit_envelope(t, NormKind::nuclear());
      const Envelope ab = convolve_envelopes(alpha, beta, bd == Boundary::circulant ? std::optional<Coord>(n) : std::nullopt);
      const Envelope fit = fit_envelope(kt, NormKind::nuclear());
      for (std::size_t m = 0; m < fit.band.size(); ++m) CHECK(fit.values[m] <= ab[fit.band.index(m)] + 1e-10);
    }
  }

  TEST_CASE("shift decomposition") {
    CHECK(shift_decomposition(CDOperator(1, 3, 1, 2)).empty());
    CDOperator single(1, 3, 1, 2);
    single.set_band({-1}, DenseBlock::identity(2));
    const auto terms = shift_decomposition(single);
    REQUIRE(terms.size() == 1);
    CHECK(terms[0].offset == LatticeIndex{-1});

    Rng rng(9);
    for (int rep = 0; rep < 30; ++rep) {
      const Boundary bd = rep % 2 ? Boundary::circulant : Boundary::dirichlet;
      const CDOperator t = random_cd(rng, 1 + rep % 2, 2, 1, 2, bd, 0.6);
      const auto ts = shift_decomposition(t);
      CDOperator sum(t.dim(), t.window_radius(), t.band_radius(), t.local_dim(), t.boundary());
      MatrixXcd dense = MatrixXcd::Zero(reference_dense(t).rows(), reference_dense(t).cols());
      for (const auto& term : ts) dense += to_eigen(densify(term_operator(term, t)));
      CHECK(max_abs(dense - to_eigen(densify(t))) == 0.0);
      const BlockVector x = random_block_vector(rng, t);
      CHECK(apply_terms(ts, t, x) == apply(t, x));  // bit-identical
    }
  }

  TEST_CASE("laurent symbol") {
    TorusPoint u{{1.234}};
    CHECK(max_abs_diff(laurent_symbol(CDOperator::identity(1, 3, 2), u), DenseBlock::identity(2)) == 0.0);

    CDOperator s(1, 5, 1, 1);
    s.set_band({0}, 2.0 * DenseBlock::identity(1));
    s.set_band({1}, DenseBlock::identity(1));
    CHECK(std::abs(laurent_symbol(s, u)(0, 0) - (2.0 + std::polar(1.0, 1.234))) <= 1e-15);
    const auto inv = laurent_invertibility_test(s, 256, 0.5);
    CHECK(inv.invertible);
    CHECK(inv.min_sigma == doctest::Approx(1.0).epsilon(1e-12));

    CDOperator bad(1, 5, 1, 1);
    bad.set_band({0}, DenseBlock::identity(1));
    bad.set_band({1}, -1.0 * DenseBlock::identity(1));
    const auto r = laurent_invertibility_test(bad, 256, 1e-6);
    CHECK_FALSE(r.invertible);
    CHECK(r.min_sigma <= 1e-12);

    CDOperator d2(1, 5, 1, 2);
    const std::vector<cplx> dg{2.0, 3.0};
    d2.set_band({0}, DenseBlock::diagonal(dg));
    d2.set_band({1}, DenseBlock::identity(2));
    CHECK(laurent_invertibility_test(d2, 256, 0.0).min_sigma == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(laurent_invertibility_test(CDOperator::identity(2, 2, 3), 16, 0.5).min_sigma == doctest::Approx(1.0));

    Rng rng(10);
    const CDOperator varying = random_cd(rng, 1, 3, 1, 2, Boundary::circulant);
    CHECK(kind_of([&] { laurent_symbol(varying, u); }) == ErrorKind::NotShiftInvariant);
    CHECK(kind_of([&] { laurent_invertibility_test(varying, 16, 0.1); }) == ErrorKind::NotShiftInvariant);
  }

  TEST_CASE("property: circulant eigenvalues equal the symbol eigenvalues") {
    Rng rng(11);
    for (int rep = 0; rep < 10; ++rep) {
      const int c = 1 + rep % 2;
      const Coord n = c == 1 ? rng.uniform_int(2, 6) : 2;
      const std::size_t d = 1 + static_cast<std::size_t>(rng.uniform_int(0, 2));
      const CDOperator t = random_shift_invariant(rng, c, n, rng.uniform_int(0, n), d);
      Eigen::ComplexEigenSolver<MatrixXcd> es(reference_dense(t), false);
      std::vector<cplx> lhs(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
      std::vector<cplx> rhs;
      const Window grid(c, n);
      for (std::size_t j = 0; j < grid.size(); ++j) {
        TorusPoint u;
        for (int a = 0; a < c; ++a) u.phases.push_back(2 * M_PI * static_cast<double>(grid.index(j)[a] + n) / static_cast<double>(2 * n + 1));
        Eigen::ComplexEigenSolver<MatrixXcd> s(to_eigen(laurent_symbol(t, u)), false);
        for (Eigen::Index i = 0; i < s.eigenvalues().size(); ++i) rhs.push_back(s.eigenvalues()(i));
      }
      REQUIRE(lhs.size() == rhs.size());
      CHECK(multiset_distance(lhs, rhs) <= 1e-9);
    }
  }

  TEST_CASE("invert 1 + T: zero operator") {
    const InverseOnePlus r = invert_one_plus(CDOperator(1, 4, 1, 2), Weight::constant());
    for (std::size_t k = 0; k < r.t1.window().size(); ++k)
      for (std::size_t m = 0; m < r.t1.band().size(); ++m)
        if (const DenseBlock* b = r.t1.find_block(k, m)) CHECK(b->is_zero());
    CHECK(r.residual == 0.0);
    CHECK(r.t1.band_radius() == 4);
    CHECK_FALSE(envelope_decay_slope(r.envelope_report, IndexNorm::l1).has_value());
  }

  TEST_CASE("invert 1 + alpha S against the periodic geometric series") {
    const Coord n = 12;
    const Coord len = 2 * n + 1;
    for (cplx alpha : {cplx(0.5), cplx(-0.3, 0.4), cplx(0.8)}) {
      CDOperator t(1, n, 1, 1);
      t.set_band({1}, alpha * DenseBlock::identity(1));
      const InverseOnePlus r = invert_one_plus(t, Weight::constant());
      // (1 + alpha S)^-1 = sum_j (-alpha)^j S^j with S^len = 1
      const cplx denom = 1.0 - std::pow(-alpha, static_cast<double>(len));
      for (Coord m = -n; m <= n; ++m) {
        const Coord j = m >= 0 ? m : len + m;
        cplx exact = std::pow(-alpha, static_cast<double>(j)) / denom;
        if (m == 0) exact -= 1.0;
        CHECK(std::abs(r.envelope[{m}] - std::abs(exact)) <= 1e-13);
      }
      CHECK(r.residual <= 1e-13);
    }
  }

  TEST_CASE("invert 1 + T for a random locally nuclear operator") {
    Rng rng(12);
    CDOperator t(1, 16, 2, 4);
    for (std::size_t k = 0; k < t.window().size(); ++k)
      for (std::size_t m = 0; m < t.band().size(); ++m) {
        const LatticeIndex off = t.band().index(m);
        DenseBlock b = random_rank_block(rng, 4, 4);
        b *= 0.5 * std::exp(-norm(off, IndexNorm::l1)) * rng.uniform(0.5, 1.0) / trace_norm(b);
        t.set_block(t.window().index(k), off, b);
      }
    const InverseOnePlus r = invert_one_plus(t, Weight(0.5, 0.5, 0, 0));
    CHECK(r.residual <= 1e-10);
    const auto slope = envelope_decay_slope(r.envelope_report, IndexNorm::l1);
    REQUIRE(slope.has_value());
    CHECK(*slope < 0.0);
    CHECK(domination_excess(r.envelope, r.t1, NormKind::nuclear()) <= 0.0);

    // (1 + T)(1 + T1) x = x
    const BlockVector x = random_block_vector(rng, t);
    const BlockVector y = apply(plus_identity(t), apply(plus_identity(r.t1), x));
    CHECK((as_eigen(y) - as_eigen(x)).norm() <= 1e-8 * as_eigen(x).norm());
  }

  TEST_CASE("invert 1 + T errors") {
    CHECK(kind_of([] { invert_one_plus(CDOperator(1, 3, 1, 2, Boundary::dirichlet), Weight()); }) ==
          ErrorKind::InvalidArgument);
    CDOperator sing(1, 3, 0, 1);
    sing.set_band({0}, -1.0 * DenseBlock::identity(1));
    CHECK(kind_of([&] { invert_one_plus(sing, Weight()); }) == ErrorKind::NumericallySingular);
  }

  TEST_CASE("envelope table, slope and final shell") {
    Envelope e{Window(1, 4), std::vector<double>(9)};
    for (std::size_t i = 0; i < 9; ++i) e.values[i] = std::exp(-0.7 * std::abs(static_cast<double>(e.band.index(i)[0])));
    const Weight g = Weight::polynomial(1);
    const auto rows = envelope_table(e, g);
    REQUIRE(rows.size() == 9);
    CHECK(rows[0].m == LatticeIndex{0});
    CHECK(rows[1].m == LatticeIndex{-1});
    CHECK(rows[2].m == LatticeIndex{1});
    double cum = 0;
    for (const auto& r : rows) {
      CHECK(r.weight == g(r.m));
      CHECK(r.weighted_beta == r.weight * r.beta);
      cum += r.weighted_beta;
      CHECK(r.cumsum == cum);
    }
    CHECK(*envelope_decay_slope(rows, IndexNorm::l1) == doctest::Approx(-0.7).epsilon(1e-12));
    const double last = 2 * 5 * std::exp(-2.8);
    CHECK(final_shell_fraction(rows, IndexNorm::l1) == doctest::Approx(last / cum).epsilon(1e-12));

    // entries below the floor are ignored by the fit
    e.values[e.band.linear({4})] = 1e-20;
    e.values[e.band.linear({-4})] = 1e-20;
    CHECK(*envelope_decay_slope(envelope_table(e, g), IndexNorm::l1) == doctest::Approx(-0.7).epsilon(1e-12));
  }
}
