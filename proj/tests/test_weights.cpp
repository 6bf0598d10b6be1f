#include <cmath>

#include "doctest.h"
#include "decayalg/error.hpp"
#include "support.hpp"

using namespace dtest;

namespace {

double direct(double a, double b, double s, double t, double r) {
  return std::exp(a * std::pow(r, b)) * std::pow(1 + r, s) * std::pow(std::log(M_E + r), t);
}

std::vector<Weight> family_grid() {
  std::vector<Weight> out;
  for (double a : {0.0, 0.5})
    for (double b : {0.0, 0.5})
      for (double s : {0.0, 1.0, 2.0})
        for (double t : {0.0, 1.0}) out.emplace_back(a, b, s, t);
  return out;
}

}  // namespace

TEST_SUITE("weights") {
  TEST_CASE("evaluation") {
    CHECK(Weight::constant()({7, -3}) == 1.0);
    CHECK(Weight::polynomial(2)({3}) == 16.0);
    CHECK(Weight::polynomial(0)({0}) == 1.0);
    // |(3,-4)| under each norm
    CHECK(Weight::polynomial(1, IndexNorm::l1)({3, -4}) == 8.0);
    CHECK(Weight::polynomial(1, IndexNorm::l2)({3, -4}) == doctest::Approx(6.0));
    CHECK(Weight::polynomial(1, IndexNorm::linf)({3, -4}) == 5.0);
  }

  TEST_CASE("matches the closed formula") {
    Rng rng(1);
    for (int rep = 0; rep < 200; ++rep) {
      const double a = rng.uniform(0, 2), b = rng.uniform(0, 0.99), s = rng.uniform(0, 3), t = rng.uniform(0, 2);
      const Weight w(a, b, s, t);
      const LatticeIndex n{rng.uniform_int(-20, 20), rng.uniform_int(-20, 20)};
      const double r = static_cast<double>(std::abs(n[0]) + std::abs(n[1]));
      CHECK(rel_diff(w(n), r == 0 ? 1.0 : direct(a, b, s, t, r)) <= 1e-13);
      CHECK(w(n) == w(-n));
      CHECK(std::log(w(n)) == doctest::Approx(w.log_radial(r)).epsilon(1e-12));
    }
  }

  TEST_CASE("g(0) is exactly one even when b = 0") {
    // 0^0 would give exp(a); the family has g(0) = 1 by definition.
    const Weight w(0.7, 0.0, 1.5, 2.0);
    CHECK(w(LatticeIndex::zero(3)) == 1.0);
  }

  TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(Weight(1, 1.0, 0, 0), Error);
    CHECK_THROWS_AS(Weight(-0.1, 0.5, 0, 0), Error);
    CHECK_THROWS_AS(Weight(0, -0.1, 0, 0), Error);
    CHECK_THROWS_AS(Weight(0, 0, -1, 0), Error);
    CHECK_THROWS_AS(Weight(0, 0, 0, -1), Error);
    CHECK_THROWS_AS(Weight(std::nan(""), 0, 0, 0), Error);
    try {
      Weight(1, 1.0, 0, 0);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidArgument);
    }
  }

  TEST_CASE("axioms hold for the whole family") {
    for (const Weight& w : family_grid())
      for (int c : {1, 2}) {
        const AxiomReport rep = verify_axioms(w, c, c == 1 ? 8 : 5);
        CHECK(rep.all_pass());
        CHECK(rep.checks.size() == 4);
      }
    CHECK(verify_axioms(Weight::polynomial(2), 1, 5).all_pass());
    CHECK(verify_axioms(Weight::subexponential(0.5, 0.5, 1), 2, 8).all_pass());
    for (IndexNorm k : {IndexNorm::l2, IndexNorm::linf})
      CHECK(verify_axioms(Weight(0.5, 0.5, 2, 1, k), 2, 6).all_pass());
  }

  TEST_CASE("c = 3 submultiplicativity on a small cube") {
    CHECK(verify_axioms(Weight(0.5, 0.5, 2, 1), 3, 3).all_pass());
  }

  TEST_CASE("grs sequence") {
    const auto zero = grs_sequence(Weight::constant(), {1}, 10);
    CHECK(zero.size() == 10);
    for (double v : zero) CHECK(v == 0.0);

    const auto poly = grs_sequence(Weight::polynomial(2), {1}, 100);
    CHECK(poly.back() <= 0.1);
    CHECK(poly.back() <= poly.front());
    CHECK(poly[99] == doctest::Approx(2 * std::log(101.0) / 100).epsilon(1e-13));

    const auto sub = grs_sequence(Weight::subexponential(1, 0.5), {1}, 10000);
    CHECK(sub.back() <= 0.02);
    CHECK(sub.back() == doctest::Approx(0.01).epsilon(1e-12));

    CHECK_THROWS_AS(grs_sequence(Weight::constant(), {0}, 10), Error);
    CHECK_THROWS_AS(grs_sequence(Weight::constant(), {1}, 1), Error);
  }

  TEST_CASE("property: grs tail average below head average") {
    for (const Weight& w : family_grid()) {
      if (w({1}) == 1.0) continue;  // a = s = t = 0 is the constant weight whatever b is
      for (const LatticeIndex& t : {LatticeIndex{1}, LatticeIndex{-2}, LatticeIndex{1, 1}}) {
        const auto g = grs_sequence(w, t, 200);
        double head = 0, tail = 0;
        for (int i = 0; i < 20; ++i) {
          head += g[static_cast<std::size_t>(i)];
          tail += g[static_cast<std::size_t>(180 + i)];
        }
        CHECK(tail < head);
      }
    }
  }

  TEST_CASE("property: random submultiplicativity and symmetry up to c = 3") {
    Rng rng(2);
    for (int rep = 0; rep < 2000; ++rep) {
      const Weight w(rng.uniform(0, 1), rng.uniform(0, 0.95), rng.uniform(0, 3), rng.uniform(0, 2),
                     static_cast<IndexNorm>(rng.uniform_int(0, 2)));
      const int c = static_cast<int>(rng.uniform_int(1, 3));
      LatticeIndex m = LatticeIndex::zero(c), n = LatticeIndex::zero(c);
      for (int i = 0; i < c; ++i) {
        m[i] = rng.uniform_int(-8, 8);
        n[i] = rng.uniform_int(-8, 8);
      }
      CHECK(w(m + n) <= w(m) * w(n) * (1 + 1e-12));
      CHECK(w(m) == w(-m));
      CHECK(w(m) >= 1.0);
    }
  }
}
