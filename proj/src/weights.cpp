#include "decayalg/weights.hpp"

#include <cmath>
#include <numbers>

#include "decayalg/error.hpp"

namespace decayalg {

Weight::Weight(double a, double b, double s, double t, IndexNorm index_norm)
    : a_(a), b_(b), s_(s), t_(t), norm_(index_norm) {
  require(std::isfinite(a) && a >= 0.0, ErrorKind::InvalidArgument, "weight parameter a must be >= 0");
  require(std::isfinite(b) && b >= 0.0 && b < 1.0, ErrorKind::InvalidArgument, "weight parameter b must lie in [0,1)");
  require(std::isfinite(s) && s >= 0.0, ErrorKind::InvalidArgument, "weight parameter s must be >= 0");
  require(std::isfinite(t) && t >= 0.0, ErrorKind::InvalidArgument, "weight parameter t must be >= 0");
}

double Weight::eval_radial(double r) const {
  if (r == 0.0) return 1.0;  // every factor is exactly 1 at the origin
  double g = 1.0;
  if (a_ != 0.0) g *= std::exp(a_ * std::pow(r, b_));
  if (s_ != 0.0) g *= std::pow(1.0 + r, s_);
  if (t_ != 0.0) g *= std::pow(std::log(std::numbers::e + r), t_);
  return g;
}

double Weight::log_radial(double r) const {
  if (r == 0.0) return 0.0;
  double lg = 0.0;
  if (a_ != 0.0) lg += a_ * std::pow(r, b_);
  if (s_ != 0.0) lg += s_ * std::log1p(r);
  if (t_ != 0.0) lg += t_ * std::log(std::log(std::numbers::e + r));
  return lg;
}

bool AxiomReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

AxiomReport verify_axioms(const Weight& w, int c, Coord window_radius) {
  require(window_radius >= 1, ErrorKind::InvalidArgument, "window radius must be >= 1");
  const Window win(c, window_radius);
  AxiomReport rep;
  rep.c = c;
  rep.window_radius = window_radius;

  AxiomCheck unit;
  unit.axiom = "(a) g(0) = 1";
  const double g0 = w(LatticeIndex::zero(c));
  if (g0 != 1.0) {
    unit.pass = false;
    unit.worst_violation = std::abs(g0 - 1.0);
    unit.witness_m = LatticeIndex::zero(c);
  }

  std::vector<double> values(win.size());
  for (std::size_t i = 0; i < win.size(); ++i) values[i] = w(win.index(i));

  AxiomCheck sub;
  sub.axiom = "(b) g(m+n) <= g(m) g(n)";
  for (std::size_t i = 0; i < win.size(); ++i) {
    const LatticeIndex m = win.index(i);
    for (std::size_t j = 0; j < win.size(); ++j) {
      const LatticeIndex n = win.index(j);
      const LatticeIndex mn = m + n;
      if (!win.contains(mn)) continue;
      const double lhs = values[win.linear(mn)];
      const double rhs = values[i] * values[j];
      const double excess = lhs - rhs * (1.0 + 1e-12);
      if (excess > 0.0 && excess > sub.worst_violation) {
        sub.pass = false;
        sub.worst_violation = excess;
        sub.witness_m = m;
        sub.witness_n = n;
      }
    }
  }

  AxiomCheck sym;
  sym.axiom = "(c) g(-n) = g(n)";
  AxiomCheck ge1;
  ge1.axiom = "(d) g(n) >= 1";
  for (std::size_t i = 0; i < win.size(); ++i) {
    const LatticeIndex n = win.index(i);
    const double diff = std::abs(values[i] - values[win.linear(-n)]);
    if (diff > sym.worst_violation) {
      sym.pass = false;
      sym.worst_violation = diff;
      sym.witness_m = n;
    }
    if (values[i] < 1.0 && 1.0 - values[i] > ge1.worst_violation) {
      ge1.pass = false;
      ge1.worst_violation = 1.0 - values[i];
      ge1.witness_m = n;
    }
  }

  rep.checks = {unit, sub, sym, ge1};
  return rep;
}

std::vector<double> grs_sequence(const Weight& w, const LatticeIndex& t, int n_max) {
  require(!t.is_zero(), ErrorKind::InvalidArgument, "grs_sequence direction t must be nonzero");
  require(n_max >= 2, ErrorKind::InvalidArgument, "grs_sequence needs n_max >= 2");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_max));
  // |n t| = n |t| for every supported norm, so evaluate radially.
  const double tn = norm(t, w.index_norm());
  for (int n = 1; n <= n_max; ++n) out.push_back(w.log_radial(n * tn) / n);
  return out;
}

}  // namespace decayalg
