#include "decayalg/seq_algebra.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "decayalg/error.hpp"
#include "decayalg/fft.hpp"
#include "decayalg/simd/kernels.hpp"

namespace decayalg {

FiniteSeq::FiniteSeq(int c, Coord radius) : window_(c, radius), values_(window_.size()) {}

FiniteSeq FiniteSeq::delta(int c) { return basis(LatticeIndex::zero(c)); }

cplx FiniteSeq::operator[](const LatticeIndex& n) const {
  if (!window_.contains(n)) return {};
  return values_[window_.linear(n)];
}

void FiniteSeq::set(const LatticeIndex& n, cplx value) {
  require(window_.contains(n), ErrorKind::InvalidArgument, "index " + n.to_string() + " outside sequence support");
  values_[window_.linear(n)] = value;
}

void FiniteSeq::add(const LatticeIndex& n, cplx value) {
  require(window_.contains(n), ErrorKind::InvalidArgument, "index " + n.to_string() + " outside sequence support");
  values_[window_.linear(n)] += value;
}

FiniteSeq FiniteSeq::resized(Coord radius) const {
  FiniteSeq out(dim(), radius);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] == cplx{}) continue;
    const LatticeIndex n = window_.index(i);
    if (out.window_.contains(n)) out.values_[out.window_.linear(n)] = values_[i];
  }
  return out;
}

FiniteSeq& FiniteSeq::operator+=(const FiniteSeq& o) {
  require(dim() == o.dim(), ErrorKind::ShapeMismatch, "sequence dimension mismatch");
  if (o.radius() > radius()) *this = resized(o.radius());
  const FiniteSeq& src = o.radius() == radius() ? o : o.resized(radius());
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += src.values_[i];
  return *this;
}

FiniteSeq& FiniteSeq::operator-=(const FiniteSeq& o) {
  FiniteSeq neg = o;
  neg *= -1.0;
  return *this += neg;
}

FiniteSeq& FiniteSeq::operator*=(cplx s) {
  for (auto& v : values_) v *= s;
  return *this;
}

cplx TorusPoint::power(const LatticeIndex& n) const {
  require(n.dim() == dim(), ErrorKind::ShapeMismatch, "torus point / index dimension mismatch");
  double phase = 0.0;
  for (int j = 0; j < dim(); ++j) phase += phases[static_cast<std::size_t>(j)] * static_cast<double>(n[j]);
  return std::polar(1.0, phase);
}

FiniteSeq basis(const LatticeIndex& n) {
  Coord r = 0;
  for (Coord x : n.coords()) r = std::max<Coord>(r, x < 0 ? -x : x);
  FiniteSeq e(n.dim(), r);
  e.set(n, 1.0);
  return e;
}

double weighted_norm(const FiniteSeq& a, const Weight& g) {
  double s = 0.0;
  const auto vals = a.values();
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (vals[i] == cplx{}) continue;
    s += g(a.window().index(i)) * std::abs(vals[i]);
  }
  return s;
}

double l1_norm(const FiniteSeq& a) {
  double s = 0.0;
  for (const cplx& v : a.values()) s += std::abs(v);
  return s;
}

FiniteSeq convolve(const FiniteSeq& a, const FiniteSeq& b) {
  require(a.dim() == b.dim(), ErrorKind::ShapeMismatch, "convolve: dimension mismatch");
  const int c = a.dim();
  FiniteSeq out(c, a.radius() + b.radius());
  const Window& wa = a.window();
  const Window& wb = b.window();
  const Window& wo = out.window();
  const auto row = static_cast<std::size_t>(wb.side());
  const std::size_t rows = wb.size() / row;
  const auto av = a.values();
  const auto bv = b.values();
  auto ov = out.values();

  // Rows of b along the last axis stay contiguous after a shift by m, so each
  // (m, row) pair is one axpy.
  for (std::size_t i = 0; i < av.size(); ++i) {
    if (av[i] == cplx{}) continue;
    const LatticeIndex m = wa.index(i);
    for (std::size_t r = 0; r < rows; ++r) {
      LatticeIndex start = wb.index(r * row) + m;
      simd::axpy(av[i], bv.subspan(r * row, row), ov.subspan(wo.linear(start), row));
    }
  }
  return out;
}

cplx character_eval(const FiniteSeq& a, const TorusPoint& u) {
  require(u.dim() == a.dim(), ErrorKind::ShapeMismatch, "character_eval: dimension mismatch");
  cplx s{};
  const auto vals = a.values();
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (vals[i] == cplx{}) continue;
    s += u.power(a.window().index(i)) * vals[i];
  }
  return s;
}

TorusPoint SymbolGrid::point(std::size_t linear) const {
  TorusPoint u;
  u.phases.resize(static_cast<std::size_t>(c));
  for (int axis = c - 1; axis >= 0; --axis) {
    u.phases[static_cast<std::size_t>(axis)] =
        2.0 * std::numbers::pi * static_cast<double>(linear % n) / static_cast<double>(n);
    linear /= n;
  }
  return u;
}

namespace {

std::size_t grid_size(int c, std::size_t n) {
  std::size_t total = 1;
  for (int i = 0; i < c; ++i) total *= n;
  return total;
}

// Position of lattice index k on the periodic grid [0,N)^c.
std::size_t grid_linear(const LatticeIndex& k, std::size_t n) {
  const auto nn = static_cast<Coord>(n);
  std::size_t lin = 0;
  for (Coord x : k.coords()) lin = lin * n + static_cast<std::size_t>(((x % nn) + nn) % nn);
  return lin;
}

}  // namespace

SymbolGrid symbol_on_grid(const FiniteSeq& a, std::size_t n) {
  require(n >= static_cast<std::size_t>(2 * a.radius() + 1), ErrorKind::InvalidArgument,
          "symbol grid N must be >= 2R+1");
  SymbolGrid grid;
  grid.c = a.dim();
  grid.n = n;
  grid.values.assign(grid_size(a.dim(), n), cplx{});
  const auto vals = a.values();
  if (fft::is_power_of_two(n)) {
    for (std::size_t i = 0; i < vals.size(); ++i)
      if (vals[i] != cplx{}) grid.values[grid_linear(a.window().index(i), n)] += vals[i];
    fft::transform(grid.values, a.dim(), n, +1);
  } else {
    for (std::size_t j = 0; j < grid.values.size(); ++j) grid.values[j] = character_eval(a, grid.point(j));
  }
  return grid;
}

InvertibilityReport invertibility_test(const FiniteSeq& a, std::size_t n, double margin) {
  const SymbolGrid grid = symbol_on_grid(a, n);
  InvertibilityReport rep;
  rep.margin = margin;
  rep.grid = n;
  rep.min_modulus = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t j = 0; j < grid.values.size(); ++j) {
    const double m = std::abs(grid.values[j]);
    if (m < rep.min_modulus) {
      rep.min_modulus = m;
      arg = j;
    }
  }
  rep.argmin = grid.point(arg);
  rep.invertible = rep.min_modulus > margin;
  return rep;
}

WienerInverse wiener_inverse(const FiniteSeq& a, std::size_t n, Coord out_radius, std::optional<double> residual_cap) {
  require(out_radius >= 0, ErrorKind::InvalidArgument, "wiener_inverse: output radius must be >= 0");
  require(fft::is_power_of_two(n), ErrorKind::InvalidArgument, "wiener_inverse: grid N must be a power of two");
  require(n >= static_cast<std::size_t>(2 * (a.radius() + out_radius) + 2), ErrorKind::InvalidArgument,
          "wiener_inverse: grid N must be >= 2(R + R') + 2");

  SymbolGrid grid = symbol_on_grid(a, n);
  double min_mod = std::numeric_limits<double>::infinity();
  for (const cplx& v : grid.values) min_mod = std::min(min_mod, std::abs(v));
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * l1_norm(a);
  if (!(min_mod > floor))
    fail(ErrorKind::SymbolVanishes, "symbol minimum modulus " + std::to_string(min_mod) + " on the grid");

  for (cplx& v : grid.values) v = 1.0 / v;
  fft::transform(grid.values, a.dim(), n, -1);
  const double scale = 1.0 / static_cast<double>(grid.values.size());

  WienerInverse out;
  out.grid = n;
  out.min_modulus = min_mod;
  out.inverse = FiniteSeq(a.dim(), out_radius);
  const Window& w = out.inverse.window();
  for (std::size_t i = 0; i < w.size(); ++i)
    out.inverse.values()[i] = grid.values[grid_linear(w.index(i), n)] * scale;

  FiniteSeq defect = convolve(a, out.inverse);
  defect.add(LatticeIndex::zero(a.dim()), -1.0);
  out.residual = l1_norm(defect);
  if (residual_cap && out.residual > *residual_cap)
    fail(ErrorKind::AliasBudgetExceeded,
         "residual " + std::to_string(out.residual) + " exceeds cap " + std::to_string(*residual_cap));
  return out;
}

}  // namespace decayalg
