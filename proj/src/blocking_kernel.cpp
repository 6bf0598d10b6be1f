#include "decayalg/blocking_kernel.hpp"

#include <algorithm>
#include <cmath>

#include "decayalg/error.hpp"
#include "decayalg/simd/kernels.hpp"

namespace decayalg {
namespace {

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// |x|^p summed over one cell, or the max modulus for p = inf.
double cell_power_sum(std::span<const cplx> cell, Exponent p) {
  double s = 0.0;
  for (const cplx& v : cell) {
    const double a = std::abs(v);
    switch (p) {
      case Exponent::one: s += a; break;
      case Exponent::two: s += a * a; break;
      case Exponent::inf: s = std::max(s, a); break;
    }
  }
  return s;
}

double finish_norm(double total, Exponent p) { return p == Exponent::two ? std::sqrt(total) : total; }

}  // namespace

GridFunction::GridFunction(int c, Coord cell_window, std::size_t samples_per_axis)
    : cells_(c, cell_window), q_(samples_per_axis), per_cell_(ipow(samples_per_axis, c)),
      values_(cells_.size() * per_cell_) {
  require(samples_per_axis >= 1, ErrorKind::InvalidArgument, "samples per axis must be >= 1");
}

double GridFunction::cell_volume() const noexcept { return std::pow(1.0 / static_cast<double>(q_), dim()); }

BlockVector block(const GridFunction& x, Exponent p) {
  BlockVector v(x.dim(), x.cells().radius(), x.samples_per_cell(), p);
  std::copy(x.values().begin(), x.values().end(), v.data().begin());
  return v;
}

GridFunction unblock(const BlockVector& v, std::size_t samples_per_axis) {
  require(ipow(samples_per_axis, v.window().dim()) == v.local_dim(), ErrorKind::ShapeMismatch,
          "unblock: local dimension is not q^c");
  GridFunction x(v.window().dim(), v.window().radius(), samples_per_axis);
  std::copy(v.data().begin(), v.data().end(), x.values().begin());
  return x;
}

double lp_norm(const GridFunction& x, Exponent p) {
  const double h = x.cell_volume();
  double total = 0.0;
  for (std::size_t k = 0; k < x.cells().size(); ++k) {
    const double s = cell_power_sum(x.cell(k), p);
    if (p == Exponent::inf)
      total = std::max(total, s);
    else
      total += s * h;
  }
  return finish_norm(total, p);
}

double blocked_lp_norm(const BlockVector& v, Exponent p, double cell_volume) {
  // ||x_m||_{L_p}^p per cell, then the l_p sum over cells.
  double total = 0.0;
  for (std::size_t k = 0; k < v.window().size(); ++k) {
    const double cell_p = cell_power_sum(v.cell(k), p);
    if (p == Exponent::inf)
      total = std::max(total, cell_p);
    else
      total += cell_p * cell_volume;
  }
  return finish_norm(total, p);
}

Kernel::Kernel(int c, Coord cell_window, Coord band_radius, std::size_t samples_per_axis, Boundary boundary)
    : blocks_(c, cell_window, band_radius, ipow(samples_per_axis, c), boundary), q_(samples_per_axis) {}

double Kernel::cell_volume() const noexcept { return std::pow(1.0 / static_cast<double>(q_), blocks_.dim()); }

const NuclearFactorization* FactorizedOperator::find(std::size_t k_lin, std::size_t m_lin) const {
  const std::size_t idx = k_lin * op.band().size() + m_lin;
  if (idx >= factors.size() || !factors[idx]) return nullptr;
  return &*factors[idx];
}

FactorizedOperator factorize_blocks(const CDOperator& t) {
  FactorizedOperator f{t, std::vector<std::optional<NuclearFactorization>>(t.window().size() * t.band().size())};
  for (std::size_t k = 0; k < t.window().size(); ++k)
    for (std::size_t m = 0; m < t.band().size(); ++m)
      if (const DenseBlock* b = t.find_block(k, m)) f.factors[k * t.band().size() + m] = nuclear_factorization(*b);
  return f;
}

Kernel assemble_kernel(const FactorizedOperator& t, std::size_t samples_per_axis) {
  const CDOperator& op = t.op;
  require(ipow(samples_per_axis, op.dim()) == op.local_dim(), ErrorKind::ShapeMismatch,
          "assemble_kernel: local dimension must equal q^c");
  Kernel kern(op.dim(), op.window_radius(), op.band_radius(), samples_per_axis, op.boundary());
  const double inv_h = 1.0 / kern.cell_volume();
  const std::size_t d = op.local_dim();
  for (std::size_t k = 0; k < op.window().size(); ++k) {
    for (std::size_t m = 0; m < op.band().size(); ++m) {
      if (!op.find_block(k, m)) continue;
      const NuclearFactorization* f = t.find(k, m);
      if (!f)
        fail(ErrorKind::MissingFactorization, "block (" + op.window().index(k).to_string() + ", " +
                                                  op.band().index(m).to_string() + ") has no factorisation");
      require(f->dim == d, ErrorKind::ShapeMismatch, "factorisation dimension mismatch");
      DenseBlock kb(d);
      for (const auto& term : f->terms)
        for (std::size_t i = 0; i < d; ++i) simd::axpy(term.vector[i] * inv_h, term.functional, kb.row(i));
      kern.blocks().set_block(op.window().index(k), op.band().index(m), std::move(kb));
    }
  }
  return kern;
}

GridFunction apply_kernel(const Kernel& k, const GridFunction& x) {
  const CDOperator& ops = k.blocks();
  require(x.cells() == ops.window() && x.samples_per_axis() == k.samples_per_axis(), ErrorKind::ShapeMismatch,
          "apply_kernel: grid does not match kernel");
  const double h = k.cell_volume();
  GridFunction y(x.dim(), x.cells().radius(), x.samples_per_axis());
  std::vector<cplx> weighted(x.samples_per_cell());
  for (std::size_t kc = 0; kc < ops.window().size(); ++kc) {
    auto out = y.cell(kc);
    for (std::size_t m = 0; m < ops.band().size(); ++m) {
      const DenseBlock* b = ops.find_block(kc, m);
      if (!b) continue;
      const auto l = ops.source_cell(kc, ops.band().index(m));
      if (!l) continue;
      const auto src = x.cell(*l);
      for (std::size_t j = 0; j < src.size(); ++j) weighted[j] = src[j] * h;
      matvec_add(*b, weighted, out);
    }
  }
  return y;
}

}  // namespace decayalg
