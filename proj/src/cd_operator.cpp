#include "decayalg/cd_operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "decayalg/error.hpp"

namespace decayalg {

std::string to_string(Boundary b) { return b == Boundary::circulant ? "circulant" : "dirichlet"; }

Boundary boundary_from_string(const std::string& s) {
  if (s == "circulant") return Boundary::circulant;
  if (s == "dirichlet") return Boundary::dirichlet;
  fail(ErrorKind::Format, "unknown boundary '" + s + "'");
}

// ---------------------------------------------------------------- BlockVector

BlockVector::BlockVector(int c, Coord window_radius, std::size_t local_dim, Exponent p)
    : window_(c, window_radius), d_(local_dim), p_(p), data_(window_.size() * local_dim) {
  require(local_dim >= 1, ErrorKind::InvalidArgument, "local dimension must be >= 1");
}

double BlockVector::norm() const {
  if (p_ == Exponent::inf) {
    double m = 0.0;
    for (std::size_t k = 0; k < window_.size(); ++k) m = std::max(m, vector_norm(cell(k), Exponent::inf));
    return m;
  }
  const double p = p_ == Exponent::one ? 1.0 : 2.0;
  double s = 0.0;
  for (std::size_t k = 0; k < window_.size(); ++k) s += std::pow(vector_norm(cell(k), p_), p);
  return std::pow(s, 1.0 / p);
}

BlockVector& BlockVector::operator+=(const BlockVector& o) {
  require(window_ == o.window_ && d_ == o.d_, ErrorKind::ShapeMismatch, "block vector shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

// ----------------------------------------------------------------- CDOperator

CDOperator::CDOperator(int c, Coord window_radius, Coord band_radius, std::size_t local_dim, Boundary boundary)
    : window_(c, window_radius), band_(c, band_radius), d_(local_dim), boundary_(boundary) {
  require(local_dim >= 1, ErrorKind::InvalidArgument, "local dimension must be >= 1");
  if (boundary == Boundary::circulant)
    require(band_radius <= window_radius, ErrorKind::InvalidArgument, "circulant band radius must be <= window radius");
  else
    require(band_radius <= 2 * window_radius, ErrorKind::InvalidArgument, "band radius must be <= 2N");
  blocks_.resize(window_.size() * band_.size());
}

CDOperator CDOperator::identity(int c, Coord window_radius, std::size_t local_dim, Boundary boundary) {
  CDOperator t(c, window_radius, 0, local_dim, boundary);
  t.set_band(LatticeIndex::zero(c), DenseBlock::identity(local_dim));
  return t;
}

void CDOperator::set_block(const LatticeIndex& k, const LatticeIndex& m, DenseBlock b) {
  require(window_.contains(k), ErrorKind::InvalidArgument, "row index " + k.to_string() + " outside window");
  require(band_.contains(m), ErrorKind::InvalidArgument, "offset " + m.to_string() + " outside band");
  require(b.dim() == d_, ErrorKind::ShapeMismatch, "block dimension does not match local dimension");
  blocks_[window_.linear(k) * band_.size() + band_.linear(m)] = std::move(b);
}

void CDOperator::set_band(const LatticeIndex& m, const DenseBlock& b) {
  for (std::size_t k = 0; k < window_.size(); ++k) set_block(window_.index(k), m, b);
}

void CDOperator::add_block(const LatticeIndex& k, const LatticeIndex& m, const DenseBlock& b) {
  require(window_.contains(k) && band_.contains(m), ErrorKind::InvalidArgument, "block index outside operator");
  auto& slot = blocks_[window_.linear(k) * band_.size() + band_.linear(m)];
  if (slot)
    *slot += b;
  else
    slot = b;
}

bool CDOperator::has_block(const LatticeIndex& k, const LatticeIndex& m) const { return find_block(k, m) != nullptr; }

const DenseBlock* CDOperator::find_block(std::size_t k_lin, std::size_t m_lin) const {
  const auto& slot = blocks_[k_lin * band_.size() + m_lin];
  return slot ? &*slot : nullptr;
}

const DenseBlock* CDOperator::find_block(const LatticeIndex& k, const LatticeIndex& m) const {
  if (!window_.contains(k) || !band_.contains(m)) return nullptr;
  return find_block(window_.linear(k), band_.linear(m));
}

DenseBlock CDOperator::block(const LatticeIndex& k, const LatticeIndex& m) const {
  const DenseBlock* b = find_block(k, m);
  return b ? *b : DenseBlock(d_);
}

std::size_t CDOperator::stored_blocks() const noexcept {
  return static_cast<std::size_t>(std::count_if(blocks_.begin(), blocks_.end(), [](const auto& b) { return b.has_value(); }));
}

std::optional<std::size_t> CDOperator::source_cell(std::size_t k_lin, const LatticeIndex& m) const {
  const LatticeIndex j = window_.index(k_lin) - m;
  if (boundary_ == Boundary::circulant) return window_.linear(window_.wrap(j));
  if (!window_.contains(j)) return std::nullopt;
  return window_.linear(j);
}

bool CDOperator::is_shift_invariant() const {
  for (std::size_t m = 0; m < band_.size(); ++m) {
    const DenseBlock* first = find_block(0, m);
    for (std::size_t k = 1; k < window_.size(); ++k) {
      const DenseBlock* b = find_block(k, m);
      if ((first == nullptr) != (b == nullptr)) return false;
      if (first && !(*first == *b)) return false;
    }
  }
  return true;
}

DenseBlock densify(const CDOperator& t) {
  const std::size_t d = t.local_dim();
  DenseBlock out(t.window().size() * d);
  for (std::size_t k = 0; k < t.window().size(); ++k) {
    for (std::size_t m = 0; m < t.band().size(); ++m) {
      const DenseBlock* b = t.find_block(k, m);
      if (!b) continue;
      const auto col = t.source_cell(k, t.band().index(m));
      if (!col) continue;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) out(k * d + i, *col * d + j) += (*b)(i, j);
    }
  }
  return out;
}

CDOperator plus_identity(const CDOperator& t, cplx s) {
  CDOperator out = t;
  DenseBlock id = DenseBlock::identity(t.local_dim());
  id *= s;
  const LatticeIndex zero = LatticeIndex::zero(t.dim());
  for (std::size_t k = 0; k < t.window().size(); ++k) out.add_block(t.window().index(k), zero, id);
  return out;
}

// ------------------------------------------------------------------ envelopes

double block_norm(const DenseBlock& b, NormKind kind) {
  return kind.kind == NormKind::Kind::nuclear ? trace_norm(b) : operator_norm(b, kind.p);
}

double Envelope::operator[](const LatticeIndex& m) const {
  if (!band.contains(m)) return 0.0;
  return values[band.linear(m)];
}

double Envelope::l1() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

FiniteSeq Envelope::as_sequence() const {
  FiniteSeq s(band.dim(), band.radius());
  for (std::size_t i = 0; i < values.size(); ++i) s.values()[i] = values[i];
  return s;
}

Envelope fit_envelope(const CDOperator& t, NormKind kind) {
  Envelope env{t.band(), std::vector<double>(t.band().size(), 0.0)};
  for (std::size_t k = 0; k < t.window().size(); ++k)
    for (std::size_t m = 0; m < t.band().size(); ++m)
      if (const DenseBlock* b = t.find_block(k, m)) env.values[m] = std::max(env.values[m], block_norm(*b, kind));
  return env;
}

double domination_excess(const Envelope& env, const CDOperator& t, NormKind kind) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < t.window().size(); ++k)
    for (std::size_t m = 0; m < t.band().size(); ++m)
      if (const DenseBlock* b = t.find_block(k, m))
        worst = std::max(worst, block_norm(*b, kind) - env[t.band().index(m)]);
  return worst;
}

Envelope convolve_envelopes(const Envelope& a, const Envelope& b, std::optional<Coord> wrap_radius) {
  const Coord r = a.band.radius() + b.band.radius();
  if (!wrap_radius || r <= *wrap_radius) {
    const FiniteSeq s = convolve(a.as_sequence(), b.as_sequence());
    Envelope out{s.window(), std::vector<double>(s.values().size())};
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = s.values()[i].real();
    return out;
  }
  const Window torus(a.band.dim(), *wrap_radius);
  Envelope out{torus, std::vector<double>(torus.size(), 0.0)};
  for (std::size_t i = 0; i < a.values.size(); ++i)
    for (std::size_t j = 0; j < b.values.size(); ++j)
      out.values[torus.linear(torus.wrap(a.band.index(i) + b.band.index(j)))] += a.values[i] * b.values[j];
  return out;
}

// --------------------------------------------------------- apply and compose

BlockVector apply(const CDOperator& t, const BlockVector& x) {
  require(x.window() == t.window() && x.local_dim() == t.local_dim(), ErrorKind::ShapeMismatch,
          "apply: block vector does not match operator window / local dimension");
  BlockVector y(t.dim(), t.window_radius(), t.local_dim(), x.exponent());
  for (std::size_t k = 0; k < t.window().size(); ++k) {
    auto acc = y.cell(k);
    for (std::size_t m = 0; m < t.band().size(); ++m) {
      const DenseBlock* b = t.find_block(k, m);
      if (!b) continue;
      const auto col = t.source_cell(k, t.band().index(m));
      if (!col) continue;
      matvec_add(*b, x.cell(*col), acc);
    }
  }
  return y;
}

CDOperator compose(const CDOperator& k_op, const CDOperator& t) {
  require(k_op.window() == t.window() && k_op.local_dim() == t.local_dim() && k_op.boundary() == t.boundary(),
          ErrorKind::ShapeMismatch, "compose: window, local dimension and boundary must agree");
  const Coord n = t.window_radius();
  Coord w = k_op.band_radius() + t.band_radius();
  w = std::min(w, t.boundary() == Boundary::circulant ? n : 2 * n);
  CDOperator out(t.dim(), n, w, t.local_dim(), t.boundary());
  const Window& win = t.window();

  for (std::size_t k = 0; k < win.size(); ++k) {
    const LatticeIndex kk = win.index(k);
    for (std::size_t m = 0; m < k_op.band().size(); ++m) {
      const DenseBlock* a = k_op.find_block(k, m);
      if (!a) continue;
      const LatticeIndex mm = k_op.band().index(m);
      const auto j = k_op.source_cell(k, mm);
      if (!j) continue;
      for (std::size_t l = 0; l < t.band().size(); ++l) {
        const DenseBlock* b = t.find_block(*j, l);
        if (!b) continue;
        const LatticeIndex ll = t.band().index(l);
        LatticeIndex r = mm + ll;
        if (t.boundary() == Boundary::circulant) {
          r = win.wrap(r);
        } else if (!win.contains(kk - r)) {
          continue;
        }
        out.add_block(kk, r, (*a) * (*b));
      }
    }
  }
  return out;
}

std::vector<ShiftTerm> shift_decomposition(const CDOperator& t) {
  std::vector<ShiftTerm> terms;
  for (std::size_t m = 0; m < t.band().size(); ++m) {
    ShiftTerm term{t.band().index(m), {}};
    for (std::size_t k = 0; k < t.window().size(); ++k)
      if (const DenseBlock* b = t.find_block(k, m)) term.multipliers.emplace_back(t.window().index(k), *b);
    if (!term.multipliers.empty()) terms.push_back(std::move(term));
  }
  return terms;
}

CDOperator term_operator(const ShiftTerm& term, const CDOperator& like) {
  CDOperator op(like.dim(), like.window_radius(), like.band_radius(), like.local_dim(), like.boundary());
  for (const auto& [k, b] : term.multipliers) op.set_block(k, term.offset, b);
  return op;
}

BlockVector apply_terms(const std::vector<ShiftTerm>& terms, const CDOperator& like, const BlockVector& x) {
  BlockVector y(like.dim(), like.window_radius(), like.local_dim(), x.exponent());
  for (const auto& term : terms) y += apply(term_operator(term, like), x);
  return y;
}

// ------------------------------------------------------------ Laurent symbol

DenseBlock laurent_symbol(const CDOperator& t, const TorusPoint& u) {
  require(t.is_shift_invariant(), ErrorKind::NotShiftInvariant, "laurent_symbol: blocks depend on the row index");
  require(u.dim() == t.dim(), ErrorKind::ShapeMismatch, "laurent_symbol: torus point dimension mismatch");
  DenseBlock s(t.local_dim());
  for (std::size_t m = 0; m < t.band().size(); ++m) {
    const DenseBlock* b = t.find_block(0, m);
    if (!b) continue;
    DenseBlock term = *b;
    term *= u.power(t.band().index(m));
    s += term;
  }
  return s;
}

LaurentInvertibility laurent_invertibility_test(const CDOperator& t, std::size_t grid, double margin) {
  require(grid >= 1, ErrorKind::InvalidArgument, "grid must be >= 1");
  require(t.is_shift_invariant(), ErrorKind::NotShiftInvariant, "laurent_invertibility_test: not shift invariant");
  LaurentInvertibility r;
  r.grid = grid;
  r.margin = margin;
  r.min_sigma = std::numeric_limits<double>::infinity();
  SymbolGrid g;
  g.c = t.dim();
  g.n = grid;
  std::size_t total = 1;
  for (int i = 0; i < t.dim(); ++i) total *= grid;
  for (std::size_t j = 0; j < total; ++j) {
    const TorusPoint u = g.point(j);
    const auto s = singular_values(laurent_symbol(t, u));
    const double smin = s.empty() ? 0.0 : s.back();
    if (smin < r.min_sigma) {
      r.min_sigma = smin;
      r.argmin = u;
    }
  }
  r.invertible = r.min_sigma > margin;
  return r;
}

// ----------------------------------------------------------- envelope tables

std::vector<EnvelopeRow> envelope_table(const Envelope& env, const Weight& g) {
  std::vector<EnvelopeRow> rows;
  double cum = 0.0;
  for (const LatticeIndex& m : shell_order(env.band, g.index_norm())) {
    EnvelopeRow row;
    row.m = m;
    row.beta = env[m];
    row.weight = g(m);
    row.weighted_beta = row.weight * row.beta;
    cum += row.weighted_beta;
    row.cumsum = cum;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::optional<double> envelope_decay_slope(const std::vector<EnvelopeRow>& rows, IndexNorm kind, double floor) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  for (const auto& r : rows) {
    if (!(r.beta > floor)) continue;
    const double x = norm(r.m, kind);
    const double y = std::log(r.beta);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ++n;
  }
  if (n < 2 || xmin == xmax) return std::nullopt;
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

double final_shell_fraction(const std::vector<EnvelopeRow>& rows, IndexNorm kind) {
  if (rows.empty()) return 0.0;
  const double outer = norm(rows.back().m, kind);
  double last = 0.0;
  for (const auto& r : rows)
    if (norm(r.m, kind) == outer) last += r.weighted_beta;
  const double total = rows.back().cumsum;
  return total > 0.0 ? last / total : 0.0;
}

// ------------------------------------------------------------------ inversion

InverseOnePlus invert_one_plus(const CDOperator& t, const Weight& report_weight) {
  require(t.boundary() == Boundary::circulant, ErrorKind::InvalidArgument, "invert_one_plus requires circulant boundary");
  const std::size_t d = t.local_dim();
  const Window& win = t.window();
  const std::size_t n = win.size() * d;

  DenseBlock a = densify(t);
  for (std::size_t i = 0; i < n; ++i) a(i, i) += 1.0;

  const DenseBlock inv = inverse(a);
  InverseOnePlus r;
  r.condition = operator_norm(a, Exponent::one) * operator_norm(inv, Exponent::one);
  if (!(r.condition <= kMaxCondition))
    fail(ErrorKind::NumericallySingular, "condition estimate " + std::to_string(r.condition) + " exceeds 1e12");

  const Coord nr = t.window_radius();
  r.t1 = CDOperator(t.dim(), nr, nr, d, Boundary::circulant);
  for (std::size_t k = 0; k < win.size(); ++k) {
    for (std::size_t m = 0; m < r.t1.band().size(); ++m) {
      const LatticeIndex mm = r.t1.band().index(m);
      const std::size_t col = *r.t1.source_cell(k, mm);
      DenseBlock b(d);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) b(i, j) = inv(k * d + i, col * d + j);
      if (mm.is_zero())
        for (std::size_t i = 0; i < d; ++i) b(i, i) -= 1.0;
      r.t1.set_block(win.index(k), mm, std::move(b));
    }
  }

  DenseBlock one_plus_t1 = densify(r.t1);
  for (std::size_t i = 0; i < n; ++i) one_plus_t1(i, i) += 1.0;
  DenseBlock defect = a * one_plus_t1;
  for (std::size_t i = 0; i < n; ++i) defect(i, i) -= 1.0;
  r.residual = operator_norm(defect, Exponent::two);

  r.envelope = fit_envelope(r.t1, NormKind::nuclear());
  r.envelope_report = envelope_table(r.envelope, report_weight);
  return r;
}

}  // namespace decayalg
