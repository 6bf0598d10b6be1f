#include "decayalg/nuclear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "decayalg/error.hpp"
#include "decayalg/simd/kernels.hpp"

namespace decayalg {

std::string to_string(Exponent p) {
  switch (p) {
    case Exponent::one: return "1";
    case Exponent::two: return "2";
    case Exponent::inf: return "inf";
  }
  return "2";
}

Exponent exponent_from_string(const std::string& s) {
  if (s == "1") return Exponent::one;
  if (s == "2") return Exponent::two;
  if (s == "inf") return Exponent::inf;
  fail(ErrorKind::Format, "unknown exponent '" + s + "' (expected 1, 2 or inf)");
}

Exponent dual(Exponent p) noexcept {
  switch (p) {
    case Exponent::one: return Exponent::inf;
    case Exponent::two: return Exponent::two;
    case Exponent::inf: return Exponent::one;
  }
  return Exponent::two;
}

double vector_norm(std::span<const cplx> x, Exponent p) {
  switch (p) {
    case Exponent::one: return simd::sum_abs(x);
    case Exponent::two: return std::sqrt(simd::sum_abs2(x));
    case Exponent::inf: {
      double m = 0.0;
      for (const cplx& v : x) m = std::max(m, std::abs(v));
      return m;
    }
  }
  return 0.0;
}

double trace_norm(const DenseBlock& a) {
  const auto s = singular_values(a);
  // Smallest first so the sum is insensitive to ordering noise.
  return std::accumulate(s.rbegin(), s.rend(), 0.0);
}

double operator_norm(const DenseBlock& a, Exponent p) {
  const std::size_t d = a.dim();
  switch (p) {
    case Exponent::one: {
      double m = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < d; ++i) s += std::abs(a(i, j));
        m = std::max(m, s);
      }
      return m;
    }
    case Exponent::two: {
      const auto s = singular_values(a);
      return s.empty() ? 0.0 : s.front();
    }
    case Exponent::inf: {
      double m = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < d; ++j) s += std::abs(a(i, j));
        m = std::max(m, s);
      }
      return m;
    }
  }
  return 0.0;
}

double nuclear_upper_bound(const DenseBlock& a, Exponent p) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.dim(); ++j) s += vector_norm(a.column(j), p);
  return s;
}

DenseBlock NuclearFactorization::assemble() const {
  DenseBlock m(dim);
  for (const auto& t : terms) m += DenseBlock::outer(t.vector, t.functional);
  return m;
}

double NuclearFactorization::cost(Exponent p) const {
  double s = 0.0;
  for (const auto& t : terms) s += vector_norm(t.functional, dual(p)) * vector_norm(t.vector, p);
  return s;
}

NuclearFactorization nuclear_factorization(const DenseBlock& a) {
  const Svd f = svd(a);
  NuclearFactorization out;
  out.dim = a.dim();
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (f.sigma[i] == 0.0) continue;
    NuclearTerm t;
    t.functional.resize(a.dim());
    t.vector.resize(a.dim());
    for (std::size_t j = 0; j < a.dim(); ++j) {
      t.functional[j] = f.sigma[i] * std::conj(f.v(j, i));
      t.vector[j] = f.u(j, i);
    }
    out.terms.push_back(std::move(t));
  }
  return out;
}

NeumannResult neumann_inverse(const DenseBlock& a_inv, const DenseBlock& b, double tol, int max_terms) {
  require(a_inv.dim() == b.dim(), ErrorKind::ShapeMismatch, "neumann_inverse: block dimension mismatch");
  require(tol > 0.0, ErrorKind::InvalidArgument, "neumann_inverse: tol must be positive");
  require(max_terms >= 1, ErrorKind::InvalidArgument, "neumann_inverse: max_terms must be >= 1");

  NeumannResult r;
  const DenseBlock ratio = a_inv * b;
  r.contraction = trace_norm(ratio);
  if (!(r.contraction < 1.0))
    fail(ErrorKind::NotContractive, "trace_norm(A^-1 B) = " + std::to_string(r.contraction) + " >= 1");

  DenseBlock term = a_inv;
  r.inverse = a_inv;
  r.terms = 1;
  r.last_term_norm = trace_norm(term);
  while (r.last_term_norm >= tol) {
    if (r.terms >= max_terms)
      fail(ErrorKind::Diverged, "Neumann series did not reach tol within " + std::to_string(max_terms) + " terms");
    term = ratio * term;
    r.inverse += term;
    ++r.terms;
    r.last_term_norm = trace_norm(term);
  }

  const DenseBlock a_minus_b = inverse(a_inv) - b;
  r.kappa = operator_norm(a_minus_b, Exponent::two);
  r.residual = operator_norm(a_minus_b * r.inverse - DenseBlock::identity(b.dim()), Exponent::two);
  return r;
}

namespace {

DenseBlock one_minus(cplx z, const DenseBlock& j) {
  DenseBlock m = (-z) * j;
  for (std::size_t i = 0; i < j.dim(); ++i) m(i, i) += 1.0;
  return m;
}

double sigma_min(cplx z, const DenseBlock& j) {
  const auto s = singular_values(one_minus(z, j));
  return s.empty() ? 1.0 : s.back();
}

// Minimum of sigma_min(1 - zJ) over the segment [p, q]: uniform probes, then
// golden-section refinement around every probe that is a local minimum.
double segment_margin(const DenseBlock& j, cplx p, cplx q, int probes) {
  const auto at = [&](double t) { return sigma_min(p + t * (q - p), j); };
  std::vector<double> f(static_cast<std::size_t>(probes));
  for (int i = 0; i < probes; ++i) f[static_cast<std::size_t>(i)] = at(static_cast<double>(i) / (probes - 1));
  double best = *std::min_element(f.begin(), f.end());
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < probes; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const bool left_ok = i == 0 || f[ui] <= f[ui - 1];
    const bool right_ok = i == probes - 1 || f[ui] <= f[ui + 1];
    if (!left_ok || !right_ok) continue;
    double lo = static_cast<double>(std::max(i - 1, 0)) / (probes - 1);
    double hi = static_cast<double>(std::min(i + 1, probes - 1)) / (probes - 1);
    double x1 = hi - golden * (hi - lo), x2 = lo + golden * (hi - lo);
    double f1 = at(x1), f2 = at(x2);
    for (int it = 0; it < 60; ++it) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - golden * (hi - lo);
        f1 = at(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + golden * (hi - lo);
        f2 = at(x2);
      }
    }
    best = std::min({best, f1, f2});
  }
  return best;
}

// Distance from 0 to the segment [p, q].
double distance_to_origin(cplx p, cplx q) {
  const cplx d = q - p;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(p);
  const double t = std::clamp(-(std::conj(d) * p).real() / len2, 0.0, 1.0);
  return std::abs(p + t * d);
}

}  // namespace

HomotopyPath build_path(const DenseBlock& j, cplx mu, cplx nu, int probe_points) {
  const cplx v[2] = {mu, nu};
  return build_path(j, v, probe_points);
}

HomotopyPath build_path(const DenseBlock& j, std::span<const cplx> vertices, int probe_points) {
  require(!vertices.empty(), ErrorKind::InvalidArgument, "build_path: at least one vertex required");
  require(probe_points >= 2, ErrorKind::InvalidArgument, "build_path: probe_points must be >= 2");
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
    require(distance_to_origin(vertices[i], vertices[i + 1]) > 0.0, ErrorKind::InvalidArgument,
            "build_path: path passes through z = 0");
  require(vertices.size() > 1 || vertices[0] != cplx{}, ErrorKind::InvalidArgument, "build_path: z = 0 on path");

  HomotopyPath path;
  path.j_trace_norm = trace_norm(j);

  double margin = sigma_min(vertices[0], j);
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
    margin = std::min(margin, segment_margin(j, vertices[i], vertices[i + 1], probe_points));
  path.margin = margin;
  if (margin < kPathMinMargin)
    fail(ErrorKind::PathHitsSpectrum, "sigma_min(1 - zJ) = " + std::to_string(margin) + " on the path");
  double bound = 1.0 / margin;

  // Subdivide, then make sure the bound also covers every sample actually used.
  for (int round = 0; round < 8; ++round) {
    path.samples.assign(1, vertices[0]);
    path.max_step = 0.0;
    const double h_max = path.j_trace_norm > 0.0 ? kPathSafetyFactor / (bound * path.j_trace_norm)
                                                 : std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
      const cplx p = vertices[i], q = vertices[i + 1];
      const double len = std::abs(q - p);
      if (len == 0.0) continue;
      const double pieces = std::isfinite(h_max) ? std::floor(len / h_max) + 1.0 : 1.0;
      require(pieces <= 1e6, ErrorKind::PathHitsSpectrum, "build_path: resolvent bound forces more than 1e6 steps");
      const auto n = static_cast<std::size_t>(pieces);
      for (std::size_t k = 1; k <= n; ++k) {
        const cplx z = k == n ? q : p + (static_cast<double>(k) / static_cast<double>(n)) * (q - p);
        path.max_step = std::max(path.max_step, std::abs(z - path.samples.back()));
        path.samples.push_back(z);
      }
    }
    double sampled = 0.0;
    for (const cplx& z : path.samples) sampled = std::max(sampled, 1.0 / sigma_min(z, j));
    if (sampled <= bound) break;
    bound = sampled;
  }
  path.resolvent_bound = bound;
  return path;
}

cplx default_start(const DenseBlock& j, cplx nu) {
  require(nu != cplx{}, ErrorKind::InvalidArgument, "default_start: nu must be nonzero");
  const double jn = trace_norm(j);
  if (std::abs(nu) * jn <= 0.5) return nu;
  return nu * (0.5 / (std::abs(nu) * jn));
}

HomotopyResult homotopy_inverse(const DenseBlock& j, cplx nu, const HomotopyPath& path, double tol) {
  require(!path.samples.empty(), ErrorKind::InvalidArgument, "homotopy_inverse: empty path");
  for (const cplx& z : path.samples)
    require(z != cplx{}, ErrorKind::InvalidArgument, "homotopy_inverse: path sample at z = 0");
  require(std::abs(path.samples.back() - nu) <= 1e-14 * std::max(1.0, std::abs(nu)), ErrorKind::InvalidArgument,
          "homotopy_inverse: path does not end at nu");

  const std::size_t d = j.dim();
  const double jn = trace_norm(j);
  double max_step = 0.0;
  for (std::size_t k = 1; k < path.samples.size(); ++k)
    max_step = std::max(max_step, std::abs(path.samples[k] - path.samples[k - 1]));
  if (!(max_step * jn * path.resolvent_bound < 1.0))
    fail(ErrorKind::StepTooLarge, "path certificate |dz| ||J||_1 M = " + std::to_string(max_step * jn * path.resolvent_bound));

  HomotopyResult r;
  const DenseBlock id = DenseBlock::identity(d);
  // Base case: (1 - mu J)^-1 = sum (mu J)^n, contractive by assumption.
  DenseBlock current = neumann_inverse(id, path.samples.front() * j, tol).inverse;
  r.observed_resolvent = operator_norm(current, Exponent::two);

  for (std::size_t k = 1; k < path.samples.size(); ++k) {
    const cplx from = path.samples[k - 1], to = path.samples[k];
    HomotopyStep step{from, to};
    const double resolvent = operator_norm(current, Exponent::two);
    step.certificate = std::abs(to - from) * jn * resolvent;
    if (!(step.certificate < 1.0))
      fail(ErrorKind::StepTooLarge, "step " + std::to_string(k) + " certificate " + std::to_string(step.certificate));
    // 1 - to J = (1 - from J) - (to - from) J; only |to - from| enters the bound.
    const NeumannResult nr = neumann_inverse(current, (to - from) * j, tol);
    current = nr.inverse;
    step.contraction = nr.contraction;
    step.terms = nr.terms;
    const double next_resolvent = operator_norm(current, Exponent::two);
    step.condition = nr.kappa * next_resolvent;
    r.observed_resolvent = std::max(r.observed_resolvent, next_resolvent);
    r.steps.push_back(step);
  }

  r.inverse = current;
  r.nuclear_part = current - id;
  r.nuclear_trace_norm = trace_norm(r.nuclear_part);
  r.residual = operator_norm(current * one_minus(nu, j) - id, Exponent::two);
  return r;
}

}  // namespace decayalg
