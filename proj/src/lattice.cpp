#include "decayalg/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "decayalg/error.hpp"

namespace decayalg {

LatticeIndex::LatticeIndex(std::vector<Coord> coords) : coords_(std::move(coords)) {}

LatticeIndex LatticeIndex::unit(int c, int axis, Coord step) {
  require(axis >= 0 && axis < c, ErrorKind::InvalidArgument, "unit index axis out of range");
  auto n = zero(c);
  n[axis] = step;
  return n;
}

bool LatticeIndex::is_zero() const noexcept {
  return std::all_of(coords_.begin(), coords_.end(), [](Coord x) { return x == 0; });
}

LatticeIndex LatticeIndex::operator+(const LatticeIndex& o) const {
  require(dim() == o.dim(), ErrorKind::ShapeMismatch, "lattice dimension mismatch");
  LatticeIndex r = *this;
  for (std::size_t i = 0; i < coords_.size(); ++i) r.coords_[i] += o.coords_[i];
  return r;
}

LatticeIndex LatticeIndex::operator-(const LatticeIndex& o) const {
  require(dim() == o.dim(), ErrorKind::ShapeMismatch, "lattice dimension mismatch");
  LatticeIndex r = *this;
  for (std::size_t i = 0; i < coords_.size(); ++i) r.coords_[i] -= o.coords_[i];
  return r;
}

LatticeIndex LatticeIndex::operator-() const {
  LatticeIndex r = *this;
  for (auto& x : r.coords_) x = -x;
  return r;
}

LatticeIndex LatticeIndex::operator*(Coord k) const {
  LatticeIndex r = *this;
  for (auto& x : r.coords_) x *= k;
  return r;
}

std::string LatticeIndex::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(coords_[i]);
  }
  return s + ")";
}

double norm(const LatticeIndex& n, IndexNorm kind) {
  switch (kind) {
    case IndexNorm::l1: {
      Coord s = 0;
      for (Coord x : n.coords()) s += x < 0 ? -x : x;
      return static_cast<double>(s);
    }
    case IndexNorm::l2: {
      Coord s = 0;
      for (Coord x : n.coords()) s += x * x;
      return std::sqrt(static_cast<double>(s));
    }
    case IndexNorm::linf: {
      Coord s = 0;
      for (Coord x : n.coords()) s = std::max<Coord>(s, x < 0 ? -x : x);
      return static_cast<double>(s);
    }
  }
  return 0.0;
}

std::string to_string(IndexNorm kind) {
  switch (kind) {
    case IndexNorm::l1: return "l1";
    case IndexNorm::l2: return "l2";
    case IndexNorm::linf: return "linf";
  }
  return "l1";
}

IndexNorm index_norm_from_string(const std::string& name) {
  if (name == "l1") return IndexNorm::l1;
  if (name == "l2") return IndexNorm::l2;
  if (name == "linf") return IndexNorm::linf;
  fail(ErrorKind::Format, "unknown index norm '" + name + "'");
}

Window::Window(int c, Coord radius) : c_(c), radius_(radius) {
  require(c >= 1, ErrorKind::InvalidArgument, "lattice dimension must be >= 1");
  require(radius >= 0, ErrorKind::InvalidArgument, "window radius must be >= 0");
  size_ = 1;
  for (int i = 0; i < c; ++i) size_ *= static_cast<std::size_t>(side());
}

bool Window::contains(const LatticeIndex& n) const {
  if (n.dim() != c_) return false;
  for (Coord x : n.coords())
    if (x < -radius_ || x > radius_) return false;
  return true;
}

std::size_t Window::linear(const LatticeIndex& n) const {
  require(contains(n), ErrorKind::InvalidArgument, "index " + n.to_string() + " outside window");
  std::size_t lin = 0;
  for (Coord x : n.coords()) lin = lin * static_cast<std::size_t>(side()) + static_cast<std::size_t>(x + radius_);
  return lin;
}

LatticeIndex Window::index(std::size_t linear) const {
  std::vector<Coord> coords(static_cast<std::size_t>(c_));
  const auto s = static_cast<std::size_t>(side());
  for (int axis = c_ - 1; axis >= 0; --axis) {
    coords[static_cast<std::size_t>(axis)] = static_cast<Coord>(linear % s) - radius_;
    linear /= s;
  }
  return LatticeIndex(std::move(coords));
}

LatticeIndex Window::wrap(const LatticeIndex& n) const {
  LatticeIndex r = n;
  const Coord s = side();
  for (int axis = 0; axis < c_; ++axis) {
    Coord v = ((r[axis] + radius_) % s + s) % s;
    r[axis] = v - radius_;
  }
  return r;
}

std::vector<LatticeIndex> shell_order(const Window& w, IndexNorm kind) {
  std::vector<LatticeIndex> out;
  out.reserve(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out.push_back(w.index(i));
  std::stable_sort(out.begin(), out.end(), [kind](const LatticeIndex& a, const LatticeIndex& b) {
    const double na = norm(a, kind), nb = norm(b, kind);
    if (na != nb) return na < nb;
    return a < b;
  });
  return out;
}

}  // namespace decayalg
