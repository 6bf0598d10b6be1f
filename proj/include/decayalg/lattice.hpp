#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace decayalg {

using Coord = std::int64_t;

/// A point of the integer lattice Z^c.
class LatticeIndex {
public:
  LatticeIndex() = default;
  explicit LatticeIndex(std::vector<Coord> coords);
  LatticeIndex(std::initializer_list<Coord> coords) : coords_(coords) {}

  static LatticeIndex zero(int c) { return LatticeIndex(std::vector<Coord>(static_cast<std::size_t>(c), 0)); }
  static LatticeIndex unit(int c, int axis, Coord step = 1);

  int dim() const noexcept { return static_cast<int>(coords_.size()); }
  Coord operator[](int axis) const { return coords_[static_cast<std::size_t>(axis)]; }
  Coord& operator[](int axis) { return coords_[static_cast<std::size_t>(axis)]; }
  std::span<const Coord> coords() const noexcept { return coords_; }
  bool is_zero() const noexcept;

  LatticeIndex operator+(const LatticeIndex& o) const;
  LatticeIndex operator-(const LatticeIndex& o) const;
  LatticeIndex operator-() const;
  LatticeIndex operator*(Coord k) const;

  bool operator==(const LatticeIndex&) const = default;
  auto operator<=>(const LatticeIndex&) const = default;

  std::string to_string() const;

private:
  std::vector<Coord> coords_;
};

/// Choice of |n| on Z^c.
enum class IndexNorm { l1, l2, linf };

double norm(const LatticeIndex& n, IndexNorm kind);
std::string to_string(IndexNorm kind);
IndexNorm index_norm_from_string(const std::string& name);

/// The cube [-R,R]^c with a row-major linearisation (last axis fastest).
class Window {
public:
  Window() = default;
  Window(int c, Coord radius);

  int dim() const noexcept { return c_; }
  Coord radius() const noexcept { return radius_; }
  Coord side() const noexcept { return 2 * radius_ + 1; }
  std::size_t size() const noexcept { return size_; }

  bool contains(const LatticeIndex& n) const;
  std::size_t linear(const LatticeIndex& n) const;
  LatticeIndex index(std::size_t linear) const;
  /// Reduces every coordinate into [-R,R] modulo 2R+1 (torus arithmetic).
  LatticeIndex wrap(const LatticeIndex& n) const;

  bool operator==(const Window&) const = default;

private:
  int c_ = 0;
  Coord radius_ = 0;
  std::size_t size_ = 0;
};

/// Offsets of a window sorted by increasing |m| (ties broken lexicographically).
std::vector<LatticeIndex> shell_order(const Window& w, IndexNorm kind);

}  // namespace decayalg
