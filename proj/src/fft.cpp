#include "decayalg/fft.hpp"

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "decayalg/error.hpp"

namespace decayalg::fft {

void transform_1d(std::span<cplx> data, int sign) {
  const std::size_t n = data.size();
  require(is_power_of_two(n), ErrorKind::InvalidArgument, "FFT length must be a power of two");
  require(sign == 1 || sign == -1, ErrorKind::InvalidArgument, "FFT sign must be +1 or -1");
  if (n == 1) return;

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  // Twiddles evaluated directly (no recurrence) to keep the error at O(eps log N).
  std::vector<cplx> twiddle(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    twiddle[k] = {std::cos(ang), std::sin(ang)};
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const cplx w = twiddle[k * stride];
        const cplx u = data[start + k];
        const cplx v = data[start + k + half];
        const cplx wv{w.real() * v.real() - w.imag() * v.imag(), w.real() * v.imag() + w.imag() * v.real()};
        data[start + k] = u + wv;
        data[start + k + half] = u - wv;
      }
    }
  }
}

void transform(std::span<cplx> data, int c, std::size_t n, int sign) {
  require(c >= 1, ErrorKind::InvalidArgument, "FFT dimension must be >= 1");
  std::size_t total = 1;
  for (int i = 0; i < c; ++i) total *= n;
  require(data.size() == total, ErrorKind::ShapeMismatch, "FFT buffer size does not match n^c");

  std::vector<cplx> line(n);
  std::size_t stride = 1;
  for (int axis = c - 1; axis >= 0; --axis) {
    const std::size_t block = stride * n;
    for (std::size_t outer = 0; outer < total; outer += block) {
      for (std::size_t inner = 0; inner < stride; ++inner) {
        const std::size_t base = outer + inner;
        for (std::size_t k = 0; k < n; ++k) line[k] = data[base + k * stride];
        transform_1d(line, sign);
        for (std::size_t k = 0; k < n; ++k) data[base + k * stride] = line[k];
      }
    }
    stride = block;
  }
}

}  // namespace decayalg::fft
