#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace decayalg::fft {

using cplx = std::complex<double>;

constexpr bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

/// In-place unnormalised radix-2 DFT: X_j = sum_k x_k exp(sign * 2 pi i j k / N).
/// N must be a power of two; sign is +1 or -1.
void transform_1d(std::span<cplx> data, int sign);

/// The same transform applied along every axis of an n^c row-major array.
void transform(std::span<cplx> data, int c, std::size_t n, int sign);

}  // namespace decayalg::fft
