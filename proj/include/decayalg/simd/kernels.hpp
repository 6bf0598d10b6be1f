#pragma once

// Complex double-precision inner loops used by the dense block algebra, the
// convolution routines and the Jacobi SVD. Every kernel has a portable scalar
// reference implementation; an AVX2/FMA variant is selected at runtime when
// the CPU supports it. Set DECAYALG_SIMD=scalar to force the reference path.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace decayalg::simd {

using cplx = std::complex<double>;

enum class Backend { scalar, avx2 };

struct KernelTable {
  // y += alpha * x
  void (*axpy)(cplx alpha, const cplx* x, cplx* y, std::size_t n);
  // sum x_i * y_i
  cplx (*dotu)(const cplx* x, const cplx* y, std::size_t n);
  // sum conj(x_i) * y_i
  cplx (*dotc)(const cplx* x, const cplx* y, std::size_t n);
  // sum |x_i|^2
  double (*sum_abs2)(const cplx* x, std::size_t n);
  // sum |x_i|, with |z| = sqrt(re^2 + im^2)
  double (*sum_abs)(const cplx* x, std::size_t n);
  // (x, y) <- (c x + s_xy y, s_yx x + c y)
  void (*rot)(cplx* x, cplx* y, std::size_t n, double c, cplx s_xy, cplx s_yx);
};

bool backend_supported(Backend b) noexcept;
Backend active_backend() noexcept;
/// Throws decayalg::Error(InvalidArgument) if the backend is not supported.
void set_backend(Backend b);
std::string_view to_string(Backend b) noexcept;

/// Kernel table for a specific backend, bypassing dispatch (equivalence tests).
const KernelTable& kernels(Backend b);
const KernelTable& active() noexcept;

inline void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}
inline cplx dotu(std::span<const cplx> x, std::span<const cplx> y) { return active().dotu(x.data(), y.data(), x.size()); }
inline cplx dotc(std::span<const cplx> x, std::span<const cplx> y) { return active().dotc(x.data(), y.data(), x.size()); }
inline double sum_abs2(std::span<const cplx> x) { return active().sum_abs2(x.data(), x.size()); }
inline double sum_abs(std::span<const cplx> x) { return active().sum_abs(x.data(), x.size()); }
inline void rot(std::span<cplx> x, std::span<cplx> y, double c, cplx s_xy, cplx s_yx) {
  active().rot(x.data(), y.data(), x.size(), c, s_xy, s_yx);
}

namespace detail {
const KernelTable& scalar_table() noexcept;
#if defined(DECAYALG_BUILD_AVX2)
const KernelTable& avx2_table() noexcept;
#endif
}  // namespace detail

}  // namespace decayalg::simd
