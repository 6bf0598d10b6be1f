#include <atomic>
#include <cstdlib>
#include <string>

#include "decayalg/error.hpp"
#include "decayalg/simd/kernels.hpp"

namespace decayalg::simd {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(DECAYALG_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend initial_backend() noexcept {
  if (const char* env = std::getenv("DECAYALG_SIMD")) {
    if (std::string(env) == "scalar") return Backend::scalar;
  }
  return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& current() noexcept {
  static std::atomic<Backend> b{initial_backend()};
  return b;
}

}  // namespace

bool backend_supported(Backend b) noexcept {
  switch (b) {
    case Backend::scalar: return true;
    case Backend::avx2: return cpu_has_avx2();
  }
  return false;
}

Backend active_backend() noexcept { return current().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  require(backend_supported(b), ErrorKind::InvalidArgument,
          "SIMD backend '" + std::string(to_string(b)) + "' is not supported on this CPU/build");
  current().store(b, std::memory_order_relaxed);
}

std::string_view to_string(Backend b) noexcept {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
  }
  return "scalar";
}

const KernelTable& kernels(Backend b) {
  require(backend_supported(b), ErrorKind::InvalidArgument, "SIMD backend not supported");
#if defined(DECAYALG_BUILD_AVX2)
  if (b == Backend::avx2) return detail::avx2_table();
#endif
  return detail::scalar_table();
}

const KernelTable& active() noexcept {
#if defined(DECAYALG_BUILD_AVX2)
  if (active_backend() == Backend::avx2) return detail::avx2_table();
#endif
  return detail::scalar_table();
}

}  // namespace decayalg::simd
