#include <atomic>
#include <cstdlib>
#include <cstring>

#include "schmidt/error.hpp"
#include "schmidt/kernels.hpp"

namespace schmidt::kernels {

namespace {

Isa detect() {
  if (const char* env = std::getenv("SCHMIDT_KERNELS"); env && std::strcmp(env, "scalar") == 0)
    return Isa::Scalar;
  if (isa_available(Isa::Avx2)) return Isa::Avx2;
  return Isa::Scalar;
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(SCHMIDT_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  require(isa_available(isa), std::string("kernel variant not available: ") +
                                  std::string(isa_name(isa)));
  active().store(isa, std::memory_order_relaxed);
}

void caxpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y) {
  require(x.size() == y.size(), "caxpy: length mismatch");
#ifdef SCHMIDT_HAVE_AVX2_KERNELS
  if (active_isa() == Isa::Avx2) return avx2::caxpy(alpha, x, y);
#endif
  scalar::caxpy(alpha, x, y);
}

Complex cdotc(std::span<const Complex> x, std::span<const Complex> y) {
  require(x.size() == y.size(), "cdotc: length mismatch");
#ifdef SCHMIDT_HAVE_AVX2_KERNELS
  if (active_isa() == Isa::Avx2) return avx2::cdotc(x, y);
#endif
  return scalar::cdotc(x, y);
}

}  // namespace schmidt::kernels
