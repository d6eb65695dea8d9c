#pragma once

// Inner loops of pencil probing over interleaved complex<double> storage.
// Each kernel has a portable scalar reference and, on x86-64, an AVX2+FMA
// variant chosen at runtime. Set SCHMIDT_KERNELS=scalar to force the
// reference path.

#include <complex>
#include <span>
#include <string_view>

namespace schmidt::kernels {

using Complex = std::complex<double>;

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

/// True if the running CPU (and this build) can execute the given variant.
bool isa_available(Isa isa);

/// Variant used by the dispatching entry points below.
Isa active_isa();

/// Overrides dispatch (tests, benchmarking). Throws if unavailable.
void set_active_isa(Isa isa);

/// y += alpha * x
void caxpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y);

/// sum_i conj(x_i) * y_i
Complex cdotc(std::span<const Complex> x, std::span<const Complex> y);

namespace scalar {
void caxpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y);
Complex cdotc(std::span<const Complex> x, std::span<const Complex> y);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define SCHMIDT_HAVE_AVX2_KERNELS 1
namespace avx2 {
void caxpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y);
Complex cdotc(std::span<const Complex> x, std::span<const Complex> y);
}  // namespace avx2
#endif

}  // namespace schmidt::kernels
