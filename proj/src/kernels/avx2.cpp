// Built with -mavx2 -mfma; only reached through dispatch after a CPUID check.

#include "schmidt/kernels.hpp"

#include <immintrin.h>

namespace schmidt::kernels::avx2 {

// Two complex<double> per __m256d, laid out [re0 im0 re1 im1].

void caxpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y) {
  const std::size_t n = x.size();
  const double* xp = reinterpret_cast<const double*>(x.data());
  double* yp = reinterpret_cast<double*>(y.data());

  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());

  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
    const __m256d xs = _mm256_permute_pd(xv, 0b0101);  // [im0 re0 im1 re1]
    const __m256d t = _mm256_mul_pd(ai, xs);
    // even lanes: ar*re - ai*im, odd lanes: ar*im + ai*re
    const __m256d prod = _mm256_fmaddsub_pd(ar, xv, t);
    const __m256d yv = _mm256_loadu_pd(yp + 2 * i);
    _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(yv, prod));
  }
  if (i < n) scalar::caxpy(alpha, x.subspan(i), y.subspan(i));
}

Complex cdotc(std::span<const Complex> x, std::span<const Complex> y) {
  const std::size_t n = x.size();
  const double* xp = reinterpret_cast<const double*>(x.data());
  const double* yp = reinterpret_cast<const double*>(y.data());

  __m256d acc_re = _mm256_setzero_pd();  // lanes xr*yr, xi*yi
  __m256d acc_im = _mm256_setzero_pd();  // lanes xr*yi, xi*yr

  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yp + 2 * i);
    const __m256d ys = _mm256_permute_pd(yv, 0b0101);
    acc_re = _mm256_fmadd_pd(xv, yv, acc_re);
    acc_im = _mm256_fmadd_pd(xv, ys, acc_im);
  }

  alignas(32) double re_lanes[4];
  alignas(32) double im_lanes[4];
  _mm256_store_pd(re_lanes, acc_re);
  _mm256_store_pd(im_lanes, acc_im);
  Complex sum((re_lanes[0] + re_lanes[1]) + (re_lanes[2] + re_lanes[3]),
              (im_lanes[0] - im_lanes[1]) + (im_lanes[2] - im_lanes[3]));
  if (i < n) sum += scalar::cdotc(x.subspan(i), y.subspan(i));
  return sum;
}

}  // namespace schmidt::kernels::avx2
