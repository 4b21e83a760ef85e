#include <immintrin.h>

#include <cmath>

#include "navslip/kernels.hpp"

namespace navslip::kernels::avx2 {

namespace {

inline __m256d abs_pd(__m256d v) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  return _mm256_andnot_pd(sign, v);
}

inline __m256d ipow_pd(__m256d a, int p) {
  __m256d r = a;
  for (int k = 1; k < p; ++k) r = _mm256_mul_pd(r, a);
  return r;
}

inline double hsum(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

}  // namespace

void tridiag_apply(std::span<const double> lower, std::span<const double> diag,
                   std::span<const double> upper, std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  if (n < 3) return;
  std::size_t i = 1;
  // No FMA: keeps the result bit-identical to the scalar reference.
  for (; i + 4 < n; i += 4) {
    const __m256d xm = _mm256_loadu_pd(&x[i - 1]);
    const __m256d x0 = _mm256_loadu_pd(&x[i]);
    const __m256d xp = _mm256_loadu_pd(&x[i + 1]);
    const __m256d t = _mm256_add_pd(_mm256_mul_pd(_mm256_loadu_pd(&lower[i]), xm),
                                    _mm256_mul_pd(_mm256_loadu_pd(&diag[i]), x0));
    _mm256_storeu_pd(&y[i], _mm256_add_pd(t, _mm256_mul_pd(_mm256_loadu_pd(&upper[i]), xp)));
  }
  for (; i + 1 < n; ++i) {
    const double t = lower[i] * x[i - 1] + diag[i] * x[i];
    y[i] = t + upper[i] * x[i + 1];
  }
}

double weighted_pow_sum(std::span<const double> x, std::span<const double> w, double p) {
  const int ip = static_cast<int>(p);
  if (!(static_cast<double>(ip) == p && ip >= 1 && ip <= 8)) {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) sum += w[i] * std::pow(std::fabs(x[i]), p);
    return sum;
  }
  const std::size_t n = x.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = abs_pd(_mm256_loadu_pd(&x[i]));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(&w[i]), ipow_pd(a, ip)));
  }
  double sum = hsum(acc);
  for (; i < n; ++i) {
    double a = std::fabs(x[i]);
    double r = a;
    for (int k = 1; k < ip; ++k) r *= a;
    sum += w[i] * r;
  }
  return sum;
}

double max_abs(std::span<const double> x) {
  const std::size_t n = x.size();
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) m = _mm256_max_pd(m, abs_pd(_mm256_loadu_pd(&x[i])));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double r = std::fmax(std::fmax(lanes[0], lanes[1]), std::fmax(lanes[2], lanes[3]));
  for (; i < n; ++i) r = std::fmax(r, std::fabs(x[i]));
  return r;
}

}  // namespace navslip::kernels::avx2
