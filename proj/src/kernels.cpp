#include "navslip/kernels.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

namespace navslip::kernels {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(NAVSLIP_WITH_AVX2) && (defined(__x86_64__) || defined(__i386__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

std::atomic<Backend>& backend_slot() {
  static std::atomic<Backend> slot{cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar};
  return slot;
}

// Integer power with a fixed multiplication order; the AVX2 path mirrors it.
inline double ipow(double a, int p) {
  double r = a;
  for (int k = 1; k < p; ++k) r *= a;
  return r;
}

}  // namespace

Backend active_backend() noexcept { return backend_slot().load(std::memory_order_relaxed); }

bool avx2_available() noexcept { return cpu_has_avx2(); }

void force_backend(Backend b) {
  if (b == Backend::Avx2 && !cpu_has_avx2())
    throw std::invalid_argument("AVX2 backend not available on this build/CPU");
  backend_slot().store(b, std::memory_order_relaxed);
}

std::string_view backend_name(Backend b) noexcept {
  return b == Backend::Avx2 ? "avx2" : "scalar";
}

namespace scalar {

void tridiag_apply(std::span<const double> lower, std::span<const double> diag,
                   std::span<const double> upper, std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double t = lower[i] * x[i - 1] + diag[i] * x[i];
    y[i] = t + upper[i] * x[i + 1];
  }
}

double weighted_pow_sum(std::span<const double> x, std::span<const double> w, double p) {
  const int ip = static_cast<int>(p);
  double sum = 0.0;
  if (static_cast<double>(ip) == p && ip >= 1 && ip <= 8) {
    for (std::size_t i = 0; i < x.size(); ++i) sum += w[i] * ipow(std::fabs(x[i]), ip);
  } else {
    for (std::size_t i = 0; i < x.size(); ++i) sum += w[i] * std::pow(std::fabs(x[i]), p);
  }
  return sum;
}

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::fmax(m, std::fabs(v));
  return m;
}

}  // namespace scalar

#if !defined(NAVSLIP_WITH_AVX2)
namespace avx2 {
void tridiag_apply(std::span<const double> lower, std::span<const double> diag,
                   std::span<const double> upper, std::span<const double> x, std::span<double> y) {
  scalar::tridiag_apply(lower, diag, upper, x, y);
}
double weighted_pow_sum(std::span<const double> x, std::span<const double> w, double p) {
  return scalar::weighted_pow_sum(x, w, p);
}
double max_abs(std::span<const double> x) { return scalar::max_abs(x); }
}  // namespace avx2
#endif

void tridiag_apply(std::span<const double> lower, std::span<const double> diag,
                   std::span<const double> upper, std::span<const double> x, std::span<double> y) {
  if (active_backend() == Backend::Avx2)
    avx2::tridiag_apply(lower, diag, upper, x, y);
  else
    scalar::tridiag_apply(lower, diag, upper, x, y);
}

double weighted_pow_sum(std::span<const double> x, std::span<const double> w, double p) {
  return active_backend() == Backend::Avx2 ? avx2::weighted_pow_sum(x, w, p)
                                           : scalar::weighted_pow_sum(x, w, p);
}

double max_abs(std::span<const double> x) {
  return active_backend() == Backend::Avx2 ? avx2::max_abs(x) : scalar::max_abs(x);
}

}  // namespace navslip::kernels
