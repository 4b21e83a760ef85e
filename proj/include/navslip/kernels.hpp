#pragma once

// Data-parallel inner loops used by the solvers and the norm engine.
// Each kernel has a portable scalar reference and, on x86-64 builds, an AVX2
// variant. The variant is chosen once at startup from CPUID; force_backend()
// pins it (tests use this to compare the two paths).

#include <cstddef>
#include <span>
#include <string_view>

namespace navslip::kernels {

enum class Backend { Scalar, Avx2 };

Backend active_backend() noexcept;
bool avx2_available() noexcept;
/// Throws std::invalid_argument when the requested backend is not compiled in
/// or not supported by the CPU.
void force_backend(Backend b);
std::string_view backend_name(Backend b) noexcept;

/// y[i] = lower[i]*x[i-1] + diag[i]*x[i] + upper[i]*x[i+1] for 1 <= i < n-1.
/// y[0] and y[n-1] are left untouched. Bit-identical across backends.
void tridiag_apply(std::span<const double> lower, std::span<const double> diag,
                   std::span<const double> upper, std::span<const double> x, std::span<double> y);

/// sum_i w[i] * |x[i]|^p. Integer p in [1, 8] takes the vectorised path;
/// other exponents use std::pow in both backends.
double weighted_pow_sum(std::span<const double> x, std::span<const double> w, double p);

double max_abs(std::span<const double> x);

namespace scalar {
void tridiag_apply(std::span<const double> lower, std::span<const double> diag,
                   std::span<const double> upper, std::span<const double> x, std::span<double> y);
double weighted_pow_sum(std::span<const double> x, std::span<const double> w, double p);
double max_abs(std::span<const double> x);
}  // namespace scalar

namespace avx2 {
void tridiag_apply(std::span<const double> lower, std::span<const double> diag,
                   std::span<const double> upper, std::span<const double> x, std::span<double> y);
double weighted_pow_sum(std::span<const double> x, std::span<const double> w, double p);
double max_abs(std::span<const double> x);
}  // namespace avx2

}  // namespace navslip::kernels
