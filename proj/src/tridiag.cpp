#include "navslip/tridiag.hpp"

#include <cmath>
#include <vector>

#include "navslip/error.hpp"

namespace navslip {

void solve_tridiagonal(const Tridiagonal& m, std::span<double> rhs) {
  const std::size_t n = m.size();
  if (n == 0) return;
  std::vector<double> c(n);
  double pivot = m.diag[0];
  if (pivot == 0.0) throw SolverError("tridiagonal solve: zero pivot", 0.0);
  c[0] = m.upper[0] / pivot;
  rhs[0] /= pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = m.diag[i] - m.lower[i] * c[i - 1];
    if (pivot == 0.0 || !std::isfinite(pivot))
      throw SolverError("tridiagonal solve: zero pivot", 0.0);
    c[i] = (i + 1 < n) ? m.upper[i] / pivot : 0.0;
    rhs[i] = (rhs[i] - m.lower[i] * rhs[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
}

TridiagonalFactor::TridiagonalFactor(const Tridiagonal& m)
    : lower_(m.lower), inv_pivot_(m.size()), c_(m.size(), 0.0) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double pivot = i == 0 ? m.diag[0] : m.diag[i] - m.lower[i] * c_[i - 1];
    if (pivot == 0.0 || !std::isfinite(pivot)) throw SolverError("tridiagonal factor: zero pivot", 0.0);
    inv_pivot_[i] = 1.0 / pivot;
    if (i + 1 < n) c_[i] = m.upper[i] * inv_pivot_[i];
  }
}

void TridiagonalFactor::solve(std::span<double> rhs) const {
  const std::size_t n = inv_pivot_.size();
  if (n == 0) return;
  rhs[0] *= inv_pivot_[0];
  for (std::size_t i = 1; i < n; ++i) rhs[i] = (rhs[i] - lower_[i] * rhs[i - 1]) * inv_pivot_[i];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c_[i] * rhs[i + 1];
}

double tridiagonal_residual(const Tridiagonal& m, std::span<const double> x,
                            std::span<const double> b) {
  const std::size_t n = m.size();
  double r = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double ax = m.diag[i] * x[i];
    if (i > 0) ax += m.lower[i] * x[i - 1];
    if (i + 1 < n) ax += m.upper[i] * x[i + 1];
    r = std::max(r, std::fabs(ax - b[i]));
  }
  return r;
}

}  // namespace navslip
