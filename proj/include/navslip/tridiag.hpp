#pragma once

#include <span>
#include <vector>

namespace navslip {

/// Banded n x n system with one sub- and one super-diagonal.
/// lower[0] and upper[n-1] are ignored.
struct Tridiagonal {
  std::vector<double> lower, diag, upper;

  explicit Tridiagonal(std::size_t n = 0) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}
  std::size_t size() const noexcept { return diag.size(); }
};

/// Thomas algorithm; overwrites rhs with the solution. Throws SolverError on
/// a vanishing pivot.
void solve_tridiagonal(const Tridiagonal& m, std::span<double> rhs);

/// LU factors of a fixed tridiagonal matrix, reused across time steps.
class TridiagonalFactor {
 public:
  explicit TridiagonalFactor(const Tridiagonal& m);
  void solve(std::span<double> rhs) const;
  std::size_t size() const noexcept { return inv_pivot_.size(); }

 private:
  std::vector<double> lower_, inv_pivot_, c_;
};

/// Max-norm of m*x - b.
double tridiagonal_residual(const Tridiagonal& m, std::span<const double> x,
                            std::span<const double> b);

}  // namespace navslip
