#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "navslip/kernels.hpp"

using namespace navslip;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  std::vector<double> v(n);
  for (auto& x : v) x = U(rng);
  return v;
}

/// Plain loop, the reference the two backends are held to.
double naive_pow_sum(const std::vector<double>& x, const std::vector<double>& w, double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(std::fabs(x[i]), p);
  return s;
}

}  // namespace

TEST_CASE("scalar tridiag_apply matches a direct loop and leaves the ends alone") {
  std::mt19937_64 rng(1);
  const std::size_t n = 9;
  auto lo = random_vec(n, rng), di = random_vec(n, rng), up = random_vec(n, rng), x = random_vec(n, rng);
  std::vector<double> y(n, 42.0);
  kernels::scalar::tridiag_apply(lo, di, up, x, y);
  CHECK(y[0] == 42.0);
  CHECK(y[n - 1] == 42.0);
  for (std::size_t i = 1; i + 1 < n; ++i) CHECK(y[i] == lo[i] * x[i - 1] + di[i] * x[i] + up[i] * x[i + 1]);
}

TEST_CASE("scalar reductions match the naive oracle") {
  std::mt19937_64 rng(2);
  auto x = random_vec(101, rng), w = random_vec(101, rng);
  for (auto& v : w) v = std::fabs(v);
  for (double p : {1.0, 2.0, 3.0, 4.0, 5.0, 8.0, 2.5, 0.7}) {
    const double ref = naive_pow_sum(x, w, p);
    CHECK(kernels::scalar::weighted_pow_sum(x, w, p) == doctest::Approx(ref).epsilon(1e-13));
  }
  double m = 0.0;
  for (double v : x) m = std::max(m, std::fabs(v));
  CHECK(kernels::scalar::max_abs(x) == m);
  CHECK(kernels::scalar::max_abs(std::vector<double>{}) == 0.0);
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
  if (!kernels::avx2_available()) {
    MESSAGE("AVX2 not available, equivalence test skipped");
    return;
  }
  std::mt19937_64 rng(3);
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 17u, 64u, 1001u}) {
    auto lo = random_vec(n, rng), di = random_vec(n, rng), up = random_vec(n, rng), x = random_vec(n, rng);
    auto w = random_vec(n, rng);
    for (auto& v : w) v = std::fabs(v);
    if (n >= 2) {
      std::vector<double> y1(n, -1.0), y2(n, -1.0);
      kernels::scalar::tridiag_apply(lo, di, up, x, y1);
      kernels::avx2::tridiag_apply(lo, di, up, x, y2);
      CHECK(y1 == y2);  // bit-identical by construction
    }
    CHECK(kernels::scalar::max_abs(x) == kernels::avx2::max_abs(x));
    for (double p : {1.0, 2.0, 3.0, 4.0, 6.0, 8.0, 1.5}) {
      const double a = kernels::scalar::weighted_pow_sum(x, w, p);
      const double b = kernels::avx2::weighted_pow_sum(x, w, p);
      CHECK(b == doctest::Approx(a).epsilon(1e-13));
    }
  }
}

TEST_CASE("backend selection can be pinned") {
  const auto original = kernels::active_backend();
  kernels::force_backend(kernels::Backend::Scalar);
  CHECK(kernels::active_backend() == kernels::Backend::Scalar);
  CHECK(kernels::backend_name(kernels::Backend::Scalar) == "scalar");
  if (kernels::avx2_available()) {
    kernels::force_backend(kernels::Backend::Avx2);
    CHECK(kernels::active_backend() == kernels::Backend::Avx2);
  } else {
    CHECK_THROWS_AS(kernels::force_backend(kernels::Backend::Avx2), std::invalid_argument);
  }
  kernels::force_backend(original);
}

TEST_CASE("dispatching entry points give the same answer on either backend") {
  std::mt19937_64 rng(4);
  auto x = random_vec(333, rng), w = random_vec(333, rng);
  for (auto& v : w) v = std::fabs(v);
  const auto original = kernels::active_backend();
  kernels::force_backend(kernels::Backend::Scalar);
  const double s = kernels::weighted_pow_sum(x, w, 4.0);
  if (kernels::avx2_available()) kernels::force_backend(kernels::Backend::Avx2);
  CHECK(kernels::weighted_pow_sum(x, w, 4.0) == doctest::Approx(s).epsilon(1e-13));
  kernels::force_backend(original);
}
