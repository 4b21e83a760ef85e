#include <doctest.h>

#include <cmath>
#include <random>

#include "navslip/error.hpp"
#include "navslip/fit.hpp"

using namespace navslip;

TEST_CASE("an exact power law is recovered") {
  const auto f = fit_rate({{1e-2, 1e-1}, {1e-3, std::pow(10.0, -1.5)}, {1e-4, 1e-2}});
  CHECK(f.slope == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.rows_used == 3);
  CHECK(std::exp(f.intercept) == doctest::Approx(1.0).epsilon(1e-10));  // 1e-1 = C (1e-2)^0.5 with C = 1
}

TEST_CASE("constant errors give slope zero") {
  const auto f = fit_rate({{1e-2, 3.0}, {1e-3, 3.0}, {1e-4, 3.0}});
  CHECK(f.slope == 0.0);
}

TEST_CASE("noisy three-quarter power law stays within 0.02") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::pair<double, double>> rows;
    for (double nu : {1e-2, 3e-3, 1e-3, 3e-4, 1e-4}) rows.emplace_back(nu, 2.7 * std::pow(nu, 0.75) * (1.0 + 0.01 * U(rng)));
    CHECK(std::fabs(fit_rate(rows).slope - 0.75) < 0.02);
  }
}

TEST_CASE("scaling all errors only moves the intercept") {
  std::vector<std::pair<double, double>> rows{{1e-2, 0.3}, {3e-3, 0.11}, {1e-3, 0.052}, {1e-4, 0.0071}};
  const auto a = fit_rate(rows);
  for (auto& r : rows) r.second *= 8.0;
  const auto b = fit_rate(rows);
  CHECK(a.slope == b.slope);  // bit-for-bit
  CHECK(b.intercept == doctest::Approx(a.intercept + std::log(8.0)).epsilon(1e-12));
  for (auto& r : rows) r.second *= 3.7;
  CHECK(fit_rate(rows).slope == doctest::Approx(a.slope).epsilon(1e-14));
}

TEST_CASE("non-positive rows are dropped with a warning") {
  const auto f = fit_rate({{1e-1, 0.0}, {1e-2, 1e-1}, {1e-3, 1e-2}, {1e-4, 1e-3}});
  CHECK(f.rows_used == 3);
  CHECK(f.warnings.size() == 1);
  CHECK(f.slope == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("degenerate inputs are errors") {
  CHECK_THROWS_AS(fit_rate({{1e-2, 1e-15}, {1e-3, 1e-16}, {1e-4, 0.0}}), Error);
  CHECK_THROWS_AS(fit_rate({{1e-2, 1.0}, {1e-3, 0.0}, {1e-4, 1.0}}), Error);
  CHECK_THROWS_AS(fit_rate({{1e-2, 1.0}, {1e-3, 1.0}}), Error);
}
