#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "navslip/error.hpp"
#include "navslip/ns.hpp"
#include "navslip/snapshot_io.hpp"

using namespace navslip;

namespace {

const GeometryDescriptor kAnnulus = GeometryDescriptor::annulus(1.0, 2.0, 0.45);
const GeometryDescriptor kChannel = GeometryDescriptor::channel(1.0, 0.45);

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::fabs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("clustered nodes hit the walls and shrink the wall spacing") {
  const auto u = clustered_nodes(1.0, 2.0, 101, 0.0);
  for (int i = 0; i <= 100; ++i) CHECK(u[i] == doctest::Approx(1.0 + i / 100.0).epsilon(1e-14));
  const auto c = clustered_nodes(1.0, 2.0, 101, 0.9);
  CHECK(c.front() == 1.0);
  CHECK(c.back() == 2.0);
  for (int i = 1; i <= 100; ++i) CHECK(c[i] > c[i - 1]);
  CHECK((c[1] - c[0]) / 0.01 == doctest::Approx(0.1).epsilon(1e-3));
  CHECK((c[100] - c[99]) / 0.01 == doctest::Approx(0.1).epsilon(1e-3));
}

TEST_CASE("one-sided Lagrange derivative weights") {
  const auto w = lagrange_derivative_weights({0.0, 1.0, 2.0});
  CHECK(w[0] == doctest::Approx(-1.5));
  CHECK(w[1] == doctest::Approx(2.0));
  CHECK(w[2] == doctest::Approx(-0.5));
  const std::vector<double> x{1.0, 1.1, 1.3, 1.6};
  const auto v = lagrange_derivative_weights(x);
  double d = 0.0;
  for (int k = 0; k < 4; ++k) d += v[k] * std::pow(x[k], 3);
  CHECK(d == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("wall vorticity is exact for rigid rotation and the potential vortex") {
  const auto q = clustered_nodes(1.0, 2.0, 64, 0.9);
  std::vector<double> rigid(q.size()), vortex(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    rigid[i] = q[i];
    vortex[i] = 1.0 / q[i];
  }
  for (Wall w : {Wall::Lower, Wall::Upper}) {
    CHECK(wall_vorticity(kAnnulus, q, rigid, w) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::fabs(wall_vorticity(kAnnulus, q, vortex, w)) < 1e-10);
  }
}

TEST_CASE("potential vortex and uniform shear are steady") {
  NsConfig cfg;
  cfg.n = 256;
  cfg.dt = 1e-3;
  cfg.t_end = 0.1;
  const auto v = solve_ns(kAnnulus, [](double r) { return 1.0 / r; }, 1e-2, cfg);
  CHECK(max_diff(v.u.front(), v.u.back()) < 1e-12);
  CHECK(v.scheme == "crank-nicolson+rannacher");
  const auto c = solve_ns(kChannel, [](double) { return 1.0; }, 1e-2, cfg);
  CHECK(max_diff(c.u.front(), c.u.back()) < 1e-13);
}

TEST_CASE("channel cosine mode decays at nu pi^2") {
  NsConfig cfg;
  cfg.n = 512;
  cfg.dt = 1e-3;
  cfg.t_end = 0.5;
  cfg.startup_smoothing = false;
  const double nu = 0.1;
  const auto s = solve_ns(kChannel, [](double y) { return std::cos(std::numbers::pi * y); }, nu, cfg);
  const double decay = std::exp(-nu * std::numbers::pi * std::numbers::pi * 0.5);
  double err = 0.0;
  for (std::size_t i = 0; i < s.grid.q.size(); ++i)
    err = std::max(err, std::fabs(s.u.back()[i] - decay * std::cos(std::numbers::pi * s.grid.q[i])));
  CHECK(err < 1e-4);
}

TEST_CASE("angular momentum balance dM/dt = -4 pi nu [r u]") {
  NsConfig cfg;
  cfg.n = 2048;
  cfg.dt = 1e-4;
  cfg.t_end = 0.2;
  cfg.output_times = {0.099, 0.1, 0.101};
  const double nu = 1e-2;
  const auto s = solve_ns(kAnnulus, [](double r) { return r; }, nu, cfg);
  auto M = [&](std::size_t k) {
    double m = 0.0;
    for (std::size_t i = 0; i < s.grid.q.size(); ++i) m += s.grid.weight[i] * s.grid.q[i] * s.u[k][i];
    return m;
  };
  const std::size_t k0 = s.time_index(0.099), k1 = s.time_index(0.1), k2 = s.time_index(0.101);
  const double dMdt = (M(k2) - M(k0)) / 0.002;
  const auto& u = s.u[k1];
  const double flux = -4.0 * std::numbers::pi * nu * (2.0 * u.back() - 1.0 * u.front());
  CHECK(dMdt == doctest::Approx(flux).epsilon(1e-2));
  CHECK(std::fabs(flux) > 1e-3);
}

TEST_CASE("energy identity and boundary residuals stay small") {
  NsConfig cfg;
  cfg.n = 512;
  cfg.dt = 1e-3;
  cfg.t_end = 0.05;
  cfg.store_every = 1;
  cfg.stretch = 0.0;
  cfg.startup_smoothing = false;
  const auto bump = [](double r) {
    const double x = r - 1.0;
    return x > 0.3 && x < 0.7 ? std::pow(std::sin(std::numbers::pi * (x - 0.3) / 0.4), 4) : 0.0;
  };
  const auto s = solve_ns(kAnnulus, bump, 1e-2, cfg);
  const auto res = energy_identity_residual(s);
  CHECK(res.size() == s.times.size() - 1);
  for (double r : res) CHECK(r < 1e-4);
  const auto rigid = solve_ns(kAnnulus, [](double r) { return r; }, 1e-2, cfg);
  const auto bc = bc_residual(rigid);
  // rigid data carries wall vorticity 2 at t = 0; the scheme removes it
  CHECK(bc.front() == doctest::Approx(2.0).epsilon(1e-6));
  for (std::size_t k = bc.size() - 10; k < bc.size(); ++k) CHECK(bc[k] < 1e-3);
  CHECK(kinetic_energy(s, s.u.back()) < kinetic_energy(s, s.u.front()));
  CHECK(enstrophy(s, s.u.front()) > 0.0);
}

TEST_CASE("viscous solver configuration errors") {
  const auto U = [](double r) { return r; };
  NsConfig cfg;
  cfg.n = 64;
  cfg.dt = 1e-3;
  cfg.t_end = 0.01;
  CHECK_NOTHROW(solve_ns(kAnnulus, U, 1e-2, cfg));
  CHECK_THROWS_AS(solve_ns(kAnnulus, U, 0.0, cfg), ConfigError);
  auto bad = cfg;
  bad.dt = -1.0;
  CHECK_THROWS_AS(solve_ns(kAnnulus, U, 1e-2, bad), ConfigError);
  bad = cfg;
  bad.n = 16;
  CHECK_THROWS_AS(solve_ns(kAnnulus, U, 1e-2, bad), ConfigError);
  bad = cfg;
  bad.stretch = 1.0;
  CHECK_THROWS_AS(solve_ns(kAnnulus, U, 1e-2, bad), ConfigError);
  bad = cfg;
  bad.output_times = {0.0015};
  CHECK_THROWS_AS(solve_ns(kAnnulus, U, 1e-2, bad), ConfigError);
  const auto sol = solve_ns(kAnnulus, U, 1e-2, cfg);
  CHECK_THROWS_AS(sol.time_index(0.005), Error);
}

TEST_CASE("viscous snapshots round-trip") {
  NsConfig cfg;
  cfg.n = 40;
  cfg.dt = 1e-3;
  cfg.t_end = 0.002;
  cfg.store_every = 1;
  const auto s = solve_ns(kChannel, [](double y) { return y * y; }, 1e-2, cfg);
  std::stringstream ss;
  write_ns_snapshots(ss, s);
  CHECK(ss.str().rfind("# nu=", 0) == 0);
  const auto blocks = read_snapshots(ss);
  REQUIRE(blocks.size() == 1);
  CHECK(blocks[0].columns == std::vector<std::string>{"t", "s", "z", "u"});
  REQUIRE(blocks[0].rows.size() == 3 * 40);
  CHECK(blocks[0].rows.back()[3] == s.u.back().back());
  CHECK(blocks[0].rows[41][2] == s.grid.q[1]);
}
