#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "navslip/error.hpp"
#include "navslip/spaces.hpp"

using namespace navslip;

namespace {

ProfileField exp_profile(int nz = 512) {
  const FastGrid g = FastGrid::mapped(nz);
  ProfileField f({0.0}, {1.0}, g, 1);
  for (std::size_t j = 0; j < g.size(); ++j) f.at(0, 0, j) = std::exp(-g.z[j]);
  return f;
}

}  // namespace

TEST_CASE("mapped fast grid spans [0, zmax] and stretches outward") {
  const FastGrid g = FastGrid::mapped(256);
  CHECK(g.z.front() == 0.0);
  CHECK(g.zmax() == 33.0);
  double sw = 0.0;
  for (double w : g.weight) sw += w;
  CHECK(sw == doctest::Approx(33.0).epsilon(1e-12));
  for (std::size_t j = 2; j < g.size(); ++j) CHECK(g.z[j] - g.z[j - 1] > g.z[j - 1] - g.z[j - 2]);
  CHECK(g.dz_min() == doctest::Approx(2.0 * (1.0 - std::exp(-16.5)) / 255.0).epsilon(1e-2));
  CHECK_THROWS_AS(FastGrid::mapped(4), ConfigError);
}

TEST_CASE("norm strings parse into specs") {
  CHECK(parse_norm("l2").p == 2.0);
  CHECK(std::isinf(parse_norm("linf").p));
  CHECK(parse_norm("h1").kind == NormSpec::Kind::H1);
  CHECK(parse_norm("lp:4").p == 4.0);
  const auto a = parse_norm("aniso:1,2,1,inf");
  CHECK(a.kind == NormSpec::Kind::Aniso);
  CHECK(a.idx.k == 1);
  CHECK(a.idx.m == 2);
  CHECK(std::isinf(a.idx.p));
  CHECK(a.text == "aniso:1,2,1,inf");
  for (const char* bad : {"l3", "lp:", "lp:0.5", "lp:x", "aniso:1,2", "aniso:-1,0,0,2", "aniso:1,0,0,2,3"})
    CHECK_THROWS_AS(parse_norm(bad), ConfigError);
}

TEST_CASE("weighted norms of exp(-z) match closed forms") {
  const auto f = exp_profile();
  // int e^{-2z} = 1/2, int z^2 e^{-2z} = 1/4
  CHECK(weighted_norm(f, {0, 0, 0, 2.0}) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-4));
  CHECK(weighted_norm(f, {1, 0, 0, 2.0}) == doctest::Approx(std::sqrt(0.75)).epsilon(1e-4));
  CHECK(weighted_norm(f, {0, 0, 1, 2.0}) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(weighted_norm(f, {0, 0, 0, 4.0}) == doctest::Approx(std::pow(0.25, 0.25)).epsilon(1e-4));
  CHECK(weighted_norm(f, {0, 0, 1, kInf}) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK_THROWS_AS(weighted_norm(f, {1, 0, 0, kInf}), ConfigError);
  CHECK_THROWS_AS(weighted_norm(f, {0, -1, 0, 2.0}), ConfigError);
}

TEST_CASE("slow derivatives enter the anisotropic norm") {
  const FastGrid g = FastGrid::mapped(256);
  const int ns = 201;
  std::vector<double> s(ns), w(ns);
  for (int i = 0; i < ns; ++i) {
    s[i] = static_cast<double>(i) / (ns - 1);
    w[i] = (i == 0 || i == ns - 1 ? 0.5 : 1.0) / (ns - 1);
  }
  ProfileField f(s, w, g, 1);
  for (int i = 0; i < ns; ++i)
    for (std::size_t j = 0; j < g.size(); ++j) f.at(i, 0, j) = std::sin(s[i]) * std::exp(-g.z[j]);
  // int_0^1 (sin^2 + cos^2) ds * int e^{-2z} dz = 1/2
  CHECK(weighted_norm(f, {0, 1, 0, 2.0}) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-3));
}

TEST_CASE("three-point derivative is exact for quadratics on a nonuniform grid") {
  std::vector<double> x{0.0, 0.1, 0.35, 0.4, 0.9, 1.7}, f, df;
  for (double v : x) {
    f.push_back(3.0 - 2.0 * v + 5.0 * v * v);
    df.push_back(-2.0 + 10.0 * v);
  }
  const auto d = derivative(x, f);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(d[i] == doctest::Approx(df[i]).epsilon(1e-12));
}

TEST_CASE("cubic interpolation is exact for cubics and clamps outside") {
  std::vector<double> x{0.0, 0.3, 0.5, 1.1, 1.2, 2.0}, f;
  auto p = [](double v) { return 1.0 - v + 0.5 * v * v - 0.25 * v * v * v; };
  for (double v : x) f.push_back(p(v));
  for (double at : {0.01, 0.4, 0.77, 1.15, 1.99}) CHECK(cubic_interpolate(x, f, at) == doctest::Approx(p(at)).epsilon(1e-12));
  CHECK(cubic_interpolate(x, f, -1.0) == f.front());
  CHECK(cubic_interpolate(x, f, 9.0) == f.back());
}

TEST_CASE("volume norms on the annulus") {
  const auto g = GeometryDescriptor::annulus(1.0, 2.0, 0.45);
  const auto grid = clustered_volume_grid(g, 400);
  VolumeField one(grid.q.size()), rigid(grid.q.size());
  for (std::size_t i = 0; i < grid.q.size(); ++i) {
    one.tang2[i] = 1.0;
    rigid.tang1[i] = grid.q[i];
  }
  CHECK(volume_lp_norm(grid, one, 2.0) == doctest::Approx(std::sqrt(3.0 * std::numbers::pi)).epsilon(1e-12));
  CHECK(volume_lp_norm(grid, one, kInf) == 1.0);
  // |u|^2 + |du/dr|^2 + |u/r|^2 = r^2 + 2 against 2 pi r dr on [1, 2]
  const double h1 = std::sqrt(2.0 * std::numbers::pi * (15.0 / 4.0 + 3.0));
  CHECK(volume_h1_norm(g, grid, rigid) == doctest::Approx(h1).epsilon(1e-4));
  CHECK(volume_norm(g, grid, rigid, parse_norm("h1")) == volume_h1_norm(g, grid, rigid));
  CHECK_THROWS_AS(volume_norm(g, grid, rigid, parse_norm("aniso:0,0,0,2")), ConfigError);
}

TEST_CASE("layer evaluation places the profile at phi/sqrt(nu) under the cutoff") {
  const auto g = GeometryDescriptor::annulus(1.0, 2.0, 0.45);
  const auto grid = clustered_volume_grid(g, 200);
  const auto f = exp_profile();
  const double nu = 1e-3;
  const auto ev = boundary_layer_eval(f, g, Wall::Upper, grid, nu, 2.0);
  CHECK_FALSE(ev.regime_warning);
  for (std::size_t i = 0; i < grid.q.size(); i += 7) {
    const double phi = 2.0 - grid.q[i];
    const double expect = collar_cutoff(phi, g.eta) * std::exp(-phi / std::sqrt(nu));
    CHECK(std::fabs(ev.components[0][i] - expect) < 1e-5);
  }
  CHECK(boundary_layer_eval(f, g, Wall::Lower, grid, 0.02, 2.0).regime_warning);
  CHECK_THROWS_AS(boundary_layer_eval(f, g, Wall::Lower, grid, 0.0, 2.0), ConfigError);
}

TEST_CASE("layer norms scale like nu^(1/(2p))") {
  const auto g = GeometryDescriptor::annulus(1.0, 2.0, 0.45);
  const auto grid = clustered_volume_grid(g, 200);
  const auto f = exp_profile();
  for (double p : {2.0, 4.0, 6.0}) {
    const auto sc = scaling_exponent_check(f, g, Wall::Lower, grid, {1e-2, 1e-3, 1e-4, 1e-5}, p);
    CHECK(std::fabs(sc.exponent - 1.0 / (2.0 * p)) <= 0.02);
    CHECK(sc.r2 > 0.99);
    CHECK(sc.max_ratio < 10.0);
  }
  CHECK_THROWS_AS(scaling_exponent_check(f, g, Wall::Lower, grid, {1e-2, 1e-3}, 2.0), ConfigError);
  CHECK_THROWS_AS(scaling_exponent_check(f, g, Wall::Lower, grid, {1e-2, 5e-3, 2e-3}, 2.0), ConfigError);
}

TEST_CASE("Hardy ratio agrees with dense quadrature and stays below 4") {
  const auto g = GeometryDescriptor::channel(1.0, 0.45);
  const auto grid = clustered_volume_grid(g, 200);
  const std::size_t n = grid.q.size();
  const double eta = g.eta;
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::min(grid.q[i], 1.0 - grid.q[i]);
    u[i] = d < eta ? std::pow(std::sin(std::numbers::pi * d / eta), 2) : 0.0;
  }
  u[0] = u[1] = u[n - 2] = u[n - 1] = 0.0;
  const double ratio = hardy_ratio(g, grid, u, 2.0, 0.0);
  double num = 0.0, den = 0.0;
  const int m = 400000;
  for (int k = 0; k < m; ++k) {
    const double d = (k + 0.5) * eta / m;
    const double s = std::sin(std::numbers::pi * d / eta);
    const double ds = (std::numbers::pi / eta) * std::sin(2.0 * std::numbers::pi * d / eta);
    num += s * s * s * s / (d * d);
    den += ds * ds;
  }
  CHECK(ratio == doctest::Approx(num / den).epsilon(0.02));
  CHECK(ratio < 4.0);
  u[1] = 0.1;
  CHECK_THROWS_AS(hardy_ratio(g, grid, u, 2.0, 0.0), DomainError);
  CHECK_THROWS_AS(hardy_ratio(g, grid, u, 2.0, 1.0), ConfigError);
}

TEST_CASE("local Gronwall bound: closed form, blow-up horizon and RK4 dominance") {
  const std::vector<double> t0{0.0, 0.5}, h0{0.0, 0.0};
  CHECK(gronwall_local_bound(1.0, t0, h0, 1.0, 1.0, 0.5) == doctest::Approx(2.0).epsilon(1e-14));
  const std::vector<double> t1{0.0, 2.0}, h1{0.0, 0.0};
  try {
    gronwall_local_bound(1.0, t1, h1, 1.0, 1.0, 2.0);
    FAIL("expected a blow-up horizon error");
  } catch (const BlowUpHorizonError& e) {
    CHECK(e.critical_time() == doctest::Approx(1.0).epsilon(1e-9));
  }
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int checked = 0;
  while (checked < 20) {
    const double y0 = 0.2 + U(rng), hc = U(rng), c0 = 0.2 + U(rng), alpha = 0.5 + U(rng), T = 0.1 + 0.5 * U(rng);
    const std::vector<double> ts{0.0, T}, hs{hc, hc};
    double bound;
    try {
      bound = gronwall_local_bound(y0, ts, hs, c0, alpha, T);
    } catch (const BlowUpHorizonError&) {
      continue;
    }
    double y = y0;
    const int steps = 2000;
    const double dt = T / steps;
    auto f = [&](double v) { return hc + c0 * std::pow(v, 1.0 + alpha); };
    for (int k = 0; k < steps; ++k) {
      const double k1 = f(y), k2 = f(y + dt / 2 * k1), k3 = f(y + dt / 2 * k2), k4 = f(y + dt * k3);
      y += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    CHECK(y <= bound * (1.0 + 1e-9));
    ++checked;
  }
  CHECK_THROWS_AS(gronwall_local_bound(1.0, t0, h0, 0.0, 1.0, 0.5), ConfigError);
}
