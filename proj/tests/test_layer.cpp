#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "navslip/error.hpp"
#include "navslip/layer.hpp"
#include "navslip/snapshot_io.hpp"

using namespace navslip;

namespace {

/// Heat kernel answer for d_z b(0) = -g, b(0, z) = 0.
double erfc_profile(double g, double t, double z) {
  const double x = z / (2.0 * std::sqrt(t));
  const double ierfc = std::exp(-x * x) / std::sqrt(std::numbers::pi) - x * std::erfc(x);
  return 2.0 * g * std::sqrt(t) * ierfc;
}

const GeometryDescriptor kAnnulus = GeometryDescriptor::annulus(1.0, 2.0, 0.45);

LayerProfile rigid_layer(CouplingMode mode = CouplingMode::Cross) {
  const auto flow = make_base_flow(EulerFamily{"rigid"}, kAnnulus);
  LayerConfig cfg;
  cfg.nz = 512;
  cfg.dt = 1e-4;
  cfg.t_end = 0.5;
  cfg.output_times = {0.125, 0.25};
  cfg.mode = mode;
  return solve_layer(flow, kAnnulus, cfg);
}

}  // namespace

TEST_CASE("rigid rotation layer is the erfc profile, its pressure corrector is 4t at the wall") {
  const auto prof = rigid_layer();
  REQUIRE(prof.walls.size() == 2);
  for (const auto& wl : prof.walls) {
    const double g = wl.g_used[0][0];
    CHECK(std::fabs(g) == doctest::Approx(2.0));
    CHECK(wl.f_used[0] == 0.0);
    for (double t : {0.125, 0.25, 0.5}) {
      const std::size_t k = prof.time_index(t);
      double err = 0.0;
      for (std::size_t j = 0; j < prof.grid.size(); ++j)
        err = std::max(err, std::fabs(wl.ub[k].at(0, 0, j) - erfc_profile(g, t, prof.grid.z[j])));
      CHECK(err < 1e-4);
      double tang2 = 0.0;
      for (std::size_t j = 0; j < prof.grid.size(); ++j) tang2 = std::max(tang2, std::fabs(wl.ub[k].at(0, 1, j)));
      CHECK(tang2 == 0.0);
      CHECK(wl.q[k].at(0, 0, 0) == doctest::Approx(4.0 * t).epsilon(1e-3));
      double vmax = 0.0;
      for (double v : wl.v[k].values) vmax = std::max(vmax, std::fabs(v));
      CHECK(vmax < 1e-12);
      CHECK(compatibility_residual(wl.ub[k], wl.v[k], wl.samples) < 1e-12);
    }
  }
  CHECK(prof.time_index(0.0) == 0);
  CHECK_THROWS_AS(prof.time_index(0.3), Error);
}

TEST_CASE("coupling modes agree when the coupling is purely normal") {
  const auto a = rigid_layer(CouplingMode::Cross);
  const auto b = rigid_layer(CouplingMode::Projection);
  for (std::size_t w = 0; w < 2; ++w) CHECK(a.walls[w].ub.back().values == b.walls[w].ub.back().values);
}

TEST_CASE("weighted norm monitor follows the closed-form profile") {
  const auto prof = rigid_layer();
  const auto& wl = prof.wall(Wall::Lower);
  const auto series = layer_norm_monitor(wl, {AnisotropicIndex{1, 0, 0, 2.0}});
  REQUIRE(series.size() == 1);
  CHECK_FALSE(series[0].growth_flag);
  REQUIRE(series[0].values.size() == wl.times.size());
  const double g = wl.g_used[0][0];
  for (std::size_t k = 1; k < wl.times.size(); ++k) {
    const double t = wl.times[k];
    double acc = 0.0;
    const int m = 200000;
    const double h = 33.0 / m;
    for (int i = 0; i < m; ++i) {
      const double z = (i + 0.5) * h;
      const double b = erfc_profile(g, t, z);
      acc += (1.0 + z * z) * b * b * h;
    }
    acc *= wl.samples[0].frame.slow_measure;
    CHECK(series[0].values[k] == doctest::Approx(std::sqrt(acc)).epsilon(1e-3));
  }
  // leading-order growth t^{3/4}
  const double r = series[0].values[2] / series[0].values[1];
  CHECK(r > std::pow(2.0, 0.75));
  CHECK(r < std::pow(2.0, 0.75) * 1.2);
}

TEST_CASE("layer configuration errors") {
  const auto flow = make_base_flow(EulerFamily{"rigid"}, kAnnulus);
  LayerConfig cfg;
  cfg.nz = 64;
  cfg.t_end = 0.01;
  cfg.dt = 0.0;
  CHECK_THROWS_AS(solve_layer(flow, kAnnulus, cfg), ConfigError);
  cfg.dt = 3e-3;
  CHECK_THROWS_AS(solve_layer(flow, kAnnulus, cfg), ConfigError);
  cfg.dt = 1e-3;
  cfg.output_times = {0.02};
  CHECK_THROWS_AS(solve_layer(flow, kAnnulus, cfg), ConfigError);
  cfg.output_times = {0.0025};
  CHECK_THROWS_AS(solve_layer(flow, kAnnulus, cfg), ConfigError);
  cfg.output_times = {};
  cfg.s_samples = {};
  CHECK_THROWS_AS(solve_layer(flow, kAnnulus, cfg), ConfigError);
}

TEST_CASE("explicit stretching term enforces its CFL limit") {
  const auto ch = GeometryDescriptor::channel(1.0, 0.45);
  LayerConfig cfg;
  cfg.nz = 512;
  cfg.dt = 1e-4;
  cfg.t_end = 1e-3;
  cfg.walls = {Wall::Lower};
  const auto fg = FastGrid::mapped(cfg.nz);
  const double limit = fg.dz_min() / (fg.zmax() * cfg.dt);
  CHECK_NOTHROW(solve_layer(stagnation_base_flow(0.9 * limit), ch, cfg));
  CHECK_THROWS_AS(solve_layer(stagnation_base_flow(1.1 * limit), ch, cfg), ConfigError);
}

TEST_CASE("walls solved concurrently match the serial result") {
  const auto flow = make_base_flow(EulerFamily{"swirl_poly:0.2,1,-0.3"}, kAnnulus);
  LayerConfig cfg;
  cfg.nz = 128;
  cfg.dt = 1e-3;
  cfg.t_end = 0.05;
  cfg.s_samples = {0.0, 0.1, 0.2};
  const auto a = solve_layer(flow, kAnnulus, cfg);
  cfg.jobs = 2;
  const auto b = solve_layer(flow, kAnnulus, cfg);
  for (std::size_t w = 0; w < 2; ++w) CHECK(a.walls[w].ub.back().values == b.walls[w].ub.back().values);
}

TEST_CASE("snapshot text round-trips through the reader") {
  const auto flow = make_base_flow(EulerFamily{"rigid"}, kAnnulus);
  LayerConfig cfg;
  cfg.nz = 32;
  cfg.dt = 1e-3;
  cfg.t_end = 0.01;
  const auto prof = solve_layer(flow, kAnnulus, cfg);
  std::stringstream ss;
  write_layer_snapshots(ss, prof);
  const auto blocks = read_snapshots(ss);
  REQUIRE(blocks.size() == 2);
  CHECK(blocks[0].label == "lower");
  CHECK(blocks[1].label == "upper");
  CHECK(blocks[0].columns == std::vector<std::string>{"t", "s", "z", "ub1", "ub2", "q", "v"});
  CHECK(blocks[0].rows.size() == 2 * 32);
  const auto& last = blocks[1].rows.back();
  const auto& wl = prof.wall(Wall::Upper);
  CHECK(last[0] == 0.01);
  CHECK(last[3] == wl.ub.back().at(0, 0, 31));
  CHECK(blocks[1].rows[32][3] == wl.ub.back().at(0, 0, 0));
}
