#include <doctest.h>

#include <cmath>

#include "navslip/checks.hpp"

using namespace navslip;

namespace {

/// omega(r2) from RK4 shooting of omega' = -k^2 u, (r u)' = r omega, u(r1) = 1, omega(r1) = 0.
double shoot(double k, double r1, double r2) {
  const int n = 4000;
  const double h = (r2 - r1) / n;
  auto rhs = [k](double r, double u, double w, double& du, double& dw) {
    dw = -k * k * u;
    du = w - u / r;
  };
  double r = r1, u = 1.0, w = 0.0;
  for (int i = 0; i < n; ++i) {
    double a1, b1, a2, b2, a3, b3, a4, b4;
    rhs(r, u, w, a1, b1);
    rhs(r + h / 2, u + h / 2 * a1, w + h / 2 * b1, a2, b2);
    rhs(r + h / 2, u + h / 2 * a2, w + h / 2 * b2, a3, b3);
    rhs(r + h, u + h * a3, w + h * b3, a4, b4);
    u += h / 6 * (a1 + 2 * a2 + 2 * a3 + a4);
    w += h / 6 * (b1 + 2 * b2 + 2 * b3 + b4);
    r += h;
  }
  return w;
}

}  // namespace

TEST_CASE("slip wavenumber of the annulus matches a shooting oracle") {
  const double k = annulus_slip_wavenumber(1.0, 2.0);
  double lo = 0.5, hi = 2.0 * k;
  // first sign change of the shooting function above 0
  for (double x = 0.5; x < 2.0 * k; x += 0.01)
    if (shoot(x, 1.0, 2.0) * shoot(x + 0.01, 1.0, 2.0) <= 0.0) {
      lo = x;
      hi = x + 0.01;
      break;
    }
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (shoot(lo, 1.0, 2.0) * shoot(mid, 1.0, 2.0) <= 0.0 ? hi : lo) = mid;
  }
  CHECK(k == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-8));
}

TEST_CASE("observed orders of an order study") {
  OrderStudy s;
  s.orders = {2.1, 1.9, 2.0};
  CHECK(s.min_order() == 1.9);
}

TEST_CASE("each invariant passes on both geometries") {
  for (const auto& g : {GeometryDescriptor::annulus(1.0, 2.0, 0.45), GeometryDescriptor::channel(1.0, 0.45)}) {
    for (const auto& r : {check_geometry(g), check_projector(g), check_energy_identity(g), check_hardy(g)}) {
      INFO(r.name << ": " << r.detail);
      CHECK(r.pass);
      CHECK(r.seconds >= 0.0);
    }
  }
  for (const auto& r : {check_kernels(), check_layer_scaling(), check_gronwall(40), check_bc_orders()}) {
    INFO(r.name << ": " << r.detail);
    CHECK(r.pass);
  }
  double rel = -1.0;
  const auto e = check_erfc_oracle(&rel);
  CHECK(e.pass);
  CHECK(rel >= 0.0);
  CHECK(rel < 1e-4);
}

TEST_CASE("preset chains are consistent") {
  for (const auto& name : preset_names()) {
    const auto r = check_preset_chain(preset_config(name));
    INFO(name << ": " << r.detail);
    CHECK(r.pass);
  }
}
