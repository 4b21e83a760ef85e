#include "navslip/euler.hpp"

#include <cmath>
#include <sstream>

#include "navslip/error.hpp"

namespace navslip {

Profile1D Profile1D::polynomial(std::vector<double> a) {
  Profile1D p;
  p.value = [a](double q) {
    double r = 0.0;
    for (std::size_t k = a.size(); k-- > 0;) r = r * q + a[k];
    return r;
  };
  p.d1 = [a](double q) {
    double r = 0.0;
    for (std::size_t k = a.size(); k-- > 1;) r = r * q + k * a[k];
    return r;
  };
  p.d2 = [a](double q) {
    double r = 0.0;
    for (std::size_t k = a.size(); k-- > 2;) r = r * q + k * (k - 1) * a[k];
    return r;
  };
  return p;
}

Profile1D Profile1D::rigid(double omega) { return polynomial({0.0, omega}); }

Profile1D Profile1D::vortex(double c) {
  return {[c](double r) { return c / r; }, [c](double r) { return -c / (r * r); },
          [c](double r) { return 2.0 * c / (r * r * r); }};
}

BaseFlow swirl_base_flow(Profile1D U, const GeometryDescriptor& g, std::string tag) {
  if (g.kind != GeometryKind::AnnulusGap) throw ConfigError("swirl flow needs an annulus_gap geometry");
  for (int i = 0; i <= 64; ++i) {
    const double r = g.r1 + (g.r2 - g.r1) * i / 64.0;
    if (!std::isfinite(U.value(r)) || !std::isfinite(U.d1(r)))
      throw ConfigError("swirl profile is not finite on [r1, r2]");
  }
  BaseFlow f;
  f.tag = std::move(tag);
  f.profile = U;
  f.velocity = [U](double, const Vec3& x) {
    const double r = std::hypot(x[0], x[1]);
    const double v = U.value(r) / r;
    return Vec3{-v * x[1], v * x[0], 0.0};
  };
  f.gradient = [U](double, const Vec3& x) {
    const double r = std::hypot(x[0], x[1]);
    const double V = U.value(r) / r;
    const double dV = (U.d1(r) - V) / r;
    const double a = dV / r;
    return Mat3{Vec3{-x[1] * x[0] * a, -V - x[1] * x[1] * a, 0.0},
                Vec3{V + x[0] * x[0] * a, x[0] * x[1] * a, 0.0}, Vec3{0.0, 0.0, 0.0}};
  };
  f.vorticity = [U](double, const Vec3& x) {
    const double r = std::hypot(x[0], x[1]);
    return Vec3{0.0, 0.0, U.d1(r) + U.value(r) / r};
  };
  const double r1 = g.r1;
  f.pressure = [U, r1](double, const Vec3& x) {
    // pi0(r) = int_{r1}^{r} U^2/s ds, composite Simpson
    const double r = std::hypot(x[0], x[1]);
    const int n = 256;
    const double h = (r - r1) / n;
    auto k = [&](double s) { return U.value(s) * U.value(s) / s; };
    double acc = k(r1) + k(r);
    for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * k(r1 + i * h);
    return acc * h / 3.0;
  };
  f.pressure_gradient = [U](double, const Vec3& x) {
    const double r = std::hypot(x[0], x[1]);
    const double dp = U.value(r) * U.value(r) / r;
    return Vec3{dp * x[0] / r, dp * x[1] / r, 0.0};
  };
  f.stretching = [](double, const Vec3&) { return 0.0; };
  return f;
}

BaseFlow channel_base_flow(Profile1D U, const GeometryDescriptor& g, std::string tag) {
  if (g.kind != GeometryKind::FlatChannel) throw ConfigError("shear flow needs a flat_channel geometry");
  for (int i = 0; i <= 64; ++i)
    if (!std::isfinite(U.value(g.h * i / 64.0))) throw ConfigError("shear profile is not finite on [0, H]");
  BaseFlow f;
  f.tag = std::move(tag);
  f.profile = U;
  f.velocity = [U](double, const Vec3& x) { return Vec3{U.value(x[1]), 0.0, 0.0}; };
  f.gradient = [U](double, const Vec3& x) {
    Mat3 m = zero_mat3();
    m[0][1] = U.d1(x[1]);
    return m;
  };
  f.vorticity = [U](double, const Vec3& x) { return Vec3{0.0, 0.0, -U.d1(x[1])}; };
  f.pressure = [](double, const Vec3&) { return 0.0; };
  f.pressure_gradient = [](double, const Vec3&) { return Vec3{0.0, 0.0, 0.0}; };
  f.stretching = [](double, const Vec3&) { return 0.0; };
  return f;
}

BaseFlow stagnation_base_flow(double lambda, bool wrong_pressure) {
  BaseFlow f;
  f.tag = wrong_pressure ? "manufactured:stagnation_badp" : "manufactured:stagnation";
  f.velocity = [lambda](double, const Vec3& x) { return Vec3{lambda * x[0], -lambda * x[1], 0.0}; };
  f.gradient = [lambda](double, const Vec3&) {
    Mat3 m = zero_mat3();
    m[0][0] = lambda;
    m[1][1] = -lambda;
    return m;
  };
  f.vorticity = [](double, const Vec3&) { return Vec3{0.0, 0.0, 0.0}; };
  const double c = wrong_pressure ? 0.0 : 1.0;
  f.pressure = [lambda, c](double, const Vec3& x) {
    return -c * 0.5 * lambda * lambda * (x[0] * x[0] + x[1] * x[1]);
  };
  f.pressure_gradient = [lambda, c](double, const Vec3& x) {
    return Vec3{-c * lambda * lambda * x[0], -c * lambda * lambda * x[1], 0.0};
  };
  // u0.n / phi with n = e_y, phi = y on the lower wall.
  f.stretching = [lambda](double, const Vec3&) { return -lambda; };
  f.profile = Profile1D::polynomial({0.0});
  return f;
}

namespace {

std::vector<double> parse_coeffs(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw ConfigError("bad coefficient '" + tok + "'");
    } catch (const std::logic_error&) {
      throw ConfigError("bad coefficient '" + tok + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty coefficient list");
  return out;
}

}  // namespace

BaseFlow make_base_flow(const EulerFamily& fam, const GeometryDescriptor& g) {
  const std::string& f = fam.family;
  if (f == "rigid") return swirl_base_flow(Profile1D::rigid(fam.omega), g, "rigid_rotation");
  if (f == "vortex") return swirl_base_flow(Profile1D::vortex(fam.circulation), g, "potential_vortex");
  if (f.rfind("swirl_poly:", 0) == 0)
    return swirl_base_flow(Profile1D::polynomial(parse_coeffs(f.substr(11))), g, f);
  if (f.rfind("shear_poly:", 0) == 0)
    return channel_base_flow(Profile1D::polynomial(parse_coeffs(f.substr(11))), g, f);
  if (f == "manufactured:stagnation") return stagnation_base_flow(fam.lambda, false);
  if (f == "manufactured:stagnation_badp") return stagnation_base_flow(fam.lambda, true);
  throw ConfigError("unknown euler.family '" + f + "'");
}

double euler_residual(const BaseFlow& flow, const std::vector<Vec3>& points, double t) {
  double worst = 0.0;
  for (const Vec3& x : points) {
    const Vec3 u = flow.velocity(t, x);
    const Mat3 J = flow.gradient(t, x);
    Vec3 dudt{0, 0, 0};
    if (!flow.steady) {
      const double h = 1e-6;
      dudt = (1.0 / (2 * h)) * (flow.velocity(t + h, x) - flow.velocity(t - h, x));
    }
    const Vec3 mom = dudt + J * u + flow.pressure_gradient(t, x);
    const double div = J[0][0] + J[1][1] + J[2][2];
    worst = std::max(worst, norm(mom) + std::fabs(div));
  }
  return worst;
}

BoundaryDatum boundary_data_g(const BaseFlow& flow, const GeometryDescriptor& g, Wall w, double s,
                              double t) {
  const WallFrame fr = wall_frame(g, w, s);
  BoundaryDatum d;
  d.g_raw = cross(flow.vorticity(t, fr.point), fr.n);
  d.tau1 = dot(d.g_raw, fr.tau1);
  d.tau2 = dot(d.g_raw, fr.tau2);
  return d;
}

}  // namespace navslip
