#include "navslip/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "navslip/error.hpp"

namespace navslip {

std::string to_string(GeometryKind k) {
  return k == GeometryKind::FlatChannel ? "flat_channel" : "annulus_gap";
}

GeometryKind geometry_kind_from_string(const std::string& s) {
  if (s == "flat_channel") return GeometryKind::FlatChannel;
  if (s == "annulus_gap") return GeometryKind::AnnulusGap;
  throw ConfigError("unknown geometry.kind '" + s + "'");
}

std::string to_string(Wall w) { return w == Wall::Lower ? "lower" : "upper"; }

GeometryDescriptor GeometryDescriptor::channel(double h, double eta) {
  GeometryDescriptor g;
  g.kind = GeometryKind::FlatChannel;
  g.h = h;
  g.eta = eta;
  return g;
}

GeometryDescriptor GeometryDescriptor::annulus(double r1, double r2, double eta) {
  GeometryDescriptor g;
  g.kind = GeometryKind::AnnulusGap;
  g.r1 = r1;
  g.r2 = r2;
  g.eta = eta;
  return g;
}

void GeometryDescriptor::validate() const {
  if (kind == GeometryKind::FlatChannel) {
    if (!(h > 0.0)) throw ConfigError("geometry.h must be positive");
  } else {
    if (!(r1 > 0.0)) throw ConfigError("geometry.r1 must be positive");
    if (!(r2 > r1)) throw ConfigError("geometry.r2 must exceed geometry.r1");
  }
  if (!(eta > 0.0)) throw ConfigError("geometry.eta must be positive");
  if (!(eta < 0.5 * gap())) throw ConfigError("geometry.eta must be below half the gap");
  if (!(collar_ratio > 1.0 && collar_ratio <= 1.5))
    throw ConfigError("geometry.collar_ratio must lie in (1, 1.5]");
}

double GeometryDescriptor::measure(double q) const {
  return kind == GeometryKind::FlatChannel ? 1.0 : 2.0 * std::numbers::pi * q;
}

double GeometryDescriptor::normal_coordinate(const Vec3& p) const {
  return kind == GeometryKind::FlatChannel ? p[1] : std::hypot(p[0], p[1]);
}

double wall_distance(const GeometryDescriptor& g, Wall w, double q) {
  return w == Wall::Lower ? q - g.lower_wall() : g.upper_wall() - q;
}

namespace {

constexpr double kWallTol = 1e-12;

double checked_coordinate(const GeometryDescriptor& g, const Vec3& p) {
  const double q = g.normal_coordinate(p);
  const double tol = kWallTol * std::max(1.0, g.upper_wall());
  if (q < g.lower_wall() - tol || q > g.upper_wall() + tol)
    throw DomainError("point outside the domain (normal coordinate " + std::to_string(q) + ")");
  return std::clamp(q, g.lower_wall(), g.upper_wall());
}

struct Nearest {
  Wall wall;
  double d;
};

Nearest nearest_wall(const GeometryDescriptor& g, double q) {
  const double dl = q - g.lower_wall();
  const double du = g.upper_wall() - q;
  return dl <= du ? Nearest{Wall::Lower, dl} : Nearest{Wall::Upper, du};
}

// Inside the collar: n = grad(phi) for the nearest wall.
Nearest collar_wall(const GeometryDescriptor& g, const Vec3& p) {
  const double q = checked_coordinate(g, p);
  const double dl = q - g.lower_wall();
  const double du = g.upper_wall() - q;
  if (dl == du) throw DomainError("point equidistant from both walls; normal is ambiguous");
  const Nearest nw = nearest_wall(g, q);
  if (nw.d >= g.eta) throw DomainError("point outside the collar");
  return nw;
}

}  // namespace

double signed_distance(const GeometryDescriptor& g, const Vec3& p) {
  const double q = checked_coordinate(g, p);
  const double d = nearest_wall(g, q).d;
  if (d < g.eta) return d;
  // Cubic cap: matches distance up to second order at eta, flat at midgap.
  const double s = d - g.eta;
  const double w = 0.5 * g.gap() - g.eta;
  return g.eta + s - s * s * s / (3.0 * w * w);
}

Vec3 normal_field(const GeometryDescriptor& g, const Vec3& p) {
  const Nearest nw = collar_wall(g, p);
  const double sign = nw.wall == Wall::Lower ? 1.0 : -1.0;
  if (g.kind == GeometryKind::FlatChannel) return {0.0, sign, 0.0};
  const double r = std::hypot(p[0], p[1]);
  return {sign * p[0] / r, sign * p[1] / r, 0.0};
}

double laplacian_phi(const GeometryDescriptor& g, const Vec3& p) {
  const Nearest nw = collar_wall(g, p);
  if (g.kind == GeometryKind::FlatChannel) return 0.0;
  const double r = std::hypot(p[0], p[1]);
  return nw.wall == Wall::Lower ? 1.0 / r : -1.0 / r;
}

WallFrame wall_frame(const GeometryDescriptor& g, Wall w, double s) { return frame_at(g, w, 0.0, s); }

WallFrame frame_at(const GeometryDescriptor& g, Wall w, double phi, double s) {
  WallFrame f;
  const double sign = w == Wall::Lower ? 1.0 : -1.0;
  f.wall_coord = (w == Wall::Lower ? g.lower_wall() : g.upper_wall()) + sign * phi;
  f.tau2 = {0.0, 0.0, 1.0};
  f.grad_tau2 = zero_mat3();
  if (g.kind == GeometryKind::FlatChannel) {
    f.point = {s, f.wall_coord, 0.0};
    f.n = {0.0, sign, 0.0};
    f.tau1 = {1.0, 0.0, 0.0};
    f.grad_tau1 = zero_mat3();
    f.grad_n = zero_mat3();
    f.slow_measure = 1.0;
    return f;
  }
  const double r = f.wall_coord;
  const double th = s / (w == Wall::Lower ? g.lower_wall() : g.upper_wall());
  const double c = std::cos(th), sn = std::sin(th);
  const double x = r * c, y = r * sn, r3 = r * r * r;
  f.point = {x, y, 0.0};
  f.n = {sign * c, sign * sn, 0.0};
  f.tau1 = {-sn, c, 0.0};
  // e_theta = (-y/r, x/r, 0), e_r = (x/r, y/r, 0)
  f.grad_tau1 = {Vec3{x * y / r3, -x * x / r3, 0.0}, Vec3{y * y / r3, -x * y / r3, 0.0},
                 Vec3{0.0, 0.0, 0.0}};
  f.grad_n = {Vec3{sign * y * y / r3, -sign * x * y / r3, 0.0},
              Vec3{-sign * x * y / r3, sign * x * x / r3, 0.0}, Vec3{0.0, 0.0, 0.0}};
  f.slow_measure = 2.0 * std::numbers::pi * r;
  return f;
}

Vec3 collar_point(const GeometryDescriptor& g, Wall w, double phi, double s) {
  return frame_at(g, w, phi, s).point;
}

CollarChart build_collar(const GeometryDescriptor& g, Wall w, int n_points) {
  if (n_points < 4) throw ConfigError("collar needs at least 4 points");
  g.validate();
  CollarChart c;
  c.wall = w;
  const double q = g.collar_ratio;
  const int cells = n_points - 1;
  const double h0 = g.eta * (q - 1.0) / (std::pow(q, cells) - 1.0);
  c.phi.resize(n_points);
  c.phi[0] = 0.0;
  double h = h0;
  for (int i = 1; i < n_points; ++i) {
    c.phi[i] = c.phi[i - 1] + h;
    h *= q;
  }
  c.phi.back() = g.eta * (1.0 - 1e-12);  // keep the last sample strictly inside
  for (double phi : c.phi) {
    const double coord = w == Wall::Lower ? g.lower_wall() + phi : g.upper_wall() - phi;
    c.coord.push_back(coord);
    const Vec3 p = collar_point(g, w, phi);
    c.normal.push_back(normal_field(g, p));
    c.lap_phi.push_back(laplacian_phi(g, p));
  }
  return c;
}

VolumeGrid make_volume_grid(const GeometryDescriptor& g, std::vector<double> nodes) {
  VolumeGrid v;
  v.q = std::move(nodes);
  const std::size_t n = v.q.size();
  v.weight.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double half = 0.5 * (v.q[i + 1] - v.q[i]);
    v.weight[i] += half;
    v.weight[i + 1] += half;
  }
  for (std::size_t i = 0; i < n; ++i) v.weight[i] *= g.measure(v.q[i]);
  return v;
}

VolumeGrid clustered_volume_grid(const GeometryDescriptor& g, int collar_points) {
  const CollarChart lo = build_collar(g, Wall::Lower, collar_points);
  const CollarChart hi = build_collar(g, Wall::Upper, collar_points);
  std::vector<double> nodes(lo.coord.begin(), lo.coord.end());
  const double a = lo.coord.back(), b = hi.coord.back();
  const double hmax = lo.phi.back() - lo.phi[lo.phi.size() - 2];
  const int mid = std::max(2, static_cast<int>(std::ceil((b - a) / hmax)));
  for (int i = 1; i < mid; ++i) nodes.push_back(a + (b - a) * i / mid);
  for (auto it = hi.coord.rbegin(); it != hi.coord.rend(); ++it) nodes.push_back(*it);
  return make_volume_grid(g, std::move(nodes));
}

double collar_cutoff(double phi, double eta) {
  if (phi <= 0.5 * eta) return 1.0;
  if (phi >= eta) return 0.0;
  const double t = (phi - 0.5 * eta) / (0.5 * eta);
  return 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

}  // namespace navslip
