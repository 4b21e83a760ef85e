#include "navslip/expansion.hpp"

#include <algorithm>
#include <cmath>

#include "navslip/error.hpp"
#include "navslip/kernels.hpp"
#include "navslip/tridiag.hpp"

namespace navslip {

Vec3 volume_point(const GeometryDescriptor& g, double q) {
  return g.kind == GeometryKind::AnnulusGap ? Vec3{q, 0.0, 0.0} : Vec3{0.0, q, 0.0};
}

Vec3 to_cartesian(const GeometryDescriptor& g, double normal, double tang1, double tang2) {
  // at theta = 0: e_r = e_x, e_theta = e_y; channel: normal = e_y, tang1 = e_x
  return g.kind == GeometryKind::AnnulusGap ? Vec3{normal, tang1, tang2} : Vec3{tang1, normal, tang2};
}

std::array<double, 3> from_cartesian(const GeometryDescriptor& g, const Vec3& v) {
  return g.kind == GeometryKind::AnnulusGap ? std::array<double, 3>{v[0], v[1], v[2]}
                                            : std::array<double, 3>{v[1], v[0], v[2]};
}

namespace {

void add_cartesian(const GeometryDescriptor& g, VolumeField& f, std::size_t i, const Vec3& v) {
  const auto c = from_cartesian(g, v);
  f.normal[i] += c[0];
  f.tang1[i] += c[1];
  f.tang2[i] += c[2];
}

Vec3 curl_of(const Mat3& j) {
  return {j[2][1] - j[1][2], j[0][2] - j[2][0], j[1][0] - j[0][1]};
}

bool same_grid(const VolumeGrid& a, const VolumeGrid& b) {
  if (a.q.size() != b.q.size()) return false;
  for (std::size_t i = 0; i < a.q.size(); ++i)
    if (std::fabs(a.q[i] - b.q[i]) > 1e-12 * std::max(1.0, std::fabs(a.q[i]))) return false;
  return true;
}

bool same_geometry(const GeometryDescriptor& a, const GeometryDescriptor& b) {
  return a.kind == b.kind && a.h == b.h && a.r1 == b.r1 && a.r2 == b.r2 && a.eta == b.eta;
}

double max_magnitude(const VolumeField& f) {
  return kernels::max_abs(f.magnitude());
}

// Largest difference between cubic interpolation on the full fast grid and on
// every other node, over collar points of the volume grid. For a fourth-order
// interpolant the full-grid error is about a fifteenth of this.
double interpolation_gap(const ProfileField& field, const GeometryDescriptor& g, Wall w,
                         const VolumeGrid& grid, double nu) {
  std::vector<double> zc;
  for (std::size_t j = 0; j < field.nz(); j += 2) zc.push_back(field.grid.z[j]);
  if (zc.back() != field.grid.z.back()) zc.push_back(field.grid.z.back());
  const double sq = std::sqrt(nu);
  double gap = 0.0;
  for (int c = 0; c < field.components; ++c) {
    const auto full = field.line(0, c);
    std::vector<double> coarse;
    for (std::size_t j = 0; j < field.nz(); j += 2) coarse.push_back(full[j]);
    if (coarse.size() < zc.size()) coarse.push_back(full.back());
    for (double q : grid.q) {
      const double phi = wall_distance(g, w, q);
      const double chi = collar_cutoff(phi, g.eta);
      if (chi == 0.0) continue;
      const double z = phi / sq;
      gap = std::max(gap, chi * std::fabs(cubic_interpolate(field.grid.z, full, z) -
                                          cubic_interpolate(zc, coarse, z)));
    }
  }
  return gap;
}

}  // namespace

AnsatzBundle assemble_ansatz(const BaseFlow& flow, const LayerProfile& profile,
                             const GeometryDescriptor& g, double nu, const VolumeGrid& grid,
                             const std::vector<double>& times) {
  if (!(nu > 0.0)) throw ConfigError("assemble_ansatz: nu must be positive");
  AnsatzBundle b;
  b.nu = nu;
  b.geometry = g;
  b.grid = grid;
  b.times = times;
  const std::size_t n = grid.q.size();
  const double sq = std::sqrt(nu);
  for (double t : times) {
    VolumeField u0(n), layer(n), corr(n);
    for (std::size_t i = 0; i < n; ++i) add_cartesian(g, u0, i, flow.velocity(t, volume_point(g, grid.q[i])));
    for (const auto& wl : profile.walls) {
      std::size_t k;
      try {
        k = profile.time_index(t);
      } catch (const Error&) {
        throw AlignmentError("layer profile has no snapshot at t=" + std::to_string(t));
      }
      const auto ub = boundary_layer_eval(wl.ub[k], g, wl.wall, grid, nu, 2.0);
      const auto vb = boundary_layer_eval(wl.v[k], g, wl.wall, grid, nu, 2.0);
      b.regime_warning = b.regime_warning || ub.regime_warning;
      for (std::size_t i = 0; i < n; ++i) {
        const double b1 = ub.components[0][i], b2 = ub.components[1][i], v = vb.components[0][i];
        if (b1 == 0.0 && b2 == 0.0 && v == 0.0) continue;
        const WallFrame fr = frame_at(g, wl.wall, wall_distance(g, wl.wall, grid.q[i]));
        add_cartesian(g, layer, i, sq * (b1 * fr.tau1 + b2 * fr.tau2));
        add_cartesian(g, corr, i, (nu * v) * fr.n);
      }
    }
    VolumeField sum(n);
    for (std::size_t i = 0; i < n; ++i) {
      sum.normal[i] = u0.normal[i] + layer.normal[i] + corr.normal[i];
      sum.tang1[i] = u0.tang1[i] + layer.tang1[i] + corr.tang1[i];
      sum.tang2[i] = u0.tang2[i] + layer.tang2[i] + corr.tang2[i];
    }
    b.u0.push_back(std::move(u0));
    b.layer.push_back(std::move(layer));
    b.corrector.push_back(std::move(corr));
    b.u_approx.push_back(std::move(sum));
  }
  return b;
}

std::vector<VolumeField> viscous_fields(const ViscousSolution& sol) {
  std::vector<VolumeField> out;
  for (const auto& u : sol.u) {
    VolumeField f(u.size());
    f.tang1 = u;
    out.push_back(std::move(f));
  }
  return out;
}

RemainderField extract_remainder(const std::vector<VolumeField>& fields, const AnsatzBundle& bundle,
                                 const LayerProfile& profile, const std::vector<NormSpec>& norms) {
  if (fields.size() != bundle.times.size())
    throw AlignmentError("extract_remainder: one field per ansatz time required");
  const std::size_t n = bundle.grid.q.size();
  RemainderField rem;
  rem.nu = bundle.nu;
  rem.geometry = bundle.geometry;
  rem.grid = bundle.grid;
  rem.times = bundle.times;
  const double inv = 1.0 / bundle.nu;
  double rmax = 0.0;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    const auto& u = fields[k];
    const auto& a = bundle.u_approx[k];
    if (u.size() != n) throw Error("extract_remainder: grid incompatibility");
    VolumeField r(n);
    for (std::size_t i = 0; i < n; ++i) {
      r.normal[i] = (u.normal[i] - a.normal[i]) * inv;
      r.tang1[i] = (u.tang1[i] - a.tang1[i]) * inv;
      r.tang2[i] = (u.tang2[i] - a.tang2[i]) * inv;
    }
    auto parts = leray_project(r, bundle.geometry, bundle.grid);
    rmax = std::max(rmax, max_magnitude(r));
    rem.R.push_back(std::move(r));
    rem.PR.push_back(std::move(parts.solenoidal));
    rem.QR.push_back(std::move(parts.gradient));
  }

  // interpolation guard over the latest stored time (the layer is widest there)
  if (!profile.walls.empty() && !bundle.times.empty()) {
    const std::size_t k = profile.time_index(bundle.times.back());
    double gap = 0.0;
    for (const auto& wl : profile.walls)
      gap = std::max(gap, interpolation_gap(wl.ub[k], bundle.geometry, wl.wall, bundle.grid, bundle.nu));
    rem.interpolation_estimate = gap / 15.0 * std::sqrt(bundle.nu) * inv;
    rem.interpolation_flag = rem.interpolation_estimate > 0.01 * rmax && rem.interpolation_estimate > 1e-12;
  }

  std::vector<NormSpec> specs = norms;
  if (specs.empty()) specs = {parse_norm("l2"), parse_norm("lp:4"), parse_norm("h1")};
  for (std::size_t k = 0; k < rem.times.size(); ++k)
    for (const auto& s : specs) {
      rem.norms.push_back({rem.times[k], s.text, "full", volume_norm(rem.geometry, rem.grid, rem.R[k], s)});
      rem.norms.push_back({rem.times[k], s.text, "P", volume_norm(rem.geometry, rem.grid, rem.PR[k], s)});
      rem.norms.push_back({rem.times[k], s.text, "I-P", volume_norm(rem.geometry, rem.grid, rem.QR[k], s)});
    }
  return rem;
}

RemainderField extract_remainder(const ViscousSolution& sol, const AnsatzBundle& bundle,
                                 const LayerProfile& profile, const std::vector<NormSpec>& norms) {
  if (std::fabs(sol.nu - bundle.nu) > 1e-12 * bundle.nu)
    throw Error("extract_remainder: viscosity mismatch");
  if (!same_geometry(sol.geometry, bundle.geometry) || !same_grid(sol.grid, bundle.grid))
    throw Error("extract_remainder: grid incompatibility");
  const auto all = viscous_fields(sol);
  std::vector<VolumeField> picked;
  for (double t : bundle.times) {
    std::size_t k;
    try {
      k = sol.time_index(t);
    } catch (const Error&) {
      throw AlignmentError("viscous solution has no snapshot at t=" + std::to_string(t));
    }
    picked.push_back(all[k]);
  }
  return extract_remainder(picked, bundle, profile, norms);
}

LerayParts leray_project(const VolumeField& u, const GeometryDescriptor& g, const VolumeGrid& grid) {
  const std::size_t n = grid.q.size();
  if (n < 3 || u.size() != n) throw Error("leray_project: field does not match grid");
  const auto& q = grid.q;
  auto w = [&](double x) { return g.kind == GeometryKind::AnnulusGap ? x : 1.0; };
  const std::size_t m = n - 1;  // cells
  std::vector<double> c(m), vol(m), flux(n);
  for (std::size_t i = 0; i < m; ++i) {
    c[i] = 0.5 * (q[i] + q[i + 1]);
    vol[i] = w(c[i]) * (q[i + 1] - q[i]);
  }
  for (std::size_t i = 0; i < n; ++i) flux[i] = w(q[i]) * u.normal[i];

  // div(grad chi) = div u per cell, boundary faces carry u.n
  Tridiagonal a(m);
  std::vector<double> rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    rhs[i] = (flux[i + 1] - flux[i]) / vol[i];
    if (i > 0) {
      const double k = w(q[i]) / ((c[i] - c[i - 1]) * vol[i]);
      a.lower[i] = k;
      a.diag[i] -= k;
    } else {
      rhs[i] += flux[0] / vol[i];
    }
    if (i + 1 < m) {
      const double k = w(q[i + 1]) / ((c[i + 1] - c[i]) * vol[i]);
      a.upper[i] = k;
      a.diag[i] -= k;
    } else {
      rhs[i] -= flux[n - 1] / vol[i];
    }
  }
  // compatibility by mean correction
  double s = 0.0, vs = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    s += vol[i] * rhs[i];
    vs += vol[i];
  }
  for (auto& r : rhs) r -= s / vs;

  Tridiagonal pinned = a;
  std::vector<double> chi = rhs;
  pinned.diag[0] = 1.0;
  pinned.upper[0] = 0.0;
  chi[0] = 0.0;
  solve_tridiagonal(pinned, chi);

  double res = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double ax = a.diag[i] * chi[i];
    double mag = std::fabs(ax);
    if (i > 0) {
      ax += a.lower[i] * chi[i - 1];
      mag += std::fabs(a.lower[i] * chi[i - 1]);
    }
    if (i + 1 < m) {
      ax += a.upper[i] * chi[i + 1];
      mag += std::fabs(a.upper[i] * chi[i + 1]);
    }
    res = std::max(res, std::fabs(ax - rhs[i]));
    scale = std::max(scale, mag + std::fabs(rhs[i]));
  }
  const double rel = scale > 0.0 ? res / scale : 0.0;
  if (rel > 1e-9) throw SolverError("leray_project: Neumann solve did not converge", rel);

  LerayParts out{VolumeField(n), VolumeField(n), rel};
  out.gradient.normal[0] = u.normal[0];
  out.gradient.normal[n - 1] = u.normal[n - 1];
  for (std::size_t i = 1; i + 1 < n; ++i) out.gradient.normal[i] = (chi[i] - chi[i - 1]) / (c[i] - c[i - 1]);
  for (std::size_t i = 0; i < n; ++i) {
    out.solenoidal.normal[i] = u.normal[i] - out.gradient.normal[i];
    out.solenoidal.tang1[i] = u.tang1[i];
    out.solenoidal.tang2[i] = u.tang2[i];
  }
  return out;
}

Vec3 wall_curl_cross_n(const GeometryDescriptor& g, const VolumeGrid& grid, const VolumeField& u,
                       Wall w) {
  const std::size_t n = grid.q.size();
  std::vector<double> x(4);
  std::array<std::vector<double>, 3> f{std::vector<double>(4), std::vector<double>(4), std::vector<double>(4)};
  for (std::size_t k = 0; k < 4; ++k) {
    const std::size_t i = w == Wall::Lower ? k : n - 1 - k;
    x[k] = grid.q[i];
    f[0][k] = u.normal[i];
    f[1][k] = u.tang1[i];
    f[2][k] = u.tang2[i];
  }
  const auto wts = lagrange_derivative_weights(x);
  double d[3] = {0.0, 0.0, 0.0};
  for (int c = 0; c < 3; ++c)
    for (std::size_t k = 0; k < 4; ++k) d[c] += wts[k] * f[c][k];
  const double un = f[0][0], ut = f[1][0], r = x[0];
  Mat3 j = zero_mat3();
  if (g.kind == GeometryKind::AnnulusGap) {
    // columns: d/dr, (1/r) d/dtheta at theta = 0, d/dz
    j[0][0] = d[0];
    j[1][0] = d[1];
    j[2][0] = d[2];
    j[0][1] = -ut / r;
    j[1][1] = un / r;
  } else {
    j[0][1] = d[1];
    j[1][1] = d[0];
    j[2][1] = d[2];
  }
  return cross(curl_of(j), wall_frame(g, w).n);
}

std::pair<double, double> remainder_bc_residual(const RemainderField& rem, const LayerProfile& profile) {
  double ra = 0.0, rb = 0.0;
  const double isq = 1.0 / std::sqrt(rem.nu);
  for (std::size_t k = 0; k < rem.times.size(); ++k) {
    const std::size_t kp = profile.time_index(rem.times[k]);
    for (const auto& wl : profile.walls) {
      const WallFrame fr = wall_frame(rem.geometry, wl.wall);
      const std::size_t i = wl.wall == Wall::Lower ? 0 : rem.grid.q.size() - 1;
      const Vec3 R = to_cartesian(rem.geometry, rem.R[k].normal[i], rem.R[k].tang1[i], rem.R[k].tang2[i]);
      const double v0 = wl.v[kp].at(0, 0, 0);
      ra = std::max(ra, std::fabs(dot(R, fr.n) + v0));

      const auto& ub = wl.ub[kp];
      const double b1 = ub.at(0, 0, 0), b2 = ub.at(0, 1, 0);
      Vec3 curl_ub = b1 * curl_of(fr.grad_tau1) + b2 * curl_of(fr.grad_tau2);
      Vec3 curl_v = v0 * curl_of(fr.grad_n);
      if (ub.ns() > 1) {
        // slow derivatives along tau1 at the first sample
        const double ds = ub.s[1] - ub.s[0];
        const double d1 = (ub.at(1, 0, 0) - b1) / ds, d2 = (ub.at(1, 1, 0) - b2) / ds;
        curl_ub = curl_ub + cross(d1 * fr.tau1, fr.tau1) + cross(d2 * fr.tau1, fr.tau2);
        curl_v = curl_v + cross(((wl.v[kp].at(1, 0, 0) - v0) / ds) * fr.tau1, fr.n);
      }
      const Vec3 lhs = wall_curl_cross_n(rem.geometry, rem.grid, rem.R[k], wl.wall) +
                       isq * cross(curl_ub, fr.n) + cross(curl_v, fr.n);
      rb = std::max(rb, norm(lhs));
    }
  }
  return {ra, rb};
}

}  // namespace navslip
