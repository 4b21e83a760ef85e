#include "navslip/ns.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <memory>
#include <set>

#include "navslip/error.hpp"
#include "navslip/kernels.hpp"
#include "navslip/tridiag.hpp"

namespace navslip {

std::size_t ViscousSolution::time_index(double t) const {
  for (std::size_t k = 0; k < times.size(); ++k)
    if (std::fabs(times[k] - t) <= 1e-9 * std::max(1.0, std::fabs(t))) return k;
  throw Error("viscous solution has no snapshot at t=" + std::to_string(t));
}

std::vector<double> clustered_nodes(double a, double b, int n, double stretch) {
  std::vector<double> q(n);
  const double L = b - a;
  const double two_pi = 2.0 * std::numbers::pi;
  for (int i = 0; i < n; ++i) {
    const double xi = static_cast<double>(i) / (n - 1);
    q[i] = a + L * (xi - stretch * std::sin(two_pi * xi) / two_pi);
  }
  q.front() = a;
  q.back() = b;
  return q;
}

std::vector<double> lagrange_derivative_weights(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> w(n, 0.0);
  const double x0 = x[0];
  for (std::size_t k = 0; k < n; ++k) {
    // l_k'(x0) = sum_{m != k} [prod_{j != k, m} (x0 - x_j)] / prod_{j != k} (x_k - x_j)
    double denom = 1.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != k) denom *= x[k] - x[j];
    double num = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      if (m == k) continue;
      double p = 1.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != k && j != m) p *= x0 - x[j];
      num += p;
    }
    w[k] = num / denom;
  }
  return w;
}

namespace {

double metric(const GeometryDescriptor& g, double q) {
  return g.kind == GeometryKind::AnnulusGap ? q : 1.0;
}

// Interior rows of L = d_q[(1/w) d_q(w u)], flux form on the half points.
Tridiagonal flux_operator(const GeometryDescriptor& g, const std::vector<double>& q) {
  const std::size_t n = q.size();
  Tridiagonal L(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double dm = q[i] - q[i - 1], dp = q[i + 1] - q[i];
    const double wm = metric(g, 0.5 * (q[i] + q[i - 1])), wp = metric(g, 0.5 * (q[i] + q[i + 1]));
    const double M = 0.5 * (q[i + 1] - q[i - 1]);
    const double cp = 1.0 / (wp * dp * M), cm = 1.0 / (wm * dm * M);
    L.upper[i] = cp * metric(g, q[i + 1]);
    L.lower[i] = cm * metric(g, q[i - 1]);
    L.diag[i] = -(cp + cm) * metric(g, q[i]);
  }
  return L;
}

// Boundary row: one-sided 3-point derivative of (w u) vanishes, with the
// out-of-band entry eliminated through the neighbouring interior row.
struct BoundaryRow {
  double c_wall, c_next;  // coefficients after elimination
  double alpha;           // multiple of the neighbour row subtracted
};

BoundaryRow boundary_row(const GeometryDescriptor& g, const std::vector<double>& q,
                         const Tridiagonal& A, bool lower) {
  const std::size_t n = q.size();
  const std::size_t i0 = lower ? 0 : n - 1, i1 = lower ? 1 : n - 2, i2 = lower ? 2 : n - 3;
  const auto w = lagrange_derivative_weights({q[i0], q[i1], q[i2]});
  const double c0 = w[0] * metric(g, q[i0]), c1 = w[1] * metric(g, q[i1]), c2 = w[2] * metric(g, q[i2]);
  // neighbour row i1: entries at (i0, i1, i2)
  const double a0 = lower ? A.lower[i1] : A.upper[i1];
  const double a1 = A.diag[i1];
  const double a2 = lower ? A.upper[i1] : A.lower[i1];
  const double alpha = c2 / a2;
  return {c0 - alpha * a0, c1 - alpha * a1, alpha};
}

struct System {
  Tridiagonal implicit, explicit_part;
  BoundaryRow lo, hi;
  std::unique_ptr<TridiagonalFactor> factor;
};

System make_system(const GeometryDescriptor& g, const std::vector<double>& q, const Tridiagonal& L,
                   double nu, double tau, double theta) {
  const std::size_t n = q.size();
  System s;
  s.implicit = Tridiagonal(n);
  s.explicit_part = Tridiagonal(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    s.implicit.lower[i] = -theta * tau * nu * L.lower[i];
    s.implicit.diag[i] = 1.0 - theta * tau * nu * L.diag[i];
    s.implicit.upper[i] = -theta * tau * nu * L.upper[i];
    s.explicit_part.lower[i] = (1.0 - theta) * tau * nu * L.lower[i];
    s.explicit_part.diag[i] = 1.0 + (1.0 - theta) * tau * nu * L.diag[i];
    s.explicit_part.upper[i] = (1.0 - theta) * tau * nu * L.upper[i];
  }
  s.lo = boundary_row(g, q, s.implicit, true);
  s.hi = boundary_row(g, q, s.implicit, false);
  s.implicit.diag[0] = s.lo.c_wall;
  s.implicit.upper[0] = s.lo.c_next;
  s.implicit.diag[n - 1] = s.hi.c_wall;
  s.implicit.lower[n - 1] = s.hi.c_next;
  s.factor = std::make_unique<TridiagonalFactor>(s.implicit);
  return s;
}

void advance(const System& s, std::vector<double>& u, std::vector<double>& rhs) {
  const std::size_t n = u.size();
  kernels::tridiag_apply(s.explicit_part.lower, s.explicit_part.diag, s.explicit_part.upper, u, rhs);
  rhs[0] = -s.lo.alpha * rhs[1];
  rhs[n - 1] = -s.hi.alpha * rhs[n - 2];
  s.factor->solve(rhs);
  u.swap(rhs);
}

long steps_for(double t, double dt, const char* what) {
  const long k = std::lround(t / dt);
  if (std::fabs(k * dt - t) > 1e-9 * std::max(1.0, t))
    throw ConfigError(std::string(what) + " is not a multiple of ns.dt");
  return k;
}

ViscousSolution solve_reduced(const GeometryDescriptor& g, const std::function<double(double)>& U0,
                              double nu, const NsConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw ConfigError("ns.dt must be positive");
  if (!(cfg.t_end > 0.0)) throw ConfigError("ns.t_end must be positive");
  if (cfg.n < 32) throw ConfigError("ns.nr/ny must be at least 32");
  if (!(nu > 0.0)) throw ConfigError("nu must be positive");
  if (!(cfg.stretch >= 0.0 && cfg.stretch < 1.0)) throw ConfigError("ns.stretch must lie in [0, 1)");
  g.validate();

  ViscousSolution sol;
  sol.nu = nu;
  sol.geometry = g;
  sol.dt = cfg.dt;
  sol.t_end = cfg.t_end;
  sol.scheme = cfg.startup_smoothing ? "crank-nicolson+rannacher" : "crank-nicolson";
  sol.grid = make_volume_grid(g, clustered_nodes(g.lower_wall(), g.upper_wall(), cfg.n, cfg.stretch));
  const auto& q = sol.grid.q;

  const long nsteps = steps_for(cfg.t_end, cfg.dt, "ns.t_end");
  std::set<long> store{nsteps};
  if (cfg.store_every > 0)
    for (long k = cfg.store_every; k <= nsteps; k += cfg.store_every) store.insert(k);
  for (double t : cfg.output_times) {
    const long k = steps_for(t, cfg.dt, "ns output time");
    if (k < 0 || k > nsteps) throw ConfigError("ns output time outside [0, t_end]");
    if (k > 0) store.insert(k);
  }

  const Tridiagonal L = flux_operator(g, q);
  const System cn = make_system(g, q, L, nu, cfg.dt, 0.5);
  const System be = make_system(g, q, L, nu, 0.5 * cfg.dt, 1.0);

  std::vector<double> u(q.size()), rhs(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) u[i] = U0(q[i]);
  sol.times.push_back(0.0);
  sol.u.push_back(u);
  for (long n = 0; n < nsteps; ++n) {
    if (cfg.startup_smoothing && n < 2) {
      advance(be, u, rhs);
      advance(be, u, rhs);
    } else {
      advance(cn, u, rhs);
    }
    if (store.count(n + 1)) {
      sol.times.push_back((n + 1) * cfg.dt);
      sol.u.push_back(u);
    }
  }
  return sol;
}

}  // namespace

ViscousSolution solve_ns_swirl(const GeometryDescriptor& g, const std::function<double(double)>& U0,
                               double nu, const NsConfig& cfg) {
  if (g.kind != GeometryKind::AnnulusGap) throw ConfigError("solve_ns_swirl needs annulus_gap");
  return solve_reduced(g, U0, nu, cfg);
}

ViscousSolution solve_ns_channel(const GeometryDescriptor& g, const std::function<double(double)>& U0,
                                 double nu, const NsConfig& cfg) {
  if (g.kind != GeometryKind::FlatChannel) throw ConfigError("solve_ns_channel needs flat_channel");
  return solve_reduced(g, U0, nu, cfg);
}

ViscousSolution solve_ns(const GeometryDescriptor& g, const std::function<double(double)>& U0,
                         double nu, const NsConfig& cfg) {
  return solve_reduced(g, U0, nu, cfg);
}

double kinetic_energy(const ViscousSolution& sol, const std::vector<double>& u) {
  return 0.5 * kernels::weighted_pow_sum(u, sol.grid.weight, 2.0);
}

double enstrophy(const ViscousSolution& sol, const std::vector<double>& u) {
  const auto& g = sol.geometry;
  const auto& q = sol.grid.q;
  double z = 0.0;
  for (std::size_t i = 0; i + 1 < q.size(); ++i) {
    const double mid = 0.5 * (q[i] + q[i + 1]);
    const double d = q[i + 1] - q[i];
    const double om = (metric(g, q[i + 1]) * u[i + 1] - metric(g, q[i]) * u[i]) / (metric(g, mid) * d);
    z += g.measure(mid) * d * om * om;
  }
  return z;
}

double wall_vorticity(const GeometryDescriptor& g, const std::vector<double>& q,
                      const std::vector<double>& u, Wall w) {
  const std::size_t n = q.size();
  std::vector<double> x(4), f(4);
  for (std::size_t k = 0; k < 4; ++k) {
    const std::size_t i = w == Wall::Lower ? k : n - 1 - k;
    x[k] = q[i];
    f[k] = metric(g, q[i]) * u[i];
  }
  const auto wts = lagrange_derivative_weights(x);
  double d = 0.0;
  for (std::size_t k = 0; k < 4; ++k) d += wts[k] * f[k];
  return d / metric(g, x[0]);
}

std::vector<double> energy_identity_residual(const ViscousSolution& sol) {
  std::vector<double> out;
  if (sol.u.size() < 2) return out;
  const double e0 = kinetic_energy(sol, sol.u.front());
  const double norm = e0 > 0.0 ? e0 : 1.0;
  for (std::size_t k = 0; k + 1 < sol.u.size(); ++k) {
    const double dt = sol.times[k + 1] - sol.times[k];
    const double de = (kinetic_energy(sol, sol.u[k + 1]) - kinetic_energy(sol, sol.u[k])) / dt;
    const double diss = 0.5 * sol.nu * (enstrophy(sol, sol.u[k]) + enstrophy(sol, sol.u[k + 1]));
    out.push_back(std::fabs(de + diss) / norm);
  }
  return out;
}

std::vector<double> bc_residual(const ViscousSolution& sol) {
  // u.n = 0 holds structurally: the reduced fields carry no normal component.
  std::vector<double> out;
  for (const auto& u : sol.u) {
    double r = 0.0;
    for (Wall w : kWalls) r = std::max(r, std::fabs(wall_vorticity(sol.geometry, sol.grid.q, u, w)));
    out.push_back(r);
  }
  return out;
}

void write_ns_snapshots(std::ostream& os, const ViscousSolution& sol) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "# nu=%.17g scheme=%s\n# t s z u\n", sol.nu, sol.scheme.c_str());
  os << buf;
  for (std::size_t k = 0; k < sol.times.size(); ++k)
    for (std::size_t i = 0; i < sol.grid.q.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g 0 %.17g %.17g\n", sol.times[k], sol.grid.q[i], sol.u[k][i]);
      os << buf;
    }
}

}  // namespace navslip
