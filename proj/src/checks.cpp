#include "navslip/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "navslip/error.hpp"
#include "navslip/expansion.hpp"
#include "navslip/kernels.hpp"

namespace navslip {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string orders_text(const OrderStudy& s) {
  std::string out = "orders";
  for (double o : s.orders) out += fmt(" %.3f", o);
  return out;
}

OrderStudy finish(OrderStudy s) {
  for (std::size_t i = 1; i < s.error.size(); ++i)
    s.orders.push_back(std::log(s.error[i - 1] / s.error[i]) / std::log(s.step[i - 1] / s.step[i]));
  return s;
}

template <class F>
CheckResult timed(const std::string& name, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r;
  r.name = name;
  try {
    body(r);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace

double OrderStudy::min_order() const {
  return orders.empty() ? 0.0 : *std::min_element(orders.begin(), orders.end());
}

CheckResult check_geometry(const GeometryDescriptor& g) {
  return timed("geometry", [&](CheckResult& r) {
    g.validate();
    double worst_grad = 0.0, worst_normal = 0.0, worst_lap = 0.0, worst_frame = 0.0;
    const double h = 1e-5;
    for (Wall w : kWalls) {
      for (int k = 1; k <= 20; ++k) {
        const double phi = 0.9 * g.eta * k / 20.0;
        for (double s : {0.0, 0.3, 1.1}) {
          const Vec3 p = collar_point(g, w, phi, s);
          Vec3 grad{0, 0, 0};
          double lap = 0.0;
          const double f0 = signed_distance(g, p);
          for (int a = 0; a < 3; ++a) {
            Vec3 pp = p, pm = p;
            pp[a] += h;
            pm[a] -= h;
            const double fp = signed_distance(g, pp), fm = signed_distance(g, pm);
            grad[a] = (fp - fm) / (2 * h);
            lap += (fp - 2 * f0 + fm) / (h * h);
          }
          worst_grad = std::max(worst_grad, std::fabs(norm(grad) - 1.0));
          worst_normal = std::max(worst_normal, norm(grad - normal_field(g, p)));
          worst_lap = std::max(worst_lap, std::fabs(lap - laplacian_phi(g, p)));
          worst_grad = std::max(worst_grad, std::fabs(f0 - phi));
          const WallFrame fr = frame_at(g, w, phi, s);
          worst_frame = std::max({worst_frame, std::fabs(dot(fr.n, fr.tau1)), std::fabs(dot(fr.n, fr.tau2)),
                                  std::fabs(dot(fr.tau1, fr.tau2)), std::fabs(norm(fr.tau1) - 1.0),
                                  std::fabs(std::fabs(dot(cross(fr.tau1, fr.tau2), fr.n)) - 1.0)});
        }
      }
    }
    const bool cutoff_ok = collar_cutoff(0.0, g.eta) == 1.0 && collar_cutoff(0.5 * g.eta, g.eta) == 1.0 &&
                           collar_cutoff(g.eta, g.eta) == 0.0;
    r.pass = worst_grad < 1e-6 && worst_normal < 1e-6 && worst_lap < 1e-3 && worst_frame < 1e-12 && cutoff_ok;
    r.detail = fmt("| |grad phi|-1 |<=%.2e", worst_grad) + fmt(" normal err %.2e", worst_normal) +
               fmt(" lap err %.2e", worst_lap) + fmt(" frame err %.2e", worst_frame);
  });
}

CheckResult check_kernels() {
  return timed("kernels", [&](CheckResult& r) {
    if (!kernels::avx2_available()) {
      r.pass = true;
      r.detail = "scalar only (no AVX2 on this CPU/build)";
      return;
    }
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const std::size_t n = 1037;
    std::vector<double> lo(n), di(n), up(n), x(n), w(n), y1(n, 0.0), y2(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = U(rng);
      di[i] = U(rng);
      up[i] = U(rng);
      x[i] = U(rng);
      w[i] = std::fabs(U(rng));
    }
    kernels::scalar::tridiag_apply(lo, di, up, x, y1);
    kernels::avx2::tridiag_apply(lo, di, up, x, y2);
    const bool same = y1 == y2;
    double rel = 0.0;
    for (double p : {1.0, 2.0, 3.0, 4.0, 6.0, 2.5}) {
      const double a = kernels::scalar::weighted_pow_sum(x, w, p), b = kernels::avx2::weighted_pow_sum(x, w, p);
      rel = std::max(rel, std::fabs(a - b) / std::fabs(a));
    }
    const bool mx = kernels::scalar::max_abs(x) == kernels::avx2::max_abs(x);
    r.pass = same && mx && rel < 1e-13;
    r.detail = std::string("tridiag bit-identical=") + (same ? "yes" : "no") + fmt(" pow-sum rel diff %.2e", rel);
  });
}

CheckResult check_projector(const GeometryDescriptor& g) {
  return timed("projector", [&](CheckResult& r) {
    const VolumeGrid grid = clustered_volume_grid(g, 60);
    const std::size_t n = grid.q.size();
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double idem = 0.0, orth = 0.0, wall = 0.0, div = 0.0;
    auto w = [&](double q) { return g.kind == GeometryKind::AnnulusGap ? q : 1.0; };
    for (int trial = 0; trial < 20; ++trial) {
      VolumeField u(n);
      for (std::size_t i = 0; i < n; ++i) {
        u.normal[i] = U(rng);
        u.tang1[i] = U(rng);
        u.tang2[i] = U(rng);
      }
      const auto p1 = leray_project(u, g, grid);
      const auto p2 = leray_project(p1.solenoidal, g, grid);
      const double un = volume_lp_norm(grid, u, 2.0);
      VolumeField d(n);
      for (std::size_t i = 0; i < n; ++i) {
        d.normal[i] = p2.solenoidal.normal[i] - p1.solenoidal.normal[i];
        d.tang1[i] = p2.solenoidal.tang1[i] - p1.solenoidal.tang1[i];
        d.tang2[i] = p2.solenoidal.tang2[i] - p1.solenoidal.tang2[i];
      }
      idem = std::max(idem, volume_lp_norm(grid, d, 2.0) / un);
      double ip = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        ip += grid.weight[i] * (p1.solenoidal.normal[i] * p1.gradient.normal[i] +
                                p1.solenoidal.tang1[i] * p1.gradient.tang1[i] +
                                p1.solenoidal.tang2[i] * p1.gradient.tang2[i]);
      orth = std::max(orth, std::fabs(ip) / (un * un));
      wall = std::max({wall, std::fabs(p1.solenoidal.normal[0]), std::fabs(p1.solenoidal.normal[n - 1])});
      for (std::size_t i = 0; i + 1 < n; ++i) {
        const double dv = (w(grid.q[i + 1]) * p1.solenoidal.normal[i + 1] - w(grid.q[i]) * p1.solenoidal.normal[i]) /
                          (w(0.5 * (grid.q[i] + grid.q[i + 1])) * (grid.q[i + 1] - grid.q[i]));
        div = std::max(div, std::fabs(dv));
      }
    }
    // pure gradient and a tangent divergence-free field
    VolumeField gradf(n), swirl(n);
    for (std::size_t i = 0; i < n; ++i) {
      gradf.normal[i] = 2.0 * grid.q[i];
      swirl.tang1[i] = 1.0 / grid.q[i];
    }
    const auto pg = leray_project(gradf, g, grid);
    const auto ps = leray_project(swirl, g, grid);
    double pg_norm = volume_lp_norm(grid, pg.solenoidal, 2.0) / volume_lp_norm(grid, gradf, 2.0);
    double ps_err = 0.0;
    for (std::size_t i = 0; i < n; ++i) ps_err = std::max(ps_err, std::fabs(ps.solenoidal.tang1[i] - swirl.tang1[i]));
    r.pass = idem < 1e-10 && orth < 1e-10 && wall < 1e-12 && div < 1e-8 && pg_norm < 1e-10 && ps_err == 0.0;
    r.detail = fmt("idempotence %.2e", idem) + fmt(" orthogonality %.2e", orth) + fmt(" wall u.n %.2e", wall) +
               fmt(" div %.2e", div) + fmt(" P(grad) %.2e", pg_norm);
  });
}

CheckResult check_energy_identity(const GeometryDescriptor& g) {
  return timed("energy identity", [&](CheckResult& r) {
    const double a = g.lower_wall(), L = g.gap();
    auto bump = [&](double q) {
      const double x = (q - a) / L;
      return x > 0.3 && x < 0.7 ? std::pow(std::sin(kPi * (x - 0.3) / 0.4), 4) : 0.0;
    };
    OrderStudy s;
    for (double dt : {4e-3, 2e-3, 1e-3}) {
      NsConfig nc;
      nc.n = 256;
      nc.dt = dt;
      nc.t_end = 0.064;
      nc.store_every = 1;
      nc.stretch = 0.0;
      nc.startup_smoothing = false;
      const auto sol = solve_ns(g, bump, 1e-2, nc);
      const auto res = energy_identity_residual(sol);
      s.step.push_back(dt);
      s.error.push_back(*std::max_element(res.begin(), res.end()));
    }
    s = finish(s);
    r.pass = s.min_order() > 1.8;
    r.detail = orders_text(s) + fmt(" finest residual %.2e", s.error.back());
  });
}

CheckResult check_erfc_oracle(double* rel_error) {
  return timed("erfc oracle", [&](CheckResult& r) {
    const auto g = GeometryDescriptor::annulus(1.0, 2.0, 0.45);
    const auto flow = swirl_base_flow(Profile1D::rigid(1.0), g, "rigid");
    LayerConfig cfg;
    cfg.nz = 512;
    cfg.dt = 1e-4;
    cfg.t_end = 0.25;
    const auto prof = solve_layer(flow, g, cfg);
    double worst = 0.0, fmax = 0.0;
    for (const auto& wl : prof.walls) {
      const std::size_t k = prof.time_index(0.25);
      const double gt = wl.g_used[0][0];
      const double exact = 2.0 * gt * std::sqrt(0.25 / kPi);
      worst = std::max(worst, std::fabs(wl.ub[k].at(0, 0, 0) - exact) / std::fabs(exact));
      fmax = std::max(fmax, std::fabs(wl.f_used[0]));
    }
    if (rel_error) *rel_error = worst;
    r.pass = worst < 1e-4 && fmax == 0.0;
    r.detail = fmt("relative error %.2e", worst) + fmt(" |f| %.1g", fmax);
  });
}

CheckResult check_layer_scaling() {
  return timed("layer scaling", [&](CheckResult& r) {
    const auto g = GeometryDescriptor::annulus(1.0, 2.0, 0.45);
    const FastGrid fg = FastGrid::mapped(512);
    ProfileField pf({0.0}, {1.0}, fg, 1);
    for (std::size_t j = 0; j < fg.size(); ++j) pf.at(0, 0, j) = std::exp(-fg.z[j]);
    const auto grid = clustered_volume_grid(g, 200);
    double worst = 0.0;
    std::string detail;
    for (double p : {2.0, 4.0, 6.0}) {
      const auto sc = scaling_exponent_check(pf, g, Wall::Lower, grid, {1e-2, 1e-3, 1e-4, 1e-5}, p);
      worst = std::max(worst, std::fabs(sc.exponent - 1.0 / (2.0 * p)));
      detail += fmt("p=%g", p) + fmt(" exponent %.4f; ", sc.exponent);
    }
    r.pass = worst <= 0.02;
    r.detail = detail + fmt("max deviation %.4f", worst);
  });
}

CheckResult check_hardy(const GeometryDescriptor& g) {
  return timed("hardy", [&](CheckResult& r) {
    const auto grid = clustered_volume_grid(g, 200);
    const std::size_t n = grid.q.size();
    double worst = 0.0, max_ratio = 0.0;
    std::string detail;
    for (double frac : {1.0, 0.5, 0.25}) {
      const double width = frac * g.eta;
      auto f = [&](double d) { return d < width ? std::pow(std::sin(kPi * d / width), 2) : 0.0; };
      auto df = [&](double d) { return d < width ? (kPi / width) * std::sin(2.0 * kPi * d / width) : 0.0; };
      std::vector<double> u(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double d = std::min(wall_distance(g, Wall::Lower, grid.q[i]), wall_distance(g, Wall::Upper, grid.q[i]));
        u[i] = f(d);
      }
      u[0] = u[1] = u[n - 1] = u[n - 2] = 0.0;
      const double ratio = hardy_ratio(g, grid, u, 2.0, 0.0);
      // dense midpoint quadrature of the same integrals
      double num = 0.0, den = 0.0;
      const int m = 200000;
      const double a = g.lower_wall(), L = g.gap();
      for (int k = 0; k < m; ++k) {
        const double q = a + (k + 0.5) * L / m;
        const double d = std::min(q - a, a + L - q);
        const double wq = g.measure(q) * L / m;
        num += wq * f(d) * f(d) / (d * d);
        den += wq * df(d) * df(d);
      }
      const double oracle = num / den;
      worst = std::max(worst, std::fabs(ratio - oracle) / oracle);
      max_ratio = std::max(max_ratio, ratio);
      detail += fmt("width %.3g:", width) + fmt(" ratio %.4f", ratio) + fmt(" oracle %.4f; ", oracle);
    }
    // classical constant (p/(p-1))^p = 4 for p = 2, beta = 0
    r.pass = worst < 0.02 && max_ratio <= 4.0;
    r.detail = detail + fmt("max rel diff %.2e", worst);
  });
}

CheckResult check_gronwall(int cases) {
  return timed("gronwall", [&](CheckResult& r) {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int done = 0, violations = 0, blowups = 0;
    double min_margin = kInf;
    while (done < cases) {
      const double y0 = 0.1 + 0.9 * U(rng), h0 = U(rng), h1 = U(rng), c0 = 0.1 + 0.9 * U(rng);
      const double alpha = 0.5 + 1.5 * U(rng), T = 0.05 + 0.95 * U(rng);
      auto h = [&](double t) { return h0 + h1 * std::sin(3.0 * t) * std::sin(3.0 * t); };
      const int nt = 400;
      std::vector<double> ts(nt + 1), hs(nt + 1);
      for (int k = 0; k <= nt; ++k) {
        ts[k] = T * k / nt;
        hs[k] = h(ts[k]);
      }
      double bound;
      try {
        bound = gronwall_local_bound(y0, ts, hs, c0, alpha, T);
      } catch (const BlowUpHorizonError&) {
        ++blowups;
        continue;
      }
      // RK4 on y' = h + c0 y^(1+alpha), the extremal case of the inequality
      double y = y0;
      const int steps = 4000;
      const double dt = T / steps;
      auto rhs = [&](double t, double yy) { return h(t) + c0 * std::pow(yy, 1.0 + alpha); };
      for (int k = 0; k < steps && std::isfinite(y); ++k) {
        const double t = k * dt;
        const double k1 = rhs(t, y), k2 = rhs(t + dt / 2, y + dt / 2 * k1), k3 = rhs(t + dt / 2, y + dt / 2 * k2),
                     k4 = rhs(t + dt, y + dt * k3);
        y += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
      }
      if (!std::isfinite(y) || y > bound * (1.0 + 1e-9)) ++violations;
      min_margin = std::min(min_margin, bound / y);
      ++done;
    }
    double closed = 0.0;
    {
      const std::vector<double> ts{0.0, 0.5}, hs{0.0, 0.0};
      closed = gronwall_local_bound(1.0, ts, hs, 1.0, 1.0, 0.5);
    }
    r.pass = violations == 0 && std::fabs(closed - 2.0) < 1e-14;
    r.detail = std::to_string(done) + " cases, " + std::to_string(violations) + " violations, " +
               std::to_string(blowups) + " past blow-up horizon" + fmt(", min bound/RK4 %.6f", min_margin);
  });
}

CheckResult check_bc_orders() {
  return timed("boundary residual orders", [&](CheckResult& r) {
    const auto g = GeometryDescriptor::annulus(1.0, 2.0, 0.45);
    const auto flow = swirl_base_flow(Profile1D::rigid(1.0), g, "rigid");
    const double nu = 1e-2;
    OrderStudy ns_bc, rem_bc;
    double rem_a = 0.0;
    const int nr[] = {256, 512, 1024};
    const int nz[] = {64, 128, 256};
    const double dt[] = {5e-4, 2.5e-4, 1.25e-4};
    const std::vector<double> times{0.125, 0.25};
    for (int lvl = 0; lvl < 3; ++lvl) {
      LayerConfig lc;
      lc.nz = nz[lvl];
      lc.dt = dt[lvl];
      lc.t_end = 0.25;
      lc.output_times = times;
      const auto prof = solve_layer(flow, g, lc);
      NsConfig nc;
      nc.n = nr[lvl];
      nc.dt = dt[lvl];
      nc.t_end = 0.25;
      nc.output_times = times;
      const auto sol = solve_ns_swirl(g, flow.profile.value, nu, nc);
      const auto bc = bc_residual(sol);
      ns_bc.step.push_back(1.0 / nr[lvl]);
      ns_bc.error.push_back(*std::max_element(bc.begin() + 1, bc.end()));  // t = 0 carries the data's own mismatch
      const auto bundle = assemble_ansatz(flow, prof, g, nu, sol.grid, times);
      const auto rem = extract_remainder(sol, bundle, prof);
      const auto [ra, rb] = remainder_bc_residual(rem, prof);
      rem_a = std::max(rem_a, ra);
      rem_bc.step.push_back(1.0 / nr[lvl]);
      rem_bc.error.push_back(rb);
    }
    ns_bc = finish(ns_bc);
    rem_bc = finish(rem_bc);
    r.pass = ns_bc.min_order() >= 1.5 && rem_bc.min_order() >= 1.5 && rem_a < 1e-12;
    r.detail = "viscous wall vorticity " + orders_text(ns_bc) + "; remainder curl identity " + orders_text(rem_bc) +
               fmt("; remainder normal identity %.1e (exact)", rem_a);
  });
}

CheckResult check_preset_chain(const StudyConfig& cfg) {
  return timed("preset " + cfg.name, [&](CheckResult& r) {
    validate_study_config(cfg);
    const auto flow = make_base_flow(cfg.euler, cfg.geometry);
    std::vector<Vec3> pts;
    for (int k = 0; k <= 40; ++k) {
      const double q = cfg.geometry.lower_wall() + cfg.geometry.gap() * k / 40.0;
      pts.push_back(volume_point(cfg.geometry, q));
    }
    const double er = euler_residual(flow, pts);
    double gmax = 0.0;
    for (Wall w : kWalls) gmax = std::max(gmax, norm(boundary_data_g(flow, cfg.geometry, w).g_raw));
    LayerConfig lc = cfg.layer;
    lc.t_end = cfg.eval_times().front();
    lc.output_times = {lc.t_end};
    const auto prof = solve_layer(flow, cfg.geometry, lc);
    double compat = 0.0, ubmax = 0.0;
    for (const auto& wl : prof.walls)
      for (std::size_t k = 0; k < wl.times.size(); ++k) {
        compat = std::max(compat, compatibility_residual(wl.ub[k], wl.v[k], wl.samples));
        ubmax = std::max(ubmax, kernels::max_abs(wl.ub[k].values));
      }
    // a wall datum of zero must give a vanishing layer
    const bool zero_chain = gmax > 1e-14 || ubmax < 1e-14;
    r.pass = er < 1e-8 && compat < 1e-10 && zero_chain;
    r.detail = fmt("euler residual %.2e", er) + fmt(" max|g| %.2e", gmax) + fmt(" max|u^b| %.2e", ubmax) +
               fmt(" compatibility %.2e", compat);
  });
}

std::vector<CheckResult> run_invariant_suite(const StudyConfig& cfg) {
  std::vector<CheckResult> out;
  out.push_back(check_kernels());
  out.push_back(check_geometry(cfg.geometry));
  out.push_back(check_projector(cfg.geometry));
  out.push_back(check_energy_identity(cfg.geometry));
  out.push_back(check_erfc_oracle());
  out.push_back(check_layer_scaling());
  out.push_back(check_hardy(cfg.geometry));
  out.push_back(check_gronwall());
  out.push_back(check_bc_orders());
  out.push_back(check_preset_chain(cfg));
  return out;
}

// --- manufactured layer: stagnation flow, b = a(t) (1 + z) exp(-z^2) tau1 ---

namespace {

constexpr double kLambda = 1.0;

double mf_a(double t) { return std::sin(kPi * t); }
double mf_da(double t) { return kPi * std::cos(kPi * t); }
double mf_h(double z) { return (1.0 + z) * std::exp(-z * z); }
double mf_h1(double z) { return std::exp(-z * z) * (1.0 - 2.0 * z - 2.0 * z * z); }
double mf_h2(double z) { return std::exp(-z * z) * (4.0 * z * z * z + 4.0 * z * z - 6.0 * z - 2.0); }

LayerForcing manufactured_forcing(CouplingMode mode) {
  LayerForcing f;
  const double fcoef = -kLambda;  // u0.n / phi for the stagnation flow
  f.source = [mode, fcoef](double t, double, double z) {
    const double a = mf_a(t);
    double s1 = mf_da(t) * mf_h(z) - a * mf_h2(z) + fcoef * z * a * mf_h1(z);
    double s2 = 0.0;
    // coupling C = lambda b e_x: C x n = lambda b e_z, (I - n n^T) C = lambda b e_x
    if (mode == CouplingMode::Projection)
      s1 += kLambda * a * mf_h(z);
    else
      s2 = kLambda * a * mf_h(z);
    return Tangential{s1, s2};
  };
  f.neumann = [](double t, double) { return Tangential{mf_a(t), 0.0}; };
  return f;
}

double manufactured_error(int nz, double dt, double t_end, CouplingMode mode) {
  const auto g = GeometryDescriptor::channel(1.0, 0.45);
  EulerFamily fam;
  fam.family = "manufactured:stagnation";
  fam.lambda = kLambda;
  const auto flow = make_base_flow(fam, g);
  LayerConfig cfg;
  cfg.nz = nz;
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.mode = mode;
  cfg.walls = {Wall::Lower};
  const auto prof = solve_layer(flow, g, cfg, manufactured_forcing(mode));
  const auto& wl = prof.wall(Wall::Lower);
  const std::size_t k = prof.time_index(t_end);
  double e = 0.0;
  for (std::size_t j = 0; j < prof.grid.size(); ++j) {
    const double z = prof.grid.z[j];
    e = std::max({e, std::fabs(wl.ub[k].at(0, 0, j) - mf_a(t_end) * mf_h(z)), std::fabs(wl.ub[k].at(0, 1, j))});
  }
  return e;
}

std::vector<double> manufactured_profile(int nz, double dt, double t_end, CouplingMode mode) {
  const auto g = GeometryDescriptor::channel(1.0, 0.45);
  EulerFamily fam;
  fam.family = "manufactured:stagnation";
  fam.lambda = kLambda;
  const auto flow = make_base_flow(fam, g);
  LayerConfig cfg;
  cfg.nz = nz;
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.mode = mode;
  cfg.walls = {Wall::Lower};
  const auto prof = solve_layer(flow, g, cfg, manufactured_forcing(mode));
  const auto& b = prof.wall(Wall::Lower).ub.back();
  return b.values;
}

}  // namespace

OrderStudy layer_manufactured_space(CouplingMode mode) {
  OrderStudy s;
  for (int nz : {64, 128, 256}) {
    s.step.push_back(1.0 / nz);
    s.error.push_back(manufactured_error(nz, 2e-5, 0.25, mode));
  }
  return finish(s);
}

OrderStudy layer_manufactured_time(CouplingMode mode) {
  // self-convergence at fixed nz: successive differences cancel the spatial error
  const int nz = 128;
  const double dts[] = {4e-4, 2e-4, 1e-4, 5e-5};
  std::vector<std::vector<double>> sols;
  for (double dt : dts) sols.push_back(manufactured_profile(nz, dt, 0.5, mode));
  OrderStudy s;
  for (int i = 0; i + 1 < 4; ++i) {
    double d = 0.0;
    for (std::size_t j = 0; j < sols[i].size(); ++j) d = std::max(d, std::fabs(sols[i][j] - sols[i + 1][j]));
    s.step.push_back(dts[i]);
    s.error.push_back(d);
  }
  return finish(s);
}

double annulus_slip_wavenumber(double r1, double r2) {
  auto F = [&](double k) {
    return std::cyl_bessel_j(0.0, k * r1) * std::cyl_neumann(0.0, k * r2) -
           std::cyl_bessel_j(0.0, k * r2) * std::cyl_neumann(0.0, k * r1);
  };
  double a = 1e-3, fa = F(a);
  const double dk = 1e-2;
  for (double b = a + dk; b < 200.0; b += dk) {
    const double fb = F(b);
    if (fa * fb < 0.0) {
      double lo = b - dk, hi = b, flo = fa;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi), fm = F(mid);
        if (flo * fm <= 0.0) {
          hi = mid;
        } else {
          lo = mid;
          flo = fm;
        }
      }
      return 0.5 * (lo + hi);
    }
    a = b;
    fa = fb;
  }
  throw Error("no slip eigenvalue found");
}

namespace {

struct Mode {
  std::function<double(double)> shape;
  double k2 = 0.0;
  GeometryDescriptor g;
};

Mode eigenmode(GeometryKind kind) {
  Mode m;
  if (kind == GeometryKind::FlatChannel) {
    m.g = GeometryDescriptor::channel(1.0, 0.45);
    m.shape = [](double y) { return std::cos(kPi * y); };
    m.k2 = kPi * kPi;
  } else {
    m.g = GeometryDescriptor::annulus(1.0, 2.0, 0.45);
    const double k = annulus_slip_wavenumber(1.0, 2.0);
    const double A = std::cyl_neumann(0.0, k), B = -std::cyl_bessel_j(0.0, k);
    m.shape = [=](double r) { return A * std::cyl_bessel_j(1.0, k * r) + B * std::cyl_neumann(1.0, k * r); };
    m.k2 = k * k;
  }
  return m;
}

double eigenmode_error(const Mode& m, int n, double dt, double nu, double t_end) {
  NsConfig nc;
  nc.n = n;
  nc.dt = dt;
  nc.t_end = t_end;
  const auto sol = solve_ns(m.g, m.shape, nu, nc);
  const double decay = std::exp(-nu * m.k2 * t_end);
  double e = 0.0, s = 0.0;
  for (std::size_t i = 0; i < sol.grid.q.size(); ++i) {
    e = std::max(e, std::fabs(sol.u.back()[i] - decay * m.shape(sol.grid.q[i])));
    s = std::max(s, std::fabs(m.shape(sol.grid.q[i])));
  }
  return e / s;
}

}  // namespace

OrderStudy ns_eigenmode_space(GeometryKind kind) {
  const Mode m = eigenmode(kind);
  OrderStudy s;
  const double nu = 1.0 / m.k2;
  for (int n : {64, 128, 256}) {
    s.step.push_back(1.0 / n);
    s.error.push_back(eigenmode_error(m, n, 1e-4, nu, 0.1));
  }
  return finish(s);
}

OrderStudy ns_eigenmode_time(GeometryKind kind) {
  const Mode m = eigenmode(kind);
  OrderStudy s;
  const double nu = 1.0 / m.k2;
  for (double dt : {0.02, 0.01, 0.005}) {
    s.step.push_back(dt);
    s.error.push_back(eigenmode_error(m, 2048, dt, nu, 0.4));
  }
  return finish(s);
}

}  // namespace navslip
