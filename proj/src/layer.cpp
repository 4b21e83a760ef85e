#include "navslip/layer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <ostream>
#include <set>

#include "navslip/kernels.hpp"
#include "navslip/tridiag.hpp"

namespace navslip {

const WallLayer& LayerProfile::wall(Wall w) const {
  for (const auto& wl : walls)
    if (wl.wall == w) return wl;
  throw Error("layer profile has no " + to_string(w) + " wall");
}

std::size_t LayerProfile::time_index(double t) const {
  const auto& times = walls.front().times;
  for (std::size_t k = 0; k < times.size(); ++k)
    if (std::fabs(times[k] - t) <= 1e-9 * std::max(1.0, std::fabs(t))) return k;
  throw Error("layer profile has no snapshot at t=" + std::to_string(t));
}

std::vector<WallSample> sample_wall(const BaseFlow& flow, const GeometryDescriptor& g, Wall w,
                                    const std::vector<double>& s_samples, double t) {
  std::vector<WallSample> out;
  for (double s : s_samples) {
    WallSample smp;
    smp.frame = wall_frame(g, w, s);
    smp.u0 = flow.velocity(t, smp.frame.point);
    smp.grad_u0 = flow.gradient(t, smp.frame.point);
    smp.f = flow.stretching(t, smp.frame.point);
    smp.g = boundary_data_g(flow, g, w, s, t);
    out.push_back(smp);
  }
  return out;
}

Vec3 coupling_vector(const WallSample& smp, const Tangential& b, const Tangential& db_ds) {
  const WallFrame& fr = smp.frame;
  const double u_slow = dot(smp.u0, fr.tau1);
  const Vec3* tau[2] = {&fr.tau1, &fr.tau2};
  const Mat3* grad_tau[2] = {&fr.grad_tau1, &fr.grad_tau2};
  Vec3 c{0, 0, 0};
  for (int i = 0; i < 2; ++i) {
    c = c + (u_slow * db_ds[i]) * *tau[i];
    c = c + b[i] * (*grad_tau[i] * smp.u0);
    c = c + b[i] * (smp.grad_u0 * *tau[i]);
  }
  return c;
}

Tangential project_coupling(const WallSample& smp, const Vec3& c, CouplingMode mode) {
  const WallFrame& fr = smp.frame;
  if (mode == CouplingMode::Cross) {
    const Vec3 w = cross(c, fr.n);
    return {dot(w, fr.tau1), dot(w, fr.tau2)};
  }
  return {dot(c, fr.tau1), dot(c, fr.tau2)};
}

namespace {

std::vector<double> slow_weights(const std::vector<double>& s, double measure) {
  std::vector<double> w(s.size(), 0.0);
  if (s.size() == 1) {
    w[0] = measure;
    return w;
  }
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double half = 0.5 * (s[i + 1] - s[i]);
    w[i] += half * measure;
    w[i + 1] += half * measure;
  }
  return w;
}

// d/ds of every (component, z) line; zero for a single sample.
std::vector<double> slow_derivative(const ProfileField& f) {
  std::vector<double> out(f.values.size(), 0.0);
  const std::size_t ns = f.ns(), nz = f.nz();
  if (ns < 2) return out;
  std::vector<double> line(ns);
  for (int c = 0; c < f.components; ++c)
    for (std::size_t j = 0; j < nz; ++j) {
      for (std::size_t is = 0; is < ns; ++is) line[is] = f.at(is, c, j);
      const auto d = derivative(f.s, line);
      for (std::size_t is = 0; is < ns; ++is) out[(is * f.components + c) * nz + j] = d[is];
    }
  return out;
}

ProfileField scalar_like(const ProfileField& ub, int comps = 1) {
  return ProfileField(ub.s, ub.s_weight, ub.grid, comps);
}

// -int_z^zmax of a line, trapezoid, accumulated from the far end.
void tail_integral(const std::vector<double>& z, const std::vector<double>& integrand,
                   std::span<double> out, double sign) {
  const std::size_t n = z.size();
  out[n - 1] = 0.0;
  double acc = 0.0;
  for (std::size_t j = n - 1; j-- > 0;) {
    acc += 0.5 * (integrand[j] + integrand[j + 1]) * (z[j + 1] - z[j]);
    out[j] = sign * acc;
  }
}

struct Stepper {
  TridiagonalFactor implicit;
  Tridiagonal explicit_part;
  double tau, theta;
};

Stepper make_stepper(const FastGrid& grid, double tau, double theta) {
  const std::size_t n = grid.size();
  const auto& z = grid.z;
  Tridiagonal D(n);
  const double h0 = z[1] - z[0];
  D.diag[0] = -2.0 / (h0 * h0);
  D.upper[0] = 2.0 / (h0 * h0);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double hm = z[j] - z[j - 1], hp = z[j + 1] - z[j];
    D.lower[j] = 2.0 / (hm * (hm + hp));
    D.upper[j] = 2.0 / (hp * (hm + hp));
    D.diag[j] = -2.0 / (hm * hp);
  }
  Tridiagonal A(n), B(n);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    A.lower[j] = -theta * tau * D.lower[j];
    A.diag[j] = 1.0 - theta * tau * D.diag[j];
    A.upper[j] = -theta * tau * D.upper[j];
    B.lower[j] = (1.0 - theta) * tau * D.lower[j];
    B.diag[j] = 1.0 + (1.0 - theta) * tau * D.diag[j];
    B.upper[j] = (1.0 - theta) * tau * D.upper[j];
  }
  A.diag[n - 1] = 1.0;  // u^b(zmax) = 0
  return Stepper{TridiagonalFactor(A), B, tau, theta};
}

class WallSolver {
 public:
  WallSolver(const LayerConfig& cfg, const FastGrid& grid, std::vector<WallSample> samples,
             const std::optional<LayerForcing>& forcing)
      : cfg_(cfg), grid_(grid), samples_(std::move(samples)), forcing_(forcing) {}

  Tangential neumann(std::size_t is, double t) const {
    if (forcing_ && forcing_->neumann) return forcing_->neumann(t, cfg_.s_samples[is]);
    return {-samples_[is].g.tau1, -samples_[is].g.tau2};
  }

  // -f z d_z b - T(C(b)) + source
  ProfileField explicit_terms(const ProfileField& b, double t) const {
    ProfileField e = scalar_like(b, 2);
    const std::size_t nz = b.nz();
    const auto dbs = slow_derivative(b);
    const auto& z = grid_.z;
    for (std::size_t is = 0; is < b.ns(); ++is) {
      const WallSample& smp = samples_[is];
      const auto dz1 = derivative(z, b.line(is, 0));
      const auto dz2 = derivative(z, b.line(is, 1));
      for (std::size_t j = 0; j < nz; ++j) {
        const Tangential bj{b.at(is, 0, j), b.at(is, 1, j)};
        const Tangential dsj{dbs[(is * 2 + 0) * nz + j], dbs[(is * 2 + 1) * nz + j]};
        const Tangential tc = project_coupling(smp, coupling_vector(smp, bj, dsj), cfg_.mode);
        double e1 = -smp.f * z[j] * dz1[j] - tc[0];
        double e2 = -smp.f * z[j] * dz2[j] - tc[1];
        if (forcing_ && forcing_->source) {
          const Tangential src = forcing_->source(t, cfg_.s_samples[is], z[j]);
          e1 += src[0];
          e2 += src[1];
        }
        e.at(is, 0, j) = e1;
        e.at(is, 1, j) = e2;
      }
    }
    return e;
  }

  void step(ProfileField& b, double t, const Stepper& st) const {
    const ProfileField e = explicit_terms(b, t);
    const std::size_t nz = b.nz();
    const double h0 = grid_.z[1] - grid_.z[0];
    std::vector<double> rhs(nz);
    for (std::size_t is = 0; is < b.ns(); ++is) {
      const Tangential g_old = neumann(is, t), g_new = neumann(is, t + st.tau);
      for (int c = 0; c < 2; ++c) {
        auto line = b.line(is, c);
        kernels::tridiag_apply(st.explicit_part.lower, st.explicit_part.diag, st.explicit_part.upper,
                               line, rhs);
        rhs[0] = st.explicit_part.diag[0] * line[0] + st.explicit_part.upper[0] * line[1];
        const auto el = e.line(is, c);
        for (std::size_t j = 0; j + 1 < nz; ++j) rhs[j] += st.tau * el[j];
        // ghost node: b_{-1} = b_1 - 2 h0 G
        const double src_old = -2.0 * g_old[c] / h0, src_new = -2.0 * g_new[c] / h0;
        rhs[0] += st.tau * (st.theta * src_new + (1.0 - st.theta) * src_old);
        rhs[nz - 1] = 0.0;
        st.implicit.solve(rhs);
        std::copy(rhs.begin(), rhs.end(), line.begin());
      }
    }
  }

  WallLayer run(Wall w, const std::set<long>& store_steps, long nsteps) const {
    WallLayer out;
    out.wall = w;
    out.samples = samples_;
    for (const auto& smp : samples_) {
      out.f_used.push_back(smp.f);
      out.g_used.push_back({smp.g.tau1, smp.g.tau2});
    }
    const double measure = samples_.front().frame.slow_measure;
    ProfileField b(cfg_.s_samples, slow_weights(cfg_.s_samples, measure), grid_, 2);
    auto store = [&](double t) {
      out.times.push_back(t);
      out.ub.push_back(b);
      out.q.push_back(pressure_corrector_q(b, samples_));
      out.v.push_back(velocity_corrector_v(b, samples_));
    };
    store(0.0);
    const Stepper cn = make_stepper(grid_, cfg_.dt, 0.5);
    const Stepper be = make_stepper(grid_, 0.5 * cfg_.dt, 1.0);
    for (long n = 0; n < nsteps; ++n) {
      const double t = n * cfg_.dt;
      if (cfg_.startup_smoothing && n < 2) {
        step(b, t, be);
        step(b, t + 0.5 * cfg_.dt, be);
      } else {
        step(b, t, cn);
      }
      if (store_steps.count(n + 1)) store((n + 1) * cfg_.dt);
    }
    return out;
  }

 private:
  const LayerConfig& cfg_;
  const FastGrid& grid_;
  std::vector<WallSample> samples_;
  const std::optional<LayerForcing>& forcing_;
};

long steps_for(double t, double dt, const char* what) {
  const long k = std::lround(t / dt);
  if (std::fabs(k * dt - t) > 1e-9 * std::max(1.0, t))
    throw ConfigError(std::string(what) + " is not a multiple of dt");
  return k;
}

}  // namespace

LayerProfile solve_layer(const BaseFlow& flow, const GeometryDescriptor& g, const LayerConfig& cfg,
                         const std::optional<LayerForcing>& forcing) {
  if (!(cfg.dt > 0.0)) throw ConfigError("layer.dt must be positive");
  if (!(cfg.t_end > 0.0)) throw ConfigError("layer.t_end must be positive");
  if (cfg.s_samples.empty()) throw ConfigError("layer needs at least one slow sample");
  g.validate();
  LayerProfile prof;
  prof.grid = FastGrid::mapped(cfg.nz, cfg.zmax, cfg.map_length);
  prof.mode = cfg.mode;
  prof.dt = cfg.dt;

  const long nsteps = steps_for(cfg.t_end, cfg.dt, "layer.t_end");
  std::set<long> store_steps{nsteps};
  if (cfg.store_every > 0)
    for (long k = cfg.store_every; k <= nsteps; k += cfg.store_every) store_steps.insert(k);
  for (double t : cfg.output_times) {
    const long k = steps_for(t, cfg.dt, "layer output time");
    if (k < 0 || k > nsteps) throw ConfigError("layer output time outside [0, t_end]");
    if (k > 0) store_steps.insert(k);
  }

  std::vector<std::vector<WallSample>> samples;
  for (Wall w : cfg.walls) {
    samples.push_back(sample_wall(flow, g, w, cfg.s_samples));
    double fmax = 0.0;
    for (const auto& s : samples.back()) fmax = std::max(fmax, std::fabs(s.f));
    if (fmax * prof.grid.zmax() * cfg.dt / prof.grid.dz_min() > 1.0)
      throw ConfigError("layer.dt violates the CFL limit of the explicit f z d_z term");
  }

  std::vector<WallSolver> solvers;
  for (std::size_t i = 0; i < cfg.walls.size(); ++i)
    solvers.emplace_back(cfg, prof.grid, samples[i], forcing);

  if (cfg.jobs > 1 && cfg.walls.size() > 1) {
    std::vector<std::future<WallLayer>> fut;
    for (std::size_t i = 0; i < cfg.walls.size(); ++i)
      fut.push_back(std::async(std::launch::async, [&, i] {
        return solvers[i].run(cfg.walls[i], store_steps, nsteps);
      }));
    for (auto& f : fut) prof.walls.push_back(f.get());
  } else {
    for (std::size_t i = 0; i < cfg.walls.size(); ++i)
      prof.walls.push_back(solvers[i].run(cfg.walls[i], store_steps, nsteps));
  }
  return prof;
}

ProfileField pressure_corrector_q(const ProfileField& ub, const std::vector<WallSample>& samples) {
  ProfileField q = scalar_like(ub);
  const std::size_t nz = ub.nz();
  const auto dbs = slow_derivative(ub);
  std::vector<double> integrand(nz);
  for (std::size_t is = 0; is < ub.ns(); ++is) {
    for (std::size_t j = 0; j < nz; ++j) {
      const Tangential b{ub.at(is, 0, j), ub.at(is, 1, j)};
      const Tangential ds{dbs[(is * 2) * nz + j], dbs[(is * 2 + 1) * nz + j]};
      integrand[j] = dot(coupling_vector(samples[is], b, ds), samples[is].frame.n);
    }
    tail_integral(ub.grid.z, integrand, q.line(is, 0), -1.0);
  }
  return q;
}

ProfileField slow_divergence(const ProfileField& ub, const std::vector<WallSample>& samples) {
  ProfileField div = scalar_like(ub);
  const std::size_t nz = ub.nz();
  const auto dbs = slow_derivative(ub);
  for (std::size_t is = 0; is < ub.ns(); ++is) {
    const WallFrame& fr = samples[is].frame;
    const double proj[2] = {dot(fr.tau1, fr.tau1), dot(fr.tau1, fr.tau2)};
    const double tr[2] = {fr.grad_tau1[0][0] + fr.grad_tau1[1][1] + fr.grad_tau1[2][2],
                          fr.grad_tau2[0][0] + fr.grad_tau2[1][1] + fr.grad_tau2[2][2]};
    for (std::size_t j = 0; j < nz; ++j) {
      double d = 0.0;
      for (int i = 0; i < 2; ++i) d += proj[i] * dbs[(is * 2 + i) * nz + j] + ub.at(is, i, j) * tr[i];
      div.at(is, 0, j) = d;
    }
  }
  return div;
}

ProfileField velocity_corrector_v(const ProfileField& ub, const std::vector<WallSample>& samples) {
  const ProfileField div = slow_divergence(ub, samples);
  ProfileField v = scalar_like(ub);
  for (std::size_t is = 0; is < ub.ns(); ++is) {
    const auto line = div.line(is, 0);
    tail_integral(ub.grid.z, std::vector<double>(line.begin(), line.end()), v.line(is, 0), 1.0);
  }
  return v;
}

double compatibility_residual(const ProfileField& ub, const ProfileField& vbar,
                              const std::vector<WallSample>& samples) {
  const ProfileField div = slow_divergence(ub, samples);
  const auto& z = ub.grid.z;
  double worst = 0.0;
  for (std::size_t is = 0; is < ub.ns(); ++is)
    for (std::size_t j = 0; j + 1 < ub.nz(); ++j) {
      const double dv = (vbar.at(is, 0, j + 1) - vbar.at(is, 0, j)) / (z[j + 1] - z[j]);
      const double dmid = 0.5 * (div.at(is, 0, j) + div.at(is, 0, j + 1));
      worst = std::max(worst, std::fabs(dv + dmid));
    }
  return worst;
}

ProfileField grad_q_x(const ProfileField& ub, const std::vector<WallSample>& samples,
                      const BaseFlow& flow, const GeometryDescriptor& g, Wall w, double t) {
  const ProfileField q = pressure_corrector_q(ub, samples);
  const auto dqs = slow_derivative(q);
  const auto dbs = slow_derivative(ub);
  const std::size_t nz = ub.nz();
  ProfileField out = scalar_like(ub, 3);
  const double delta = 1e-4 * g.eta;
  std::vector<double> dI(nz);
  std::vector<double> dq_dphi(nz);
  for (std::size_t is = 0; is < ub.ns(); ++is) {
    const double s = ub.s[is];
    WallSample shifted[3];
    for (int k = 0; k < 3; ++k) {
      WallSample& sm = shifted[k];
      sm.frame = frame_at(g, w, k * delta, s);
      sm.u0 = flow.velocity(t, sm.frame.point);
      sm.grad_u0 = flow.gradient(t, sm.frame.point);
    }
    for (std::size_t j = 0; j < nz; ++j) {
      const Tangential b{ub.at(is, 0, j), ub.at(is, 1, j)};
      const Tangential ds{dbs[(is * 2) * nz + j], dbs[(is * 2 + 1) * nz + j]};
      double I[3];
      for (int k = 0; k < 3; ++k) I[k] = dot(coupling_vector(shifted[k], b, ds), shifted[k].frame.n);
      dI[j] = (-3.0 * I[0] + 4.0 * I[1] - I[2]) / (2.0 * delta);
    }
    tail_integral(ub.grid.z, dI, dq_dphi, -1.0);
    const WallFrame& fr = samples[is].frame;
    for (std::size_t j = 0; j < nz; ++j) {
      const Vec3 grad = dqs[is * nz + j] * fr.tau1 + dq_dphi[j] * fr.n;
      for (int c = 0; c < 3; ++c) out.at(is, c, j) = grad[c];
    }
  }
  return out;
}

std::vector<NormSeries> layer_norm_monitor(const WallLayer& layer,
                                           const std::vector<AnisotropicIndex>& idx) {
  std::vector<NormSeries> out;
  for (const auto& id : idx) {
    NormSeries ser;
    ser.idx = id;
    for (const auto& snap : layer.ub) ser.values.push_back(weighted_norm(snap, id));
    double ref = 0.0;
    for (double v : ser.values) {
      if (ref == 0.0 && v > 0.0) {
        ref = v;
        continue;
      }
      if (ref > 0.0 && v > 10.0 * ref) ser.growth_flag = true;
    }
    out.push_back(std::move(ser));
  }
  return out;
}

void write_layer_snapshots(std::ostream& os, const LayerProfile& profile) {
  char buf[256];
  for (const auto& wl : profile.walls) {
    os << "# wall=" << to_string(wl.wall) << "\n# t s z ub1 ub2 q v\n";
    for (std::size_t k = 0; k < wl.times.size(); ++k) {
      const auto& ub = wl.ub[k];
      for (std::size_t is = 0; is < ub.ns(); ++is)
        for (std::size_t j = 0; j < ub.nz(); ++j) {
          std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g %.17g %.17g %.17g\n", wl.times[k],
                        ub.s[is], ub.grid.z[j], ub.at(is, 0, j), ub.at(is, 1, j),
                        wl.q[k].at(is, 0, j), wl.v[k].at(is, 0, j));
          os << buf;
        }
    }
  }
}

}  // namespace navslip
