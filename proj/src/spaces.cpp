#include "navslip/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "navslip/fit.hpp"
#include "navslip/kernels.hpp"

namespace navslip {

FastGrid FastGrid::mapped(int nz, double zmax, double map_length) {
  if (nz < 8) throw ConfigError("fast grid needs at least 8 points");
  if (!(zmax > 0.0) || !(map_length > 0.0)) throw ConfigError("fast grid: zmax and L must be positive");
  FastGrid g;
  g.map_length = map_length;
  const double xi_max = -std::expm1(-zmax / map_length);
  g.z.resize(nz);
  for (int j = 0; j < nz; ++j) {
    const double xi = xi_max * j / (nz - 1);
    g.z[j] = -map_length * std::log1p(-xi);
  }
  g.z.front() = 0.0;
  g.z.back() = zmax;
  g.weight.assign(nz, 0.0);
  for (int j = 0; j + 1 < nz; ++j) {
    const double half = 0.5 * (g.z[j + 1] - g.z[j]);
    g.weight[j] += half;
    g.weight[j + 1] += half;
  }
  return g;
}

ProfileField::ProfileField(std::vector<double> s_, std::vector<double> s_weight_, FastGrid grid_,
                           int comps)
    : s(std::move(s_)), s_weight(std::move(s_weight_)), grid(std::move(grid_)), components(comps) {
  if (s.size() != s_weight.size()) throw ConfigError("profile: slow grid and weights differ in size");
  values.assign(s.size() * components * grid.size(), 0.0);
}

namespace {

double parse_p(const std::string& t) {
  if (t == "inf") return kInf;
  std::size_t pos = 0;
  const double p = std::stod(t, &pos);
  if (pos != t.size() || !(p >= 1.0)) throw ConfigError("invalid norm exponent '" + t + "'");
  return p;
}

}  // namespace

NormSpec parse_norm(const std::string& text) {
  NormSpec n;
  n.text = text;
  try {
    if (text == "l2") {
      n.p = 2.0;
    } else if (text == "linf") {
      n.p = kInf;
    } else if (text == "h1") {
      n.kind = NormSpec::Kind::H1;
    } else if (text.rfind("lp:", 0) == 0) {
      n.p = parse_p(text.substr(3));
    } else if (text.rfind("aniso:", 0) == 0) {
      n.kind = NormSpec::Kind::Aniso;
      std::stringstream ss(text.substr(6));
      std::string part;
      std::vector<std::string> parts;
      while (std::getline(ss, part, ',')) parts.push_back(part);
      if (parts.size() != 4) throw ConfigError("aniso norm needs k,m,l,p");
      n.idx.k = std::stoi(parts[0]);
      n.idx.m = std::stoi(parts[1]);
      n.idx.l = std::stoi(parts[2]);
      n.idx.p = parse_p(parts[3]);
      if (n.idx.k < 0 || n.idx.m < 0 || n.idx.l < 0) throw ConfigError("aniso indices must be >= 0");
      n.p = n.idx.p;
    } else {
      throw ConfigError("unknown norm '" + text + "'");
    }
  } catch (const std::logic_error&) {
    throw ConfigError("malformed norm '" + text + "'");
  }
  return n;
}

std::vector<double> derivative(std::span<const double> x, std::span<const double> f) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  if (n == 2) {
    d[0] = d[1] = (f[1] - f[0]) / (x[1] - x[0]);
    return d;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = x[i] - x[i - 1], hp = x[i + 1] - x[i];
    d[i] = (-hp / (hm * (hm + hp))) * f[i - 1] + ((hp - hm) / (hm * hp)) * f[i] +
           (hm / (hp * (hm + hp))) * f[i + 1];
  }
  {
    const double h1 = x[1] - x[0], h2 = x[2] - x[1];
    d[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * f[0] + (h1 + h2) / (h1 * h2) * f[1] -
           h1 / (h2 * (h1 + h2)) * f[2];
  }
  {
    const double h1 = x[n - 1] - x[n - 2], h2 = x[n - 2] - x[n - 3];
    d[n - 1] = (2.0 * h1 + h2) / (h1 * (h1 + h2)) * f[n - 1] - (h1 + h2) / (h1 * h2) * f[n - 2] +
               h1 / (h2 * (h1 + h2)) * f[n - 3];
  }
  return d;
}

double cubic_interpolate(std::span<const double> x, std::span<const double> f, double at) {
  const std::size_t n = x.size();
  if (at <= x.front()) return f.front();
  if (at >= x.back()) return f.back();
  const std::size_t hi = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), at) - x.begin());
  std::size_t lo = hi >= 2 ? hi - 2 : 0;
  if (n >= 4) lo = std::min(lo, n - 4);
  const std::size_t cnt = std::min<std::size_t>(4, n);
  double r = 0.0;
  for (std::size_t a = lo; a < lo + cnt; ++a) {
    double w = 1.0;
    for (std::size_t b = lo; b < lo + cnt; ++b)
      if (b != a) w *= (at - x[b]) / (x[a] - x[b]);
    r += w * f[a];
  }
  return r;
}

double weighted_norm(const ProfileField& field, const AnisotropicIndex& idx) {
  if (idx.k < 0 || idx.m < 0 || idx.l < 0 || !(idx.p >= 1.0))
    throw ConfigError("anisotropic index out of range");
  const bool sup = std::isinf(idx.p);
  if (sup && idx.k > 0) throw ConfigError("p = inf with k > 0 is not supported");

  const std::size_t ns = field.ns(), nz = field.nz();
  const int nc = field.components;
  const auto& z = field.grid.z;

  // slow_der[a] holds d^a/ds^a of every component line.
  std::vector<std::vector<double>> slow_der{field.values};
  for (int a = 1; a <= idx.m; ++a) {
    std::vector<double> next(field.values.size(), 0.0);
    if (ns >= 2) {
      const auto& prev = slow_der.back();
      std::vector<double> line(ns);
      for (int c = 0; c < nc; ++c)
        for (std::size_t j = 0; j < nz; ++j) {
          for (std::size_t is = 0; is < ns; ++is) line[is] = prev[(is * nc + c) * nz + j];
          const auto d = derivative(field.s, line);
          for (std::size_t is = 0; is < ns; ++is) next[(is * nc + c) * nz + j] = d[is];
        }
    }
    slow_der.push_back(std::move(next));
  }

  std::vector<double> weights(ns * nz);
  for (std::size_t is = 0; is < ns; ++is)
    for (std::size_t j = 0; j < nz; ++j) {
      const double zk = idx.k == 0 ? 0.0 : std::pow(z[j], 2 * idx.k);
      weights[is * nz + j] = field.s_weight[is] * field.grid.weight[j] * (1.0 + zk);
    }

  double total = 0.0;
  std::vector<double> mag(ns * nz);
  for (int a = 0; a <= idx.m; ++a) {
    std::vector<double> cur = slow_der[a];
    for (int b = 0; b <= idx.l; ++b) {
      if (b > 0)
        for (std::size_t is = 0; is < ns; ++is)
          for (int c = 0; c < nc; ++c) {
            std::span<double> line(&cur[(is * nc + c) * nz], nz);
            const auto d = derivative(z, line);
            std::copy(d.begin(), d.end(), line.begin());
          }
      for (std::size_t is = 0; is < ns; ++is)
        for (std::size_t j = 0; j < nz; ++j) {
          double s2 = 0.0;
          for (int c = 0; c < nc; ++c) {
            const double v = cur[(is * nc + c) * nz + j];
            s2 += v * v;
          }
          mag[is * nz + j] = std::sqrt(s2);
        }
      if (sup)
        total = std::max(total, kernels::max_abs(mag));
      else
        total += kernels::weighted_pow_sum(mag, weights, idx.p);
    }
  }
  return sup ? total : std::pow(total, 1.0 / idx.p);
}

std::vector<double> VolumeField::magnitude() const {
  std::vector<double> m(size());
  for (std::size_t i = 0; i < size(); ++i)
    m[i] = std::sqrt(normal[i] * normal[i] + tang1[i] * tang1[i] + tang2[i] * tang2[i]);
  return m;
}

double volume_lp_norm(const VolumeGrid& grid, const VolumeField& u, double p) {
  const auto mag = u.magnitude();
  if (std::isinf(p)) return kernels::max_abs(mag);
  return std::pow(kernels::weighted_pow_sum(mag, grid.weight, p), 1.0 / p);
}

double volume_h1_norm(const GeometryDescriptor& g, const VolumeGrid& grid, const VolumeField& u) {
  const bool annulus = g.kind == GeometryKind::AnnulusGap;
  double sum = 0.0;
  auto add_component = [&](const std::vector<double>& w, bool hoop) {
    const auto d = derivative(grid.q, w);
    sum += kernels::weighted_pow_sum(w, grid.weight, 2.0);
    sum += kernels::weighted_pow_sum(d, grid.weight, 2.0);
    if (hoop) {
      std::vector<double> wr(w.size());
      for (std::size_t i = 0; i < w.size(); ++i) wr[i] = w[i] / grid.q[i];
      sum += kernels::weighted_pow_sum(wr, grid.weight, 2.0);
    }
  };
  add_component(u.normal, annulus);
  add_component(u.tang1, annulus);
  add_component(u.tang2, false);
  return std::sqrt(sum);
}

double volume_norm(const GeometryDescriptor& g, const VolumeGrid& grid, const VolumeField& u,
                   const NormSpec& which) {
  switch (which.kind) {
    case NormSpec::Kind::Lp:
      return volume_lp_norm(grid, u, which.p);
    case NormSpec::Kind::H1:
      return volume_h1_norm(g, grid, u);
    case NormSpec::Kind::Aniso:
      break;
  }
  throw ConfigError("norm '" + which.text + "' is not a volume norm");
}

LayerEvaluation boundary_layer_eval(const ProfileField& field, const GeometryDescriptor& g,
                                    Wall wall, const VolumeGrid& grid, double nu, double p,
                                    std::size_t s_index) {
  if (!(nu > 0.0)) throw ConfigError("boundary_layer_eval: nu must be positive");
  LayerEvaluation ev;
  const double sq = std::sqrt(nu);
  ev.regime_warning = sq > 0.25 * g.eta;
  ev.components.assign(field.components, std::vector<double>(grid.q.size(), 0.0));
  for (std::size_t i = 0; i < grid.q.size(); ++i) {
    const double phi = wall_distance(g, wall, grid.q[i]);
    const double chi = collar_cutoff(phi, g.eta);
    if (chi == 0.0) continue;
    for (int c = 0; c < field.components; ++c)
      ev.components[c][i] = chi * cubic_interpolate(field.grid.z, field.line(s_index, c), phi / sq);
  }
  std::vector<double> mag(grid.q.size(), 0.0);
  for (std::size_t i = 0; i < mag.size(); ++i) {
    double s2 = 0.0;
    for (const auto& comp : ev.components) s2 += comp[i] * comp[i];
    mag[i] = std::sqrt(s2);
  }
  ev.lp_norm = std::isinf(p) ? kernels::max_abs(mag)
                             : std::pow(kernels::weighted_pow_sum(mag, grid.weight, p), 1.0 / p);
  return ev;
}

ScalingCheck scaling_exponent_check(const ProfileField& field, const GeometryDescriptor& g,
                                    Wall wall, const VolumeGrid& grid,
                                    const std::vector<double>& nu_list, double p, int m) {
  if (nu_list.size() < 3) throw ConfigError("scaling check needs at least 3 nu values");
  const auto [lo, hi] = std::minmax_element(nu_list.begin(), nu_list.end());
  if (*hi / *lo < 100.0 * (1.0 - 1e-12)) throw ConfigError("scaling check: nu values must span 2 decades");
  ScalingCheck out;
  const double aniso = weighted_norm(field, AnisotropicIndex{1, m, 1, p});
  std::vector<std::pair<double, double>> rows;
  for (double nu : nu_list) {
    const double norm = boundary_layer_eval(field, g, wall, grid, nu, p).lp_norm;
    out.norms.push_back(norm);
    out.ratios.push_back(aniso > 0.0 ? norm / aniso : 0.0);
    rows.emplace_back(nu, norm);
  }
  out.max_ratio = *std::max_element(out.ratios.begin(), out.ratios.end());
  const RateFit fit = fit_rate(rows);
  out.exponent = fit.slope;
  out.r2 = fit.r2;
  return out;
}

double hardy_ratio(const GeometryDescriptor& g, const VolumeGrid& grid, std::span<const double> u,
                   double p, double beta) {
  if (!(p >= 1.0)) throw ConfigError("hardy_ratio: p must be >= 1");
  if (!(beta < p - 1.0)) throw ConfigError("hardy_ratio: beta must be below p - 1");
  const std::size_t n = grid.q.size();
  if (u.size() != n || n < 5) throw ConfigError("hardy_ratio: field/grid size mismatch");
  for (std::size_t i : {std::size_t{0}, std::size_t{1}, n - 2, n - 1})
    if (u[i] != 0.0) throw DomainError("hardy_ratio: field must vanish on the two wall layers");
  const auto du = derivative(grid.q, u);
  double left = 0.0, right = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double d = std::min(grid.q[i] - g.lower_wall(), g.upper_wall() - grid.q[i]);
    left += grid.weight[i] * std::pow(std::fabs(u[i]), p) / std::pow(d, p - beta);
    right += grid.weight[i] * std::pow(std::fabs(du[i]), p) * std::pow(d, beta);
  }
  if (right == 0.0) return 0.0;
  return left / right;
}

namespace {

double trapezoid_to(std::span<const double> times, std::span<const double> h, double t) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double a = times[i], b = times[i + 1];
    if (t <= a) break;
    if (t >= b) {
      acc += 0.5 * (h[i] + h[i + 1]) * (b - a);
    } else {
      const double hb = h[i] + (h[i + 1] - h[i]) * (t - a) / (b - a);
      acc += 0.5 * (h[i] + hb) * (t - a);
      break;
    }
  }
  return acc;
}

}  // namespace

double gronwall_local_bound(double y0, std::span<const double> times, std::span<const double> h,
                            double c0, double alpha, double t) {
  if (!(c0 > 0.0) || !(alpha > 0.0)) throw ConfigError("gronwall: c0 and alpha must be positive");
  if (y0 < 0.0) throw ConfigError("gronwall: y0 must be nonnegative");
  if (times.size() != h.size() || times.empty()) throw ConfigError("gronwall: sample size mismatch");
  auto H = [&](double s) { return y0 + trapezoid_to(times, h, s); };
  auto horizon = [&](double s) { return alpha * c0 * std::pow(H(s), alpha) * s; };
  const double Ht = H(t);
  const double a = horizon(t);
  if (a >= 1.0) {
    double lo = 0.0, hi = t;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (horizon(mid) >= 1.0 ? hi : lo) = mid;
    }
    throw BlowUpHorizonError("gronwall: alpha*c0*H^alpha*t >= 1", hi);
  }
  return Ht + Ht * (std::pow(1.0 - a, -1.0 / alpha) - 1.0);
}

}  // namespace navslip
