// navslip command line: invariant checks, single solves and the nu study.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "navslip/checks.hpp"
#include "navslip/config.hpp"
#include "navslip/error.hpp"
#include "navslip/expansion.hpp"
#include "navslip/study.hpp"

using namespace navslip;

namespace {

struct Options {
  std::string config, out, preset;
  int jobs = 0;
  std::vector<double> nu;
};

StudyConfig resolve(const Options& o) {
  if (o.config.empty() && o.preset.empty()) throw ConfigError("no configuration: pass --config PATH or --preset NAME");
  StudyConfig c = o.preset.empty() ? StudyConfig{} : preset_config(o.preset);
  if (!o.config.empty()) c = load_config(o.config, c);
  if (o.jobs > 0) c.jobs = o.jobs;
  if (!o.out.empty()) c.output_dir = o.out;
  return c;
}

void ensure_dir(const std::string& d) {
  std::error_code ec;
  std::filesystem::create_directories(d, ec);
  if (ec) throw Error("cannot create output directory '" + d + "'");
}

int run_check(const Options& o) {
  const StudyConfig c = resolve(o);
  validate_study_config(c);
  const auto results = run_invariant_suite(c);
  bool ok = true;
  for (const auto& r : results) {
    std::printf("%-4s %-26s %7.2fs  %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.seconds, r.detail.c_str());
    ok = ok && r.pass;
  }
  return ok ? 0 : 1;
}

int run_layer(const Options& o) {
  const StudyConfig c = resolve(o);
  validate_study_config(c);
  const auto flow = make_base_flow(c.euler, c.geometry);
  LayerConfig lc = c.layer;
  if (lc.output_times.empty()) lc.output_times = c.eval_times();
  lc.jobs = c.jobs;
  const auto prof = solve_layer(flow, c.geometry, lc);
  ensure_dir(c.output_dir);
  const auto path = std::filesystem::path(c.output_dir) / "layer_snapshots.txt";
  std::ofstream os(path);
  write_layer_snapshots(os, prof);
  if (!os) throw Error("cannot write " + path.string());

  const std::vector<AnisotropicIndex> idx{{0, 0, 0, 2.0}, {1, 0, 1, 2.0}, {1, 1, 1, 4.0}};
  std::ofstream mon(std::filesystem::path(c.output_dir) / "layer_monitor.csv");
  mon << "wall,t,k,m,l,p,value\n";
  bool growth = false;
  for (const auto& wl : prof.walls) {
    const auto series = layer_norm_monitor(wl, idx);
    for (const auto& s : series) {
      growth = growth || s.growth_flag;
      for (std::size_t k = 0; k < wl.times.size(); ++k) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s,%.17g,%d,%d,%d,%.17g,%.17g\n", to_string(wl.wall).c_str(), wl.times[k],
                      s.idx.k, s.idx.m, s.idx.l, s.idx.p, s.values[k]);
        mon << buf;
      }
    }
    const auto& last = wl.ub.back();
    std::printf("wall %-6s f=%-8.4g g=(%.6g, %.6g)  u^b(T,0)=(%.10g, %.10g)\n", to_string(wl.wall).c_str(),
                wl.f_used[0], wl.g_used[0][0], wl.g_used[0][1], last.at(0, 0, 0), last.at(0, 1, 0));
  }
  if (growth) std::printf("warning: a monitored layer norm grew more than tenfold\n");
  std::printf("wrote %s\n", path.string().c_str());
  return 0;
}

int run_ns(const Options& o) {
  const StudyConfig c = resolve(o);
  validate_study_config(c);
  const auto flow = make_base_flow(c.euler, c.geometry);
  if (!flow.profile.value) throw ConfigError("ns solve needs a swirl or shear base flow");
  ensure_dir(c.output_dir);
  const auto nus = o.nu.empty() ? c.nu_list : o.nu;
  for (double nu : nus) {
    NsConfig nc = c.ns;
    if (nc.output_times.empty()) nc.output_times = c.eval_times();
    const auto sol = solve_ns(c.geometry, flow.profile.value, nu, nc);
    char name[64];
    std::snprintf(name, sizeof name, "ns_snapshots_nu%.3g.txt", nu);
    const auto path = std::filesystem::path(c.output_dir) / name;
    std::ofstream os(path);
    write_ns_snapshots(os, sol);
    if (!os) throw Error("cannot write " + path.string());
    const auto er = energy_identity_residual(sol);
    const auto bc = bc_residual(sol);
    double emax = 0.0;
    for (double e : er) emax = std::max(emax, e);
    std::printf("nu=%-8.3g n=%d dt=%g  energy identity max %.3e  wall vorticity (t=T) %.3e  -> %s\n", nu, nc.n,
                nc.dt, emax, bc.back(), path.string().c_str());
  }
  return 0;
}

int run_study(const Options& o) {
  const StudyConfig c = resolve(o);
  const auto rep = run_convergence_study(c);
  export_report(rep, c.output_dir);
  for (const auto& e : rep.rates) {
    if (e.fit)
      std::printf("%-8s slope %.4f  theory %.4f  r2 %.5f  %s\n", e.norm.c_str(), e.fit->slope, e.theory, e.fit->r2,
                  e.status.c_str());
    else
      std::printf("%-8s %s\n", e.norm.c_str(), e.status.c_str());
  }
  const auto& rc = rep.remainder_check;
  if (rc.exact_regime)
    std::printf("remainder: exact regime\n");
  else
    std::printf("remainder: sup||R||_4 ratio %.3f  sqrt(nu) sup||R||_{1,2} ratio %.3f  %s\n", rc.lp4_ratio,
                rc.h1_scaled_ratio, rc.pass ? "bounded" : "NOT bounded");
  for (const auto& f : rep.failures) std::printf("nu=%g failed: %s\n", f.nu, f.message.c_str());
  if (rep.interpolation_flag) std::printf("warning: interpolation error estimate above 1%% of |R|\n");
  std::printf("%s (%.1fs), reports in %s\n", rep.passed ? "study passed" : ("study FAILED: " + rep.failure_reason).c_str(),
              rep.wall_seconds, c.output_dir.c_str());
  return rep.passed ? 0 : 1;
}

int run_euler(const Options& o) {
  const StudyConfig c = resolve(o);
  c.geometry.validate();
  const auto flow = make_base_flow(c.euler, c.geometry);
  std::vector<Vec3> pts;
  for (Wall w : kWalls)
    for (int k = 0; k <= 50; ++k)
      for (double s : {0.0, 0.7}) pts.push_back(collar_point(c.geometry, w, c.geometry.eta * k / 50.0, s));
  const double r = euler_residual(flow, pts);
  std::printf("%s: max |d_t u + u.grad u + grad pi| + |div u| = %.3e over %zu collar points\n", flow.tag.c_str(), r,
              pts.size());
  for (Wall w : kWalls) {
    const auto g = boundary_data_g(flow, c.geometry, w);
    std::printf("wall %-6s curl u0 x n = (%.6g, %.6g) in (tau1, tau2)\n", to_string(w).c_str(), g.tau1, g.tau2);
  }
  return r < 1e-8 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"navslip: vanishing-viscosity boundary layers under the slip condition"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "INI configuration file");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--preset", o.preset, "built-in configuration")
        ->check(CLI::IsMember(preset_names()));
    sub->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
  };
  auto* check = app.add_subcommand("check", "run the invariant suite");
  common(check);
  auto* layer = app.add_subcommand("layer", "boundary-layer profile");
  layer->require_subcommand(1);
  auto* layer_solve = layer->add_subcommand("solve", "solve the layer problem and write snapshots");
  common(layer_solve);
  auto* ns = app.add_subcommand("ns", "viscous solver");
  ns->require_subcommand(1);
  auto* ns_solve = ns->add_subcommand("solve", "solve for each nu and write snapshots");
  common(ns_solve);
  ns_solve->add_option("--nu", o.nu, "viscosities (default: the study list)");
  auto* study = app.add_subcommand("study", "convergence study");
  study->require_subcommand(1);
  auto* study_rates = study->add_subcommand("rates", "sweep nu, fit rates, write reports");
  common(study_rates);
  auto* euler = app.add_subcommand("euler", "base flow");
  euler->require_subcommand(1);
  auto* euler_res = euler->add_subcommand("residual", "Euler residual of the base flow");
  common(euler_res);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*check) return run_check(o);
    if (*layer_solve) return run_layer(o);
    if (*ns_solve) return run_ns(o);
    if (*study_rates) return run_study(o);
    if (*euler_res) return run_euler(o);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
