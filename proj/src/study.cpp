#include "navslip/study.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <json.hpp>

#include "navslip/error.hpp"
#include "navslip/kernels.hpp"

namespace navslip {

double theory_slope(const NormSpec& s) {
  switch (s.kind) {
    case NormSpec::Kind::H1:
      return 0.25;
    case NormSpec::Kind::Lp:
      return std::isinf(s.p) ? 0.5 : 0.5 + 1.0 / (2.0 * s.p);
    case NormSpec::Kind::Aniso:
      break;
  }
  throw ConfigError("no expected exponent for norm '" + s.text + "'");
}

std::optional<double> comparison_slope(const NormSpec& s) {
  if (s.kind == NormSpec::Kind::Lp && !std::isinf(s.p) && s.p != 2.0) return 0.3 + 0.9 / s.p;
  return std::nullopt;
}

namespace {

constexpr double kExactLevel = 1e-8;
constexpr double kRemainderExactLevel = 1e-6;

struct NuRow {
  double nu = 0.0;
  bool ok = false;
  std::string message;
  std::vector<ErrorRow> errors;
  std::vector<RemainderRow> remainder;
  double interpolation_estimate = 0.0;
  bool interpolation_flag = false;
  bool regime_warning = false;
};

std::vector<NormSpec> remainder_norms(const std::vector<NormSpec>& requested) {
  std::vector<NormSpec> out = requested;
  for (const char* extra : {"lp:4", "h1"})
    if (std::none_of(out.begin(), out.end(), [&](const NormSpec& s) { return s.text == extra; }))
      out.push_back(parse_norm(extra));
  return out;
}

NuRow run_row(const StudyConfig& cfg, const BaseFlow& flow, const LayerProfile& profile,
              const std::vector<NormSpec>& norms, const std::vector<NormSpec>& rnorms, double nu) {
  NuRow row;
  row.nu = nu;
  try {
    const auto times = cfg.eval_times();
    NsConfig nc = cfg.ns;
    nc.output_times = times;
    const auto sol = solve_ns(cfg.geometry, flow.profile.value, nu, nc);
    const auto bundle = assemble_ansatz(flow, profile, cfg.geometry, nu, sol.grid, times);
    const auto rem = extract_remainder(sol, bundle, profile, rnorms);
    const auto fields = viscous_fields(sol);
    for (std::size_t k = 0; k < times.size(); ++k) {
      const auto& u = fields[sol.time_index(times[k])];
      const auto& u0 = bundle.u0[k];
      VolumeField e(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) {
        e.normal[i] = u.normal[i] - u0.normal[i];
        e.tang1[i] = u.tang1[i] - u0.tang1[i];
        e.tang2[i] = u.tang2[i] - u0.tang2[i];
      }
      for (const auto& s : norms)
        row.errors.push_back({nu, times[k], s.text, volume_norm(cfg.geometry, sol.grid, e, s)});
    }
    for (const auto& r : rem.norms) row.remainder.push_back({nu, r.t, r.norm, r.part, r.value});
    row.interpolation_estimate = rem.interpolation_estimate;
    row.interpolation_flag = rem.interpolation_flag;
    row.regime_warning = bundle.regime_warning;
    row.ok = true;
  } catch (const std::exception& e) {
    row.ok = false;
    row.message = e.what();
  }
  return row;
}

double sup_over_t(const std::vector<ErrorRow>& rows, double nu, const std::string& norm) {
  double m = 0.0;
  for (const auto& r : rows)
    if (r.nu == nu && r.norm == norm) m = std::max(m, r.value);
  return m;
}

double sup_remainder(const std::vector<RemainderRow>& rows, double nu, const std::string& norm) {
  double m = 0.0;
  for (const auto& r : rows)
    if (r.nu == nu && r.norm == norm && r.part == "full") m = std::max(m, r.value);
  return m;
}

RateEntry rate_entry(const NormSpec& which, const std::vector<ErrorRow>& errors,
                     const std::vector<double>& nus) {
  RateEntry e;
  e.norm = which.text;
  e.theory = theory_slope(which);
  e.comparison = comparison_slope(which);
  for (double nu : nus) e.rows.emplace_back(nu, sup_over_t(errors, nu, which.text));
  e.exact_regime = std::all_of(e.rows.begin(), e.rows.end(),
                               [](const auto& r) { return r.second < kExactLevel; });
  if (e.exact_regime) {
    e.pass = true;
    e.status = "exact regime, no fit";
    return e;
  }
  for (std::size_t i = 1; i < e.rows.size(); ++i)
    if (e.rows[i].second > 1.05 * e.rows[i - 1].second) e.monotone = false;
  try {
    e.fit = fit_rate(e.rows);
  } catch (const Error& ex) {
    e.pass = false;
    e.status = std::string("fit failed: ") + ex.what();
    return e;
  }
  const double slope = e.fit->slope;
  e.superconvergent = slope > e.theory + 0.15;
  e.pass = std::isfinite(slope) && slope >= e.theory - 0.05 && e.monotone;
  if (!e.monotone)
    e.status = "errors not monotone in nu";
  else if (!e.pass)
    e.status = "slope below expected exponent";
  else
    e.status = e.superconvergent ? "pass (superconvergent)" : "pass";
  return e;
}

RemainderCheck remainder_check(const std::vector<RemainderRow>& rows, const std::vector<double>& nus) {
  RemainderCheck c;
  double rmax = 0.0;
  for (const auto& r : rows)
    if (r.part == "full") rmax = std::max(rmax, r.value);
  for (double nu : nus) {
    c.lp4.emplace_back(nu, sup_remainder(rows, nu, "lp:4"));
    c.h1_scaled.emplace_back(nu, std::sqrt(nu) * sup_remainder(rows, nu, "h1"));
  }
  if (rmax < kRemainderExactLevel) {
    c.exact_regime = true;
    c.pass = true;
    return c;
  }
  double lo = kInf, hi = 0.0;
  for (const auto& [nu, v] : c.lp4) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  c.lp4_ratio = lo > 0.0 ? hi / lo : kInf;
  c.lp4_monotone_growth = c.lp4.size() >= 2;
  for (std::size_t i = 1; i < c.lp4.size(); ++i)
    if (!(c.lp4[i].second > c.lp4[i - 1].second)) c.lp4_monotone_growth = false;
  // same 5% slack as the monotone error check
  if (c.lp4.back().second <= 1.05 * c.lp4.front().second) c.lp4_monotone_growth = false;
  const double ref = c.h1_scaled.front().second;
  double worst = 0.0;
  for (const auto& [nu, v] : c.h1_scaled) worst = std::max(worst, v);
  c.h1_scaled_ratio = ref > 0.0 ? worst / ref : kInf;
  c.pass = c.lp4_ratio < 2.0 && !c.lp4_monotone_growth && c.h1_scaled_ratio <= 2.0;
  return c;
}

}  // namespace

RateReport run_convergence_study(const StudyConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  validate_study_config(cfg);
  RateReport rep;
  rep.config = cfg;

  std::vector<NormSpec> norms;
  for (const auto& n : cfg.norms) {
    NormSpec s = parse_norm(n);
    if (s.kind == NormSpec::Kind::Aniso)
      throw ConfigError("anisotropic norms belong to the layer monitor, not the study");
    norms.push_back(s);
  }
  const auto rnorms = remainder_norms(norms);

  const BaseFlow flow = make_base_flow(cfg.euler, cfg.geometry);
  if (!flow.profile.value) throw ConfigError("study needs a swirl or shear base flow");

  // the layer problem does not depend on nu: solve it once
  LayerConfig lc = cfg.layer;
  lc.output_times = cfg.eval_times();
  lc.jobs = cfg.jobs;
  const LayerProfile profile = solve_layer(flow, cfg.geometry, lc);
  for (const auto& wl : profile.walls)
    for (const auto& f : wl.ub) rep.layer_max_abs = std::max(rep.layer_max_abs, kernels::max_abs(f.values));

  std::vector<NuRow> rows(cfg.nu_list.size());
  const std::size_t jobs = static_cast<std::size_t>(std::max(1, cfg.jobs));
  for (std::size_t first = 0; first < rows.size(); first += jobs) {
    std::vector<std::future<NuRow>> batch;
    for (std::size_t i = first; i < std::min(rows.size(), first + jobs); ++i)
      batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred, run_row,
                                 std::cref(cfg), std::cref(flow), std::cref(profile), std::cref(norms),
                                 std::cref(rnorms), cfg.nu_list[i]));
    for (std::size_t i = 0; i < batch.size(); ++i) rows[first + i] = batch[i].get();
  }
  std::sort(rows.begin(), rows.end(), [](const NuRow& a, const NuRow& b) { return a.nu > b.nu; });

  std::vector<double> nus;
  for (const auto& r : rows) {
    if (!r.ok) {
      rep.failures.push_back({r.nu, r.message});
      continue;
    }
    nus.push_back(r.nu);
    rep.errors.insert(rep.errors.end(), r.errors.begin(), r.errors.end());
    rep.remainder.insert(rep.remainder.end(), r.remainder.begin(), r.remainder.end());
    rep.interpolation_estimate = std::max(rep.interpolation_estimate, r.interpolation_estimate);
    rep.interpolation_flag = rep.interpolation_flag || r.interpolation_flag;
    rep.regime_warning = rep.regime_warning || r.regime_warning;
  }

  if (nus.size() < 3) {
    rep.passed = false;
    rep.failure_reason = "fewer than 3 nu rows survived";
  } else {
    for (const auto& s : norms) rep.rates.push_back(rate_entry(s, rep.errors, nus));
    rep.remainder_check = remainder_check(rep.remainder, nus);
    rep.passed = rep.remainder_check.pass &&
                 std::all_of(rep.rates.begin(), rep.rates.end(), [](const RateEntry& e) { return e.pass; });
    if (!rep.passed) rep.failure_reason = "rate or remainder check failed";
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

using nlohmann::ordered_json;

ordered_json pairs_json(const std::vector<std::pair<double, double>>& rows) {
  ordered_json a = ordered_json::array();
  for (const auto& [x, y] : rows) a.push_back({x, y});
  return a;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw Error("cannot write " + p.string());
  os << text;
  if (!os) throw Error("cannot write " + p.string());
}

}  // namespace

std::string errors_csv(const RateReport& rep) {
  std::string s = "nu,t,norm,value\n";
  for (const auto& r : rep.errors) s += num(r.nu) + "," + num(r.t) + "," + r.norm + "," + num(r.value) + "\n";
  return s;
}

std::string remainder_csv(const RateReport& rep) {
  std::string s = "nu,t,norm,value,part\n";
  for (const auto& r : rep.remainder)
    s += num(r.nu) + "," + num(r.t) + "," + r.norm + "," + num(r.value) + "," + r.part + "\n";
  return s;
}

std::string rates_json(const RateReport& rep) {
  ordered_json j;
  j["study"] = rep.config.name;
  j["passed"] = rep.passed;
  if (!rep.failure_reason.empty()) j["failure_reason"] = rep.failure_reason;
  ordered_json norms = ordered_json::array();
  for (const auto& e : rep.rates) {
    ordered_json n;
    n["norm"] = e.norm;
    n["theory"] = e.theory;
    if (e.comparison) n["comparison"] = *e.comparison;
    if (e.fit) {
      n["slope"] = e.fit->slope;
      n["intercept"] = e.fit->intercept;
      n["r2"] = e.fit->r2;
      n["margin"] = e.fit->slope - (e.theory - 0.05);
      n["warnings"] = e.fit->warnings;
    }
    n["rows"] = pairs_json(e.rows);
    n["exact_regime"] = e.exact_regime;
    n["monotone"] = e.monotone;
    n["superconvergent"] = e.superconvergent;
    n["pass"] = e.pass;
    n["status"] = e.status;
    norms.push_back(n);
  }
  j["norms"] = norms;
  const auto& c = rep.remainder_check;
  ordered_json rc;
  rc["lp4"] = pairs_json(c.lp4);
  rc["lp4_ratio"] = std::isfinite(c.lp4_ratio) ? ordered_json(c.lp4_ratio) : ordered_json("inf");
  rc["lp4_monotone_growth"] = c.lp4_monotone_growth;
  rc["h1_scaled"] = pairs_json(c.h1_scaled);
  rc["h1_scaled_ratio"] = std::isfinite(c.h1_scaled_ratio) ? ordered_json(c.h1_scaled_ratio) : ordered_json("inf");
  rc["exact_regime"] = c.exact_regime;
  rc["pass"] = c.pass;
  j["remainder"] = rc;
  ordered_json fails = ordered_json::array();
  for (const auto& f : rep.failures) fails.push_back({{"nu", f.nu}, {"message", f.message}});
  j["failures"] = fails;
  j["layer_max_abs"] = rep.layer_max_abs;
  j["interpolation_estimate"] = rep.interpolation_estimate;
  j["interpolation_flag"] = rep.interpolation_flag;
  j["regime_warning"] = rep.regime_warning;
  return j.dump(2) + "\n";
}

std::string run_meta_json(const RateReport& rep) {
  ordered_json j;
  j["config"] = to_ini(rep.config);
  j["navslip_version"] = "1.0.0";
  j["compiler"] = __VERSION__;
  j["kernel_backend"] = std::string(kernels::backend_name(kernels::active_backend()));
  j["jobs"] = rep.config.jobs;
  j["wall_seconds"] = rep.wall_seconds;
  return j.dump(2) + "\n";
}

void export_report(const RateReport& rep, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir + "': " + ec.message());
  const std::filesystem::path d(dir);
  write_file(d / "errors.csv", errors_csv(rep));
  write_file(d / "remainder.csv", remainder_csv(rep));
  write_file(d / "rates.json", rates_json(rep));
  write_file(d / "run_meta.json", run_meta_json(rep));
}

}  // namespace navslip
