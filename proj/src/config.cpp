#include "navslip/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "navslip/error.hpp"

namespace navslip {

namespace pt = boost::property_tree;

std::vector<double> StudyConfig::eval_times() const {
  if (!t_eval.empty()) return t_eval;
  std::vector<double> t;
  const double T = ns.t_end;
  for (int k = 1; k <= 8; ++k) t.push_back(T * k / 8.0);
  return t;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, ',')) {
    const auto b = cur.find_first_not_of(" \t");
    const auto e = cur.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(cur.substr(b, e - b + 1));
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("not a number: '" + item + "'");
    }
  }
  return out;
}

std::vector<std::string> preset_names() { return {"rigid-annulus", "vortex-annulus", "flat-shear"}; }

StudyConfig preset_config(const std::string& name) {
  StudyConfig c;
  c.name = name;
  c.geometry = GeometryDescriptor::annulus(1.0, 2.0, 0.45);
  c.layer.nz = 512;
  c.layer.dt = 1e-4;
  c.layer.t_end = 0.5;
  c.ns.n = 2048;
  c.ns.dt = 1e-4;
  c.ns.t_end = 0.5;
  if (name == "rigid-annulus") {
    c.euler.family = "rigid";
    c.euler.omega = 1.0;
  } else if (name == "vortex-annulus") {
    c.euler.family = "vortex";
    c.euler.circulation = 1.0;
  } else if (name == "flat-shear") {
    c.geometry = GeometryDescriptor::channel(1.0, 0.45);
    c.euler.family = "shear_poly:0,0,3,-2";
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return c;
}

namespace {

double to_double(const std::string& key, const std::string& v) {
  const auto xs = parse_double_list(v);
  if (xs.size() != 1) throw ConfigError(key + ": expected one number");
  return xs[0];
}

int to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != std::floor(d) || std::fabs(d) > 1e9) throw ConfigError(key + ": expected an integer");
  return static_cast<int>(d);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected a boolean");
}

CouplingMode to_mode(const std::string& v) {
  if (v == "cross") return CouplingMode::Cross;
  if (v == "projection") return CouplingMode::Projection;
  throw ConfigError("layer.mode must be cross or projection");
}

using Setter = void (*)(StudyConfig&, const std::string& key, const std::string& value);

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> m = {
      {"study.name", [](StudyConfig& c, const std::string&, const std::string& v) { c.name = v; }},
      {"geometry.kind",
       [](StudyConfig& c, const std::string&, const std::string& v) {
         try {
           c.geometry.kind = geometry_kind_from_string(v);
         } catch (const Error& e) {
           throw ConfigError(e.what());
         }
       }},
      {"geometry.h", [](StudyConfig& c, const std::string& k, const std::string& v) { c.geometry.h = to_double(k, v); }},
      {"geometry.r1", [](StudyConfig& c, const std::string& k, const std::string& v) { c.geometry.r1 = to_double(k, v); }},
      {"geometry.r2", [](StudyConfig& c, const std::string& k, const std::string& v) { c.geometry.r2 = to_double(k, v); }},
      {"geometry.eta", [](StudyConfig& c, const std::string& k, const std::string& v) { c.geometry.eta = to_double(k, v); }},
      {"geometry.collar_ratio",
       [](StudyConfig& c, const std::string& k, const std::string& v) { c.geometry.collar_ratio = to_double(k, v); }},
      {"geometry.collar_points",
       [](StudyConfig& c, const std::string& k, const std::string& v) { c.collar_points = to_int(k, v); }},
      {"euler.family", [](StudyConfig& c, const std::string&, const std::string& v) { c.euler.family = v; }},
      {"euler.omega", [](StudyConfig& c, const std::string& k, const std::string& v) { c.euler.omega = to_double(k, v); }},
      {"euler.circulation",
       [](StudyConfig& c, const std::string& k, const std::string& v) { c.euler.circulation = to_double(k, v); }},
      {"euler.lambda", [](StudyConfig& c, const std::string& k, const std::string& v) { c.euler.lambda = to_double(k, v); }},
      {"layer.nz", [](StudyConfig& c, const std::string& k, const std::string& v) { c.layer.nz = to_int(k, v); }},
      {"layer.zmax",
       [](StudyConfig& c, const std::string& k, const std::string& v) {
         c.layer.zmax = v == "auto" ? FastGrid::kAutoZmax : to_double(k, v);
       }},
      {"layer.zmax_auto",
       [](StudyConfig& c, const std::string& k, const std::string& v) {
         if (to_bool(k, v)) c.layer.zmax = FastGrid::kAutoZmax;
       }},
      {"layer.map_length",
       [](StudyConfig& c, const std::string& k, const std::string& v) { c.layer.map_length = to_double(k, v); }},
      {"layer.dt", [](StudyConfig& c, const std::string& k, const std::string& v) { c.layer.dt = to_double(k, v); }},
      {"layer.t_end", [](StudyConfig& c, const std::string& k, const std::string& v) { c.layer.t_end = to_double(k, v); }},
      {"layer.store_every",
       [](StudyConfig& c, const std::string& k, const std::string& v) { c.layer.store_every = to_int(k, v); }},
      {"layer.mode", [](StudyConfig& c, const std::string&, const std::string& v) { c.layer.mode = to_mode(v); }},
      {"layer.startup_smoothing",
       [](StudyConfig& c, const std::string& k, const std::string& v) { c.layer.startup_smoothing = to_bool(k, v); }},
      {"ns.nr", [](StudyConfig& c, const std::string& k, const std::string& v) { c.ns.n = to_int(k, v); }},
      {"ns.ny", [](StudyConfig& c, const std::string& k, const std::string& v) { c.ns.n = to_int(k, v); }},
      {"ns.dt", [](StudyConfig& c, const std::string& k, const std::string& v) { c.ns.dt = to_double(k, v); }},
      {"ns.t_end", [](StudyConfig& c, const std::string& k, const std::string& v) { c.ns.t_end = to_double(k, v); }},
      {"ns.store_every",
       [](StudyConfig& c, const std::string& k, const std::string& v) { c.ns.store_every = to_int(k, v); }},
      {"ns.stretch", [](StudyConfig& c, const std::string& k, const std::string& v) { c.ns.stretch = to_double(k, v); }},
      {"ns.startup_smoothing",
       [](StudyConfig& c, const std::string& k, const std::string& v) { c.ns.startup_smoothing = to_bool(k, v); }},
      {"study.nu_list",
       [](StudyConfig& c, const std::string&, const std::string& v) { c.nu_list = parse_double_list(v); }},
      {"study.norms", [](StudyConfig& c, const std::string&, const std::string& v) { c.norms = split_list(v); }},
      {"study.t_eval",
       [](StudyConfig& c, const std::string&, const std::string& v) { c.t_eval = parse_double_list(v); }},
      {"study.output_dir", [](StudyConfig& c, const std::string&, const std::string& v) { c.output_dir = v; }},
      {"study.jobs", [](StudyConfig& c, const std::string& k, const std::string& v) { c.jobs = to_int(k, v); }},
  };
  return m;
}

}  // namespace

StudyConfig parse_config(std::istream& in, const StudyConfig& base) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  StudyConfig c = base;
  // a preset line seeds everything else
  if (auto p = tree.get_optional<std::string>("study.preset")) c = preset_config(*p);
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError("config key '" + section + "' must live inside a section");
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      if (full == "study.preset") continue;
      const auto it = setters().find(full);
      if (it == setters().end()) throw ConfigError("unknown config key '" + full + "'");
      it->second(c, full, value.data());
    }
  }
  return c;
}

StudyConfig load_config(const std::string& path, const StudyConfig& base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, base);
}

void validate_study_config(const StudyConfig& c) {
  c.geometry.validate();
  if (c.collar_points < 4) throw ConfigError("geometry.collar_points must be at least 4");
  if (c.nu_list.size() < 3) throw ConfigError("study.nu_list needs at least 3 values");
  for (std::size_t i = 0; i < c.nu_list.size(); ++i) {
    if (!(c.nu_list[i] > 0.0)) throw ConfigError("study.nu_list values must be positive");
    if (i > 0 && !(c.nu_list[i] < c.nu_list[i - 1]))
      throw ConfigError("study.nu_list must be strictly decreasing");
  }
  if (c.nu_list.front() / c.nu_list.back() < 100.0 * (1.0 - 1e-12))
    throw ConfigError("study.nu_list must span at least two decades");
  const double cap = 0.0625 * c.geometry.eta * c.geometry.eta;
  if (c.nu_list.front() > cap * (1.0 + 1e-12))
    throw ConfigError("largest nu must not exceed (eta/4)^2");
  for (const auto& n : c.norms) parse_norm(n);
  if (c.jobs < 1) throw ConfigError("study.jobs must be at least 1");
  if (!(c.ns.dt > 0.0) || !(c.layer.dt > 0.0)) throw ConfigError("time steps must be positive");
  if (c.ns.n < 32) throw ConfigError("ns.nr/ny must be at least 32");
  if (c.layer.nz < 8) throw ConfigError("layer.nz must be at least 8");
  const auto t = c.eval_times();
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0)) throw ConfigError("study.t_eval must be positive (t = 0 is excluded)");
    if (i > 0 && !(t[i] > t[i - 1])) throw ConfigError("study.t_eval must be increasing");
  }
  if (t.empty()) throw ConfigError("study.t_eval is empty");
  if (t.back() > c.ns.t_end * (1.0 + 1e-12) || t.back() > c.layer.t_end * (1.0 + 1e-12))
    throw ConfigError("study.t_eval extends past ns.t_end or layer.t_end");
  auto on_grid = [](double x, double dt) {
    const double k = std::round(x / dt);
    return std::fabs(k * dt - x) <= 1e-9 * std::max(1.0, x);
  };
  for (double x : t)
    if (!on_grid(x, c.ns.dt) || !on_grid(x, c.layer.dt))
      throw ConfigError("study.t_eval value " + std::to_string(x) + " is not a multiple of ns.dt and layer.dt");
  make_base_flow(c.euler, c.geometry);  // rejects unknown families
}

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + num(xs[i]);
  return s;
}

}  // namespace

std::string to_ini(const StudyConfig& c) {
  std::ostringstream os;
  os << "[study]\nname=" << c.name << "\nnu_list=" << join(c.nu_list) << "\nnorms=";
  for (std::size_t i = 0; i < c.norms.size(); ++i) os << (i ? "," : "") << c.norms[i];
  os << "\nt_eval=" << join(c.eval_times()) << "\noutput_dir=" << c.output_dir << "\njobs=" << c.jobs << "\n";
  os << "\n[geometry]\nkind=" << to_string(c.geometry.kind) << "\nh=" << num(c.geometry.h)
     << "\nr1=" << num(c.geometry.r1) << "\nr2=" << num(c.geometry.r2) << "\neta=" << num(c.geometry.eta)
     << "\ncollar_ratio=" << num(c.geometry.collar_ratio) << "\ncollar_points=" << c.collar_points << "\n";
  os << "\n[euler]\nfamily=" << c.euler.family << "\nomega=" << num(c.euler.omega)
     << "\ncirculation=" << num(c.euler.circulation) << "\nlambda=" << num(c.euler.lambda) << "\n";
  os << "\n[layer]\nnz=" << c.layer.nz << "\nzmax=" << num(c.layer.zmax) << "\nmap_length=" << num(c.layer.map_length)
     << "\ndt=" << num(c.layer.dt) << "\nt_end=" << num(c.layer.t_end) << "\nstore_every=" << c.layer.store_every
     << "\nmode=" << (c.layer.mode == CouplingMode::Cross ? "cross" : "projection")
     << "\nstartup_smoothing=" << (c.layer.startup_smoothing ? "true" : "false") << "\n";
  os << "\n[ns]\n" << (c.geometry.kind == GeometryKind::AnnulusGap ? "nr=" : "ny=") << c.ns.n
     << "\ndt=" << num(c.ns.dt) << "\nt_end=" << num(c.ns.t_end) << "\nstore_every=" << c.ns.store_every
     << "\nstretch=" << num(c.ns.stretch) << "\nstartup_smoothing=" << (c.ns.startup_smoothing ? "true" : "false")
     << "\n";
  return os.str();
}

}  // namespace navslip
