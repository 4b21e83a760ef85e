#include "navslip/fit.hpp"

#include <cmath>

#include "navslip/error.hpp"

namespace navslip {

RateFit fit_rate(const std::vector<std::pair<double, double>>& nu_error) {
  RateFit fit;
  bool all_tiny = !nu_error.empty();
  for (const auto& [nu, err] : nu_error) {
    if (!(nu > 0.0)) throw ConfigError("fit_rate: nu must be positive");
    if (!(std::fabs(err) < 1e-14)) all_tiny = false;
  }
  if (all_tiny) throw Error("fit_rate: degenerate fit, every error is below 1e-14");

  // Logs are taken relative to the first usable error so that rescaling all
  // errors by a power of two leaves the slope bit-identical.
  double ref = 0.0;
  for (const auto& row : nu_error)
    if (row.second > 0.0) {
      ref = row.second;
      break;
    }
  std::vector<double> xs, ys;
  for (const auto& [nu, err] : nu_error) {
    if (!(err > 0.0)) {
      fit.warnings.push_back("dropped row nu=" + std::to_string(nu) + " with non-positive error");
      continue;
    }
    xs.push_back(std::log(nu));
    ys.push_back(std::log(err / ref));
  }
  if (xs.size() < 3) throw Error("fit_rate: fewer than 3 usable rows");

  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw Error("fit_rate: all nu values coincide");
  fit.slope = sxy / sxx;
  const double rel_intercept = my - fit.slope * mx;
  fit.intercept = rel_intercept + std::log(ref);
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (rel_intercept + fit.slope * xs[i]);
    ss_res += r * r;
  }
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.rows_used = xs.size();
  return fit;
}

}  // namespace navslip
