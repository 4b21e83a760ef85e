#pragma once

#include <string>
#include <utility>
#include <vector>

namespace navslip {

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;
  std::size_t rows_used = 0;
  std::vector<std::string> warnings;
};

/// Ordinary least squares of log(error) against log(nu). Rows with a
/// non-positive error are dropped with a warning. Throws Error when fewer
/// than three rows survive or when every error is below 1e-14.
RateFit fit_rate(const std::vector<std::pair<double, double>>& nu_error);

}  // namespace navslip
