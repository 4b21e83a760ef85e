#pragma once

// Convergence-study driver: sweeps nu, measures sup_t ||u^nu - u0|| and the
// remainder norms, fits log-log slopes and compares them with the expected
// exponents.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "navslip/config.hpp"
#include "navslip/expansion.hpp"
#include "navslip/fit.hpp"

namespace navslip {

struct ErrorRow {
  double nu = 0.0, t = 0.0;
  std::string norm;
  double value = 0.0;
};

struct RemainderRow {
  double nu = 0.0, t = 0.0;
  std::string norm, part;
  double value = 0.0;
};

struct RateEntry {
  std::string norm;
  double theory = 0.0;
  std::optional<double> comparison;  // weaker interpolation-based exponent for L^p
  std::vector<std::pair<double, double>> rows;  // (nu, sup_t error), nu decreasing
  std::optional<RateFit> fit;
  bool exact_regime = false;
  bool monotone = true;
  bool superconvergent = false;
  bool pass = false;
  std::string status;
};

struct RemainderCheck {
  std::vector<std::pair<double, double>> lp4;        // (nu, sup_t ||R||_4)
  std::vector<std::pair<double, double>> h1_scaled;  // (nu, sqrt(nu) sup_t ||R||_{1,2})
  double lp4_ratio = 0.0;
  bool lp4_monotone_growth = false;
  double h1_scaled_ratio = 0.0;
  bool exact_regime = false;
  bool pass = false;
};

struct NuFailure {
  double nu = 0.0;
  std::string message;
};

struct RateReport {
  StudyConfig config;
  std::vector<ErrorRow> errors;
  std::vector<RemainderRow> remainder;
  std::vector<RateEntry> rates;
  RemainderCheck remainder_check;
  std::vector<NuFailure> failures;
  double layer_max_abs = 0.0;        // max |u^b| over walls, times and nodes
  double interpolation_estimate = 0.0;
  bool interpolation_flag = false;
  bool regime_warning = false;
  bool passed = false;
  std::string failure_reason;
  double wall_seconds = 0.0;
};

/// Expected exponent of sup_t ||u^nu - u0|| for a norm string (l2, h1, linf, lp:p).
double theory_slope(const NormSpec& which);
/// Weaker exponent from the interpolation argument (L^p only).
std::optional<double> comparison_slope(const NormSpec& which);

RateReport run_convergence_study(const StudyConfig& cfg);

/// Writes errors.csv, remainder.csv, rates.json and run_meta.json into dir.
/// Throws Error when the directory cannot be created or written.
void export_report(const RateReport& report, const std::string& dir);

std::string errors_csv(const RateReport& report);
std::string remainder_csv(const RateReport& report);
std::string rates_json(const RateReport& report);
std::string run_meta_json(const RateReport& report);

}  // namespace navslip
