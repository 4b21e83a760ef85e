#pragma once

// Study configuration: INI files with [geometry], [euler], [layer], [ns] and
// [study] sections, plus the built-in presets.

#include <iosfwd>
#include <string>
#include <vector>

#include "navslip/euler.hpp"
#include "navslip/layer.hpp"
#include "navslip/ns.hpp"

namespace navslip {

struct StudyConfig {
  std::string name = "rigid-annulus";
  GeometryDescriptor geometry;
  int collar_points = 200;
  EulerFamily euler;
  LayerConfig layer;
  NsConfig ns;
  std::vector<double> nu_list{1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
  std::vector<std::string> norms{"l2", "h1", "linf", "lp:4"};
  std::vector<double> t_eval;  // empty: T k / 8 for k = 1..8
  std::string output_dir = "out";
  int jobs = 1;

  /// Evaluation times actually used (t_eval or the default stencil).
  std::vector<double> eval_times() const;
};

std::vector<std::string> preset_names();
/// Throws ConfigError on an unknown name.
StudyConfig preset_config(const std::string& name);

/// Reads an INI file. Keys left out keep the value of `base`; unknown
/// sections or keys are a ConfigError.
StudyConfig load_config(const std::string& path, const StudyConfig& base = StudyConfig{});
StudyConfig parse_config(std::istream& in, const StudyConfig& base = StudyConfig{});

/// Throws ConfigError when the configuration cannot define a study.
void validate_study_config(const StudyConfig& cfg);

/// Canonical INI text of the configuration (round-trips through parse_config).
std::string to_ini(const StudyConfig& cfg);

/// Splits "a, b ,c" into trimmed items; empty input gives no items.
std::vector<std::string> split_list(const std::string& s);
std::vector<double> parse_double_list(const std::string& s);

}  // namespace navslip
