#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "navslip/error.hpp"
#include "navslip/study.hpp"

using namespace navslip;

namespace {

/// Coarse variant of a preset so a full sweep runs in well under a second.
StudyConfig small(const std::string& preset) {
  auto c = preset_config(preset);
  c.layer.nz = 256;
  c.layer.dt = 5e-4;
  c.ns.n = 768;
  c.ns.dt = 5e-4;
  c.nu_list = {1e-2, 1e-3, 1e-4};
  c.t_eval = {0.25, 0.5};
  return c;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("expected exponents") {
  CHECK(theory_slope(parse_norm("l2")) == 0.75);
  CHECK(theory_slope(parse_norm("linf")) == 0.5);
  CHECK(theory_slope(parse_norm("h1")) == 0.25);
  CHECK(theory_slope(parse_norm("lp:4")) == 0.625);
  CHECK_FALSE(comparison_slope(parse_norm("l2")).has_value());
  CHECK(*comparison_slope(parse_norm("lp:4")) == doctest::Approx(0.525));
  CHECK_THROWS_AS(theory_slope(parse_norm("aniso:0,0,0,2")), ConfigError);
}

TEST_CASE("rigid rotation rates land near their exponents") {
  const auto rep = run_convergence_study(small("rigid-annulus"));
  CHECK(rep.failures.empty());
  REQUIRE(rep.rates.size() == 4);
  for (const auto& e : rep.rates) {
    CAPTURE(e.norm);
    REQUIRE(e.fit.has_value());
    CHECK(std::fabs(e.fit->slope - e.theory) < 0.1);
    CHECK_FALSE(e.exact_regime);
    CHECK(e.rows.size() == 3);
    CHECK(e.rows.front().first > e.rows.back().first);
  }
  CHECK(rep.remainder_check.lp4.size() == 3);
  CHECK(rep.layer_max_abs > 0.0);
}

TEST_CASE("outputs do not depend on the number of workers") {
  auto c = small("rigid-annulus");
  c.jobs = 1;
  const auto a = run_convergence_study(c);
  c.jobs = 3;
  const auto b = run_convergence_study(c);
  CHECK(errors_csv(a) == errors_csv(b));
  CHECK(remainder_csv(a) == remainder_csv(b));
  CHECK(rates_json(a) == rates_json(b));
}

TEST_CASE("norm list edge cases") {
  auto c = small("vortex-annulus");
  c.norms = {};
  const auto none = run_convergence_study(c);
  CHECK(none.rates.empty());
  CHECK(count_lines(errors_csv(none)) == 1);
  c.norms = {"linf"};
  const auto one = run_convergence_study(c);
  REQUIRE(one.rates.size() == 1);
  CHECK(one.rates[0].norm == "linf");
  c.norms = {"aniso:1,0,0,2"};
  CHECK_THROWS_AS(run_convergence_study(c), ConfigError);
}

TEST_CASE("potential vortex is reported as the exact regime") {
  const auto rep = run_convergence_study(small("vortex-annulus"));
  CHECK(rep.passed);
  for (const auto& e : rep.rates) {
    CHECK(e.exact_regime);
    CHECK(e.pass);
  }
  CHECK(rep.remainder_check.exact_regime);
  CHECK(rep.layer_max_abs == 0.0);
}

TEST_CASE("export writes the four artefacts and rejects bad directories") {
  const auto rep = run_convergence_study(small("vortex-annulus"));
  const auto dir = std::filesystem::temp_directory_path() / "navslip_study_export";
  std::filesystem::remove_all(dir);
  export_report(rep, dir.string());
  for (const char* f : {"errors.csv", "remainder.csv", "rates.json", "run_meta.json"})
    CHECK(std::filesystem::exists(dir / f));
  std::ifstream in(dir / "errors.csv");
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == errors_csv(rep));
  std::ofstream(dir / "blocker") << "x";
  CHECK_THROWS_AS(export_report(rep, (dir / "blocker" / "sub").string()), Error);
  std::filesystem::remove_all(dir);
}
