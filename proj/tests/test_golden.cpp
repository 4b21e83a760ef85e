/// Byte comparison of the rigid-rotation study reports against blessed copies.
/// The scalar backend is forced so the bytes do not depend on the CPU. Set
/// NAVSLIP_BLESS=1 to rewrite the golden files.

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "navslip/kernels.hpp"
#include "navslip/study.hpp"

using namespace navslip;

namespace {

const std::filesystem::path kGolden = NAVSLIP_GOLDEN_DIR;

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Reports {
  std::string errors, remainder, rates;
};

Reports run(kernels::Backend b, int jobs) {
  kernels::force_backend(b);
  auto cfg = preset_config("rigid-annulus");
  cfg.jobs = jobs;
  const auto rep = run_convergence_study(cfg);
  kernels::force_backend(kernels::avx2_available() ? kernels::Backend::Avx2 : kernels::Backend::Scalar);
  return {errors_csv(rep), remainder_csv(rep), rates_json(rep)};
}

/// Last CSV column of every data row.
std::vector<double> values(const std::string& csv, int column) {
  std::vector<double> out;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string cell;
    for (int c = 0; c <= column; ++c) std::getline(ls, cell, ',');
    out.push_back(std::stod(cell));
  }
  return out;
}

}  // namespace

TEST_CASE("rigid-annulus reports match the golden files") {
  const Reports r = run(kernels::Backend::Scalar, 4);
  const auto dir = kGolden / "rigid-annulus";
  if (const char* b = std::getenv("NAVSLIP_BLESS"); b && std::string(b) == "1") {
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "errors.csv", std::ios::binary) << r.errors;
    std::ofstream(dir / "remainder.csv", std::ios::binary) << r.remainder;
    std::ofstream(dir / "rates.json", std::ios::binary) << r.rates;
    MESSAGE("golden files rewritten in " << dir.string());
  }
  CHECK(r.errors == slurp(dir / "errors.csv"));
  CHECK(r.remainder == slurp(dir / "remainder.csv"));
  CHECK(r.rates == slurp(dir / "rates.json"));
}

TEST_CASE("the AVX2 backend reproduces the golden values to rounding") {
  if (!kernels::avx2_available()) return;
  const Reports r = run(kernels::Backend::Avx2, 2);
  const auto dir = kGolden / "rigid-annulus";
  const auto a = values(r.errors, 3), g = values(slurp(dir / "errors.csv"), 3);
  REQUIRE(a.size() == g.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::fabs(a[i] - g[i]) <= 1e-12 * std::fabs(g[i]));
  const auto ra = values(r.remainder, 3), rg = values(slurp(dir / "remainder.csv"), 3);
  REQUIRE(ra.size() == rg.size());
  for (std::size_t i = 0; i < ra.size(); ++i) CHECK(std::fabs(ra[i] - rg[i]) <= 1e-12 * std::fabs(rg[i]) + 1e-300);
}
