#include <doctest.h>

#include <sstream>

#include "navslip/error.hpp"
#include "navslip/snapshot_io.hpp"

using namespace navslip;

namespace {

std::vector<SnapshotBlock> read(const std::string& text) {
  std::istringstream in(text);
  return read_snapshots(in);
}

}  // namespace

TEST_CASE("blocks open on wall labels and take their columns from the header") {
  const auto b = read("# wall=lower\n# t s z u\n0 0 0 1.5\n\n0.1 0 0.5 -2e-3\n# wall=upper\n# t z\n1 2\n");
  REQUIRE(b.size() == 2);
  CHECK(b[0].label == "lower");
  CHECK(b[0].columns == std::vector<std::string>{"t", "s", "z", "u"});
  REQUIRE(b[0].rows.size() == 2);
  CHECK(b[0].rows[1][3] == -2e-3);
  CHECK(b[1].label == "upper");
  CHECK(b[1].rows[0] == std::vector<double>{1.0, 2.0});
}

TEST_CASE("unlabelled text forms a single block and free comments are skipped") {
  const auto b = read("# nu=0.001 scheme=crank-nicolson\n# t s z u\n0 0 1 2\n# note\n0 0 2 3\n");
  REQUIRE(b.size() == 1);
  CHECK(b[0].label.empty());
  CHECK(b[0].rows.size() == 2);
  CHECK(read("").empty());
}

TEST_CASE("malformed rows are reported") {
  CHECK_THROWS_AS(read("# t s\n1 x\n"), Error);
  CHECK_THROWS_AS(read("# t s\n1 2x\n"), Error);
  CHECK_THROWS_AS(read("# t s\n1 2 3\n"), Error);
}
