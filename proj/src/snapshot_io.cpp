#include "navslip/snapshot_io.hpp"

#include <istream>
#include <sstream>

#include "navslip/error.hpp"

namespace navslip {

std::vector<SnapshotBlock> read_snapshots(std::istream& in) {
  std::vector<SnapshotBlock> blocks;
  std::string line;
  std::size_t lineno = 0;
  auto current = [&]() -> SnapshotBlock& {
    if (blocks.empty()) blocks.emplace_back();
    return blocks.back();
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream is(line.substr(1));
      std::string first;
      is >> first;
      if (first.rfind("wall=", 0) == 0) {
        blocks.emplace_back();
        blocks.back().label = first.substr(5);
      } else if (first == "t") {
        auto& b = current();
        b.columns = {"t"};
        for (std::string c; is >> c;) b.columns.push_back(c);
      }
      continue;
    }
    auto& b = current();
    std::istringstream is(line);
    std::vector<double> row;
    for (std::string tok; is >> tok;) {
      try {
        std::size_t pos = 0;
        row.push_back(std::stod(tok, &pos));
        if (pos != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw Error("snapshot line " + std::to_string(lineno) + ": bad number '" + tok + "'");
      }
    }
    if (!b.columns.empty() && row.size() != b.columns.size())
      throw Error("snapshot line " + std::to_string(lineno) + ": expected " +
                  std::to_string(b.columns.size()) + " columns");
    b.rows.push_back(std::move(row));
  }
  return blocks;
}

}  // namespace navslip
