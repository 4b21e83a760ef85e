#pragma once

// Reader for the columnar snapshot text written by write_layer_snapshots and
// write_ns_snapshots. Lines starting with '#' are comments; a "# wall=..."
// comment opens a new block.

#include <iosfwd>
#include <string>
#include <vector>

namespace navslip {

struct SnapshotBlock {
  std::string label;                      // text after "# wall=", empty otherwise
  std::vector<std::string> columns;       // from the "# t s z ..." header
  std::vector<std::vector<double>> rows;
};

/// Throws Error on a malformed row or a row whose width differs from the header.
std::vector<SnapshotBlock> read_snapshots(std::istream& in);

}  // namespace navslip
