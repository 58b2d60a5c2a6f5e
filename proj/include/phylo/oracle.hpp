#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phylo/forest.hpp"
#include "phylo/matrix.hpp"

namespace phylo {

struct VerificationReport {
  bool valid = false;
  std::vector<std::string> violations;
  std::size_t cost = 0;
  std::vector<std::uint32_t> per_coordinate_counts;  // edges labeled by each coordinate
  std::uint32_t bad_count = 0;                       // coordinates labeling >= 2 edges
  std::size_t excess = 0;                            // cost - d
};

// Checks that f is a tree (connected, acyclic), spans every terminal row,
// and that each edge flips exactly the coordinate it is labeled with.
VerificationReport verify(const LabeledForest& f, const TerminalMatrix& m);

// Exact minimum Steiner tree over the d-cube by dynamic programming on
// (terminal subset, vertex). Throws std::invalid_argument beyond
// n > 10 or d > max_dim.
LabeledForest exact_steiner(const TerminalMatrix& m, std::size_t max_dim = 10);

}  // namespace phylo
