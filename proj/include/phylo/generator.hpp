#pragma once

#include <cstdint>

#include "phylo/forest.hpp"
#include "phylo/matrix.hpp"

namespace phylo {

struct PlantedInstance {
  TerminalMatrix matrix;
  LabeledForest witness;  // tree of cost d + q_planted spanning all terminals
  std::size_t d = 0;
  std::uint32_t q_planted = 0;
  std::uint64_t seed = 0;
};

// Grows a random tree with d fresh-coordinate edges plus q_planted reused-
// coordinate edges, then samples terminals (every leaf, topped up with random
// internal nodes to n). Retries until every coordinate distinguishes terminals
// and the planted excess is unambiguous.
PlantedInstance plant(std::size_t d, std::uint32_t q, std::size_t n, std::uint64_t seed);

}  // namespace phylo
