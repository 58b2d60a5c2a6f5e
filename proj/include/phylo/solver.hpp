#pragma once

#include <cstdint>
#include <optional>
#include <tuple>
#include <vector>

#include "phylo/forest.hpp"
#include "phylo/matrix.hpp"
#include "phylo/partition.hpp"

namespace phylo {

// One reduction applied during the forward pass; replayed in reverse to
// reconstruct the tree. x_bar differs from x exactly at coord.
struct TraceStep {
  enum class Kind { Pluck, Split };
  Kind kind;
  BitVec x;
  Coord coord = 0;
  BitVec x_bar() const { return x.with_flipped(coord); }
};

enum class SolveMode { Simple, General };

struct SolverConfig {
  std::uint64_t seed = 0;
  std::uint32_t restarts_per_q = 10;
  std::optional<std::uint32_t> q_override;
  SolveMode mode = SolveMode::General;
};

struct SolveReport {
  LabeledForest forest;
  std::size_t cost = 0;
  std::uint32_t q_used = 0;
  std::uint32_t restarts_used = 0;
  std::size_t bound = 0;  // d + 40*q_used^2 + 2*q_used
  bool met_bound = false;
  std::size_t splits = 0;
};

// If some component has an active coordinate carried by exactly one point x on
// one side, returns (x, i, state with x replaced by x flip i, merging into an
// existing point if present). Scans components in list order, coordinates
// ascending, and prefers the zero side.
std::optional<std::tuple<BitVec, Coord, PartitionState>> pluck_a_leaf(const PartitionState& p);

// Reverse of pluck: re-adds x with the unit edge to x_bar. The anchor node
// must already exist.
LabeledForest paste_a_leaf(LabeledForest f, const TraceStep& step);

// Splits the first component where i is active into the two sides of the
// i-cut, if a unique pattern-matching point exists on one side (zero side
// preferred). x stays on its side; x flip i joins the other.
std::optional<std::tuple<BitVec, BitVec, PartitionState>> split(Coord i, const PartitionState& p);

// Reverse of split: adds the edge (x, x_bar, i). Both endpoints must exist.
LabeledForest merge(LabeledForest f, const TraceStep& step);

// True iff split(i, p) would succeed. Does not mutate.
bool is_simple(Coord i, const PartitionState& p);

// One seeded pass at a fixed q. Simple mode splits on a uniformly random
// active coordinate when at least 40*max(q,1)^2 are active (a failed split
// fails the pass); general mode splits on a uniformly random simple coordinate
// when at least 8*max(q,1)^2 are simple. Split invocations are hard-capped at
// 4*max(q,1); exceeding the cap fails the pass.
std::optional<SolveReport> solve_with_q(const TerminalMatrix& m, std::uint32_t q,
                                        std::uint64_t seed, SolveMode mode = SolveMode::General);

// Driver: q from cfg.q_override, or estimated by a doubling search capped at
// max(0, mst_cost - d), running cfg.restarts_per_q seeded passes per candidate
// and returning the first candidate whose best pass meets d + 40q^2 + 2q.
// Always returns a valid report; falls back to the expanded Hamming MST.
SolveReport solve(const TerminalMatrix& m, const SolverConfig& cfg);

}  // namespace phylo
