#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "phylo/forest.hpp"
#include "phylo/partition.hpp"
#include "phylo/solver.hpp"

namespace phylo {

// Raised when the partition violates the properness assumptions the base case
// relies on (e.g. a heavy class active in more than one component). The solver
// treats an affected pass as failed.
class ImproperPartitionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// One interchangeability class. members is ascending and includes rep (the
// smallest member); complement_flags marks members whose column is the bitwise
// complement of the representative's over the owning component.
struct CoordClass {
  Coord rep = 0;
  std::vector<Coord> members;
  BitVec complement_flags;
  std::size_t weight() const { return members.size(); }
};

struct ContractionMap {
  std::size_t d = 0;
  std::vector<CoordClass> classes;
  std::vector<std::int32_t> class_of;  // coord -> class index, -1 if inactive everywhere

  // Restores member coordinates of every class from the representative bit.
  BitVec lift_node(const BitVec& contracted) const;
};

// Zeroes every non-representative member column, leaving one active coordinate
// per class. Original points survive a lift_node round trip because member
// columns are slaved to their representative.
std::pair<PartitionState, ContractionMap> contract(const PartitionState& p);

// Stand-in endpoints for a heavy class whose cut has no unique matching point:
// y carries the pattern values on fixed coordinates, zero elsewhere, with
// bit i = 0; y_bar = y flip i.
struct SyntheticEndpointPair {
  BitVec y, y_bar;
  Coord coord = 0;
  Pattern pattern;
};

struct HeavySplitResult {
  PartitionState partition;
  std::vector<SyntheticEndpointPair> pairs;
  std::vector<TraceStep> steps;
};

// Splits every class with weight > q along its cut, in ascending representative
// order: an ordinary split where a unique match exists (recorded as a step),
// otherwise synthetic endpoints y/y_bar are injected (recorded as a pair).
HeavySplitResult split_heavy(const PartitionState& p, const ContractionMap& map, std::uint32_t q);

// Hamming-metric MST over the component's points (dense Prim, lexicographic
// tie-breaks), with every weight-h edge expanded into h unit-flip edges in
// ascending coordinate order through fresh intermediate nodes.
LabeledForest hamming_mst(const Component& c);

// Unions the per-component forests and adds one edge per heavy class: (x,
// x_bar, i) for recorded steps, (y, y_bar, i) for synthetic pairs.
LabeledForest reconnect(const std::vector<LabeledForest>& forests,
                        const std::vector<SyntheticEndpointPair>& pairs,
                        const std::vector<TraceStep>& steps);

// Replaces every class-representative edge by a path of weight() unit edges in
// ascending member order and lifts all nodes back to original columns.
LabeledForest expand(const LabeledForest& f, const ContractionMap& map);

// General-mode terminal step: per component, contract -> heavy splits ->
// per-part MSTs -> reconnect -> expand, unioned over components.
LabeledForest steiner_base_case(const PartitionState& p, std::uint32_t q);

// Simple-mode terminal step: per-component Hamming MSTs, no contraction.
LabeledForest mst_base_case(const PartitionState& p);

}  // namespace phylo
