#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "phylo/bitvec.hpp"
#include "phylo/matrix.hpp"

namespace phylo {

// A set of points sharing one subproblem. active_mask marks coordinates on
// which the points disagree; one_count[i] counts points with bit i set, so
// activity checks and pluck candidate scans are O(1) per coordinate.
struct Component {
  std::vector<BitVec> points;  // deduplicated, deterministic order
  BitVec active_mask;
  std::vector<std::uint32_t> one_count;
  std::size_t d = 0;

  static Component from_points(std::vector<BitVec> pts);

  std::size_t size() const { return points.size(); }
  bool is_active(Coord i) const { return i < d && active_mask.get(i); }
  std::ptrdiff_t index_of(const BitVec& p) const;
  // Index of the lexicographically smallest point.
  std::size_t lex_min_index() const;
  void recount();
};

struct PartitionState {
  std::vector<Component> components;
  std::size_t d = 0;

  static PartitionState single(const TerminalMatrix& m);
  BitVec active_union() const;
  std::size_t total_active() const { return active_union().count(); }
  std::size_t total_points() const;
};

// Bipartition of a component's points by one coordinate. canonical_key is the
// side-membership vector over point indices, oriented so the lexicographically
// first point maps to 0; two coordinates cut identically iff keys match.
struct CoordinateCut {
  std::vector<std::size_t> zero_side, one_side;  // point indices
  BitVec canonical_key;
};

CoordinateCut cut_of(Coord i, const Component& c);

// Groups active coordinates whose cuts coincide (columns equal or bitwise
// complementary over the component). Classes ordered by smallest member,
// members ascending.
std::vector<std::vector<Coord>> interchangeable_classes(const Component& c);

// Coordinates fixed to a constant on at least one side of a cut, with their
// values. Matching is word-parallel: x matches iff ((x ^ values) & mask) == 0.
struct Pattern {
  BitVec fixed_coords;
  BitVec fixed_values;
  bool matches(const BitVec& x) const {
    for (std::size_t k = 0; k < fixed_coords.word_count(); ++k)
      if ((x.word(k) ^ fixed_values.word(k)) & fixed_coords.word(k)) return false;
    return true;
  }
  std::size_t size() const { return fixed_coords.count(); }
};

// Pattern of the i-cut on c. Coordinates constant on both sides with differing
// values (exactly: i and the coordinates interchangeable with i) are always
// dropped; `exclude`, when given, removes more. Throws if i is inactive on c.
Pattern pattern_of(Coord i, const Component& c, const BitVec* exclude = nullptr);

// Points of c matching the pattern, in component order.
std::vector<BitVec> match_pattern(const Pattern& p, const Component& c);

}  // namespace phylo
