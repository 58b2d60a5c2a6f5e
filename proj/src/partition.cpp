#include "phylo/partition.hpp"

#include <stdexcept>
#include <unordered_map>

namespace phylo {

Component Component::from_points(std::vector<BitVec> pts) {
  Component c;
  std::unordered_map<BitVec, std::size_t, BitVecHash> seen;
  for (auto& p : pts) {
    if (seen.emplace(p, c.points.size()).second) c.points.push_back(std::move(p));
  }
  c.d = c.points.empty() ? 0 : c.points[0].size();
  c.recount();
  return c;
}

std::ptrdiff_t Component::index_of(const BitVec& p) const {
  for (std::size_t k = 0; k < points.size(); ++k)
    if (points[k] == p) return static_cast<std::ptrdiff_t>(k);
  return -1;
}

std::size_t Component::lex_min_index() const {
  std::size_t best = 0;
  for (std::size_t k = 1; k < points.size(); ++k)
    if (BitVec::lex_less(points[k], points[best])) best = k;
  return best;
}

void Component::recount() {
  one_count.assign(d, 0);
  for (const auto& p : points)
    p.for_each_set([&](std::size_t i) { ++one_count[i]; });
  active_mask = BitVec(d);
  for (Coord i = 0; i < d; ++i)
    if (one_count[i] > 0 && one_count[i] < points.size()) active_mask.set(i, true);
}

PartitionState PartitionState::single(const TerminalMatrix& m) {
  PartitionState p;
  p.d = m.d;
  p.components.push_back(Component::from_points(m.rows));
  return p;
}

BitVec PartitionState::active_union() const {
  BitVec u(d);
  for (const auto& c : components) u |= c.active_mask;
  return u;
}

std::size_t PartitionState::total_points() const {
  std::size_t t = 0;
  for (const auto& c : components) t += c.size();
  return t;
}

CoordinateCut cut_of(Coord i, const Component& c) {
  CoordinateCut cut;
  cut.canonical_key = BitVec(c.size());
  const bool flip = c.points.empty() ? false : c.points[c.lex_min_index()].get(i);
  for (std::size_t k = 0; k < c.size(); ++k) {
    const bool b = c.points[k].get(i);
    (b ? cut.one_side : cut.zero_side).push_back(k);
    cut.canonical_key.set(k, b != flip);
  }
  return cut;
}

std::vector<std::vector<Coord>> interchangeable_classes(const Component& c) {
  std::unordered_map<BitVec, std::size_t, BitVecHash> key_to_class;
  std::vector<std::vector<Coord>> classes;
  const std::size_t lex0 = c.points.empty() ? 0 : c.lex_min_index();
  for (Coord i = 0; i < c.d; ++i) {
    if (!c.is_active(i)) continue;
    BitVec key(c.size());
    const bool flip = c.points[lex0].get(i);
    for (std::size_t k = 0; k < c.size(); ++k) key.set(k, c.points[k].get(i) != flip);
    auto [it, fresh] = key_to_class.emplace(std::move(key), classes.size());
    if (fresh)
      classes.push_back({i});
    else
      classes[it->second].push_back(i);
  }
  // Coordinates were scanned ascending, so members are ascending and classes
  // are already ordered by smallest member.
  return classes;
}

Pattern pattern_of(Coord i, const Component& c, const BitVec* exclude) {
  if (!c.is_active(i)) throw std::logic_error("pattern_of: coordinate inactive on component");

  BitVec and0, or0, and1, or1;
  bool seen0 = false, seen1 = false;
  for (const auto& p : c.points) {
    if (p.get(i)) {
      if (!seen1) {
        and1 = or1 = p;
        seen1 = true;
      } else {
        and1 &= p;
        or1 |= p;
      }
    } else {
      if (!seen0) {
        and0 = or0 = p;
        seen0 = true;
      } else {
        and0 &= p;
        or0 |= p;
      }
    }
  }

  const BitVec c0 = (or0 ^ and0).inverted();  // constant on the zero side
  const BitVec c1 = (or1 ^ and1).inverted();
  // Constant on both sides with differing values: exactly i and the
  // coordinates interchangeable with i; always dropped.
  const BitVec differing = (c0 & c1) & (and0 ^ and1);

  Pattern p;
  p.fixed_coords = (c0 | c1).and_not(differing);
  if (exclude) p.fixed_coords = p.fixed_coords.and_not(*exclude);
  // Take the zero side's value where it is constant there, else the one side's.
  p.fixed_values = ((and0 & c0) | (and1 & c1.and_not(c0))) & p.fixed_coords;
  return p;
}

std::vector<BitVec> match_pattern(const Pattern& p, const Component& c) {
  std::vector<BitVec> out;
  for (const auto& x : c.points)
    if (p.matches(x)) out.push_back(x);
  return out;
}

}  // namespace phylo
