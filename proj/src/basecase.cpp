#include "phylo/basecase.hpp"

#include <algorithm>
#include <limits>

namespace phylo {

BitVec ContractionMap::lift_node(const BitVec& contracted) const {
  BitVec r = contracted;
  for (const auto& cls : classes) {
    const bool b = r.get(cls.rep);
    for (Coord j : cls.members)
      if (j != cls.rep) r.set(j, b != cls.complement_flags.get(j));
  }
  return r;
}

std::pair<PartitionState, ContractionMap> contract(const PartitionState& p) {
  ContractionMap map;
  map.d = p.d;
  map.class_of.assign(p.d, -1);

  PartitionState out;
  out.d = p.d;
  for (const Component& c : p.components) {
    BitVec zero_mask(p.d);
    for (const auto& members : interchangeable_classes(c)) {
      CoordClass cls;
      cls.rep = members[0];
      cls.members = members;
      cls.complement_flags = BitVec(p.d);
      for (Coord j : members) {
        if (map.class_of[j] != -1)
          throw ImproperPartitionError("contract: coordinate active in more than one component");
        map.class_of[j] = static_cast<std::int32_t>(map.classes.size());
        if (j != cls.rep) {
          cls.complement_flags.set(j, c.points[0].get(j) != c.points[0].get(cls.rep));
          zero_mask.set(j, true);
        }
      }
      map.classes.push_back(std::move(cls));
    }
    std::vector<BitVec> pts;
    pts.reserve(c.size());
    for (const auto& pt : c.points) pts.push_back(pt.and_not(zero_mask));
    out.components.push_back(Component::from_points(std::move(pts)));
  }
  return {std::move(out), std::move(map)};
}

HeavySplitResult split_heavy(const PartitionState& p, const ContractionMap& map, std::uint32_t q) {
  HeavySplitResult res;
  res.partition = p;

  std::vector<std::size_t> order(map.classes.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return map.classes[a].rep < map.classes[b].rep;
  });

  for (std::size_t k : order) {
    const CoordClass& cls = map.classes[k];
    if (cls.weight() <= q) continue;
    const Coord i = cls.rep;

    std::ptrdiff_t home = -1;
    for (std::size_t t = 0; t < res.partition.components.size(); ++t) {
      if (!res.partition.components[t].is_active(i)) continue;
      if (home != -1)
        throw ImproperPartitionError("split_heavy: heavy class active in more than one component");
      home = static_cast<std::ptrdiff_t>(t);
    }
    if (home == -1) continue;  // already resolved by an earlier split
    const std::size_t h = static_cast<std::size_t>(home);
    const Component& c = res.partition.components[h];

    const Pattern pat = pattern_of(i, c);
    std::ptrdiff_t zero_hit = -1, one_hit = -1;
    std::size_t zero_n = 0, one_n = 0;
    for (std::size_t t = 0; t < c.size(); ++t) {
      if (pat.size() == 0 || !pat.matches(c.points[t])) continue;
      if (c.points[t].get(i)) {
        one_hit = static_cast<std::ptrdiff_t>(t);
        ++one_n;
      } else {
        zero_hit = static_cast<std::ptrdiff_t>(t);
        ++zero_n;
      }
    }

    std::vector<BitVec> zero_pts, one_pts;
    for (const auto& pt : c.points) (pt.get(i) ? one_pts : zero_pts).push_back(pt);

    if (zero_n == 1 || one_n == 1) {
      const BitVec x =
          c.points[static_cast<std::size_t>(zero_n == 1 ? zero_hit : one_hit)];
      (x.get(i) ? zero_pts : one_pts).push_back(x.with_flipped(i));
      res.steps.push_back({TraceStep::Kind::Split, x, i});
    } else {
      SyntheticEndpointPair pair;
      pair.coord = i;
      pair.pattern = pat;
      pair.y = pat.fixed_values;  // pattern values on fixed coords, zero elsewhere
      pair.y_bar = pair.y.with_flipped(i);
      zero_pts.push_back(pair.y);
      one_pts.push_back(pair.y_bar);
      res.pairs.push_back(std::move(pair));
    }

    std::vector<Component> next;
    next.reserve(res.partition.components.size() + 1);
    for (std::size_t t = 0; t < res.partition.components.size(); ++t) {
      if (t != h) {
        next.push_back(std::move(res.partition.components[t]));
        continue;
      }
      next.push_back(Component::from_points(std::move(zero_pts)));
      next.push_back(Component::from_points(std::move(one_pts)));
    }
    res.partition.components = std::move(next);
  }
  return res;
}

LabeledForest hamming_mst(const Component& c) {
  ForestBuilder b;
  const std::size_t m = c.size();
  if (m == 0) return b.take();
  b.add_node(c.points[0]);
  if (m == 1) {
    LabeledForest f = b.take();
    return f;
  }

  constexpr std::size_t INF = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> key(m, INF), parent(m, 0);
  std::vector<bool> in_tree(m, false);
  const std::size_t start = c.lex_min_index();
  key[start] = 0;

  auto connect = [&](const BitVec& a, const BitVec& b_pt) {
    // Expand a weight-h hop into h unit flips, ascending coordinates, walking
    // from the lexicographically smaller endpoint.
    const BitVec& from = BitVec::lex_less(a, b_pt) ? a : b_pt;
    const BitVec& to = BitVec::lex_less(a, b_pt) ? b_pt : a;
    BitVec cur = from;
    (from ^ to).for_each_set([&](std::size_t j) {
      BitVec next = cur.with_flipped(j);
      b.add_edge(cur, next, static_cast<Coord>(j));
      cur = std::move(next);
    });
  };

  for (std::size_t round = 0; round < m; ++round) {
    std::size_t u = m;
    for (std::size_t v = 0; v < m; ++v) {
      if (in_tree[v] || key[v] == INF) continue;
      if (u == m || key[v] < key[u] ||
          (key[v] == key[u] && BitVec::lex_less(c.points[v], c.points[u])))
        u = v;
    }
    in_tree[u] = true;
    if (u != start) connect(c.points[parent[u]], c.points[u]);
    for (std::size_t v = 0; v < m; ++v) {
      if (in_tree[v]) continue;
      const std::size_t w = (c.points[u] ^ c.points[v]).count();
      if (w < key[v] ||
          (w == key[v] && BitVec::lex_less(c.points[u], c.points[parent[v]]))) {
        key[v] = w;
        parent[v] = u;
      }
    }
  }
  return b.take();
}

LabeledForest reconnect(const std::vector<LabeledForest>& forests,
                        const std::vector<SyntheticEndpointPair>& pairs,
                        const std::vector<TraceStep>& steps) {
  ForestBuilder b;
  for (const auto& f : forests) b.absorb(f);
  for (const auto& s : steps) {
    if (!b.has_node(s.x) || !b.has_node(s.x_bar()))
      throw std::logic_error("reconnect: split endpoint missing");
    b.add_edge(s.x, s.x_bar(), s.coord);
  }
  for (const auto& p : pairs) {
    if (!b.has_node(p.y) || !b.has_node(p.y_bar))
      throw std::logic_error("reconnect: synthetic endpoint missing");
    b.add_edge(p.y, p.y_bar, p.coord);
  }
  return b.take();
}

LabeledForest expand(const LabeledForest& f, const ContractionMap& map) {
  ForestBuilder b;
  for (const auto& v : f.nodes) b.add_node(map.lift_node(v));
  for (const auto& e : f.edges) {
    if (e.label >= map.d || map.class_of[e.label] < 0 ||
        map.classes[static_cast<std::size_t>(map.class_of[e.label])].rep != e.label)
      throw std::logic_error("expand: edge label is not a class representative");
    const CoordClass& cls = map.classes[static_cast<std::size_t>(map.class_of[e.label])];
    const BitVec lu = map.lift_node(e.u);
    const BitVec lv = map.lift_node(e.v);
    BitVec cur = lu;
    for (Coord j : cls.members) {
      BitVec next = cur.with_flipped(j);
      b.add_edge(cur, next, j);
      cur = std::move(next);
    }
    if (cur != lv) throw std::logic_error("expand: lifted endpoints disagree off the class");
  }
  return b.take();
}

LabeledForest steiner_base_case(const PartitionState& p, std::uint32_t q) {
  ForestBuilder b;
  for (const Component& c : p.components) {
    PartitionState one;
    one.d = p.d;
    one.components.push_back(c);
    auto [contracted, map] = contract(one);
    HeavySplitResult hs = split_heavy(contracted, map, q);
    std::vector<LabeledForest> forests;
    forests.reserve(hs.partition.components.size());
    for (const Component& part : hs.partition.components) forests.push_back(hamming_mst(part));
    b.absorb(expand(reconnect(forests, hs.pairs, hs.steps), map));
  }
  return b.take();
}

LabeledForest mst_base_case(const PartitionState& p) {
  ForestBuilder b;
  for (const Component& c : p.components) b.absorb(hamming_mst(c));
  return b.take();
}

}  // namespace phylo
