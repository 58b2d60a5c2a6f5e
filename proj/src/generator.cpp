#include "phylo/generator.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "phylo/rng.hpp"

namespace phylo {

namespace {

struct GrownTree {
  std::vector<BitVec> nodes;
  std::vector<LabeledEdge> edges;           // endpoints stored as node values
  std::vector<std::pair<int, int>> links;   // edge endpoints as node indices
  std::vector<int> degree;
  std::unordered_map<BitVec, int, BitVecHash> index;

  int add_node(BitVec v) {
    const int id = static_cast<int>(nodes.size());
    index.emplace(v, id);
    nodes.push_back(std::move(v));
    degree.push_back(0);
    return id;
  }
  void add_edge(int u, int w, Coord c) {
    edges.push_back({nodes[u], nodes[w], c});
    links.emplace_back(u, w);
    ++degree[u];
    ++degree[w];
  }
  std::size_t leaf_count() const {
    std::size_t n = 0;
    for (int deg : degree)
      if (deg <= 1) ++n;
    return n;
  }
};

int pick_attach(const GrownTree& t, std::size_t leaf_target, SplitMix64& rng) {
  if (t.leaf_count() < leaf_target)
    return static_cast<int>(rng.next_below(t.nodes.size()));
  std::vector<int> leaves;
  for (int v = 0; v < static_cast<int>(t.nodes.size()); ++v)
    if (t.degree[v] <= 1) leaves.push_back(v);
  return leaves[rng.next_below(leaves.size())];
}

// Oriented column keys over the terminal rows; coordinates sharing a key are
// interchangeable on the instance.
std::vector<std::vector<Coord>> terminal_classes(const TerminalMatrix& m) {
  std::unordered_map<BitVec, std::size_t, BitVecHash> groups;
  std::vector<std::vector<Coord>> classes;
  for (Coord j = 0; j < m.d; ++j) {
    BitVec col(m.n());
    for (std::size_t r = 0; r < m.n(); ++r) col.set(r, m.rows[r].get(j));
    if (col.get(0)) col.invert();
    auto [it, fresh] = groups.emplace(std::move(col), classes.size());
    if (fresh)
      classes.push_back({j});
    else
      classes[it->second].push_back(j);
  }
  return classes;
}

// The structural shape interchangeable classes must take in a tree whose
// leaves are all terminals: per class, every maximal run of class-labeled
// edges is a degree-2 path of non-terminal internal nodes carrying every
// class member at least once.
bool classes_well_shaped(const GrownTree& t, const std::vector<std::vector<Coord>>& classes,
                         const std::unordered_set<int>& terminal_ids) {
  std::vector<int> class_of_coord;
  std::size_t d = 0;
  for (const auto& cls : classes)
    for (Coord j : cls) d = std::max<std::size_t>(d, j + 1);
  class_of_coord.assign(d, -1);
  for (std::size_t k = 0; k < classes.size(); ++k)
    for (Coord j : classes[k]) class_of_coord[j] = static_cast<int>(k);

  for (std::size_t k = 0; k < classes.size(); ++k) {
    std::vector<std::size_t> eids;
    for (std::size_t e = 0; e < t.edges.size(); ++e)
      if (class_of_coord[t.edges[e].label] == static_cast<int>(k)) eids.push_back(e);
    if (eids.size() <= 1) continue;

    std::unordered_map<int, std::vector<std::size_t>> incident;
    for (std::size_t e : eids) {
      incident[t.links[e].first].push_back(e);
      incident[t.links[e].second].push_back(e);
    }
    for (const auto& [node, es] : incident)
      if (es.size() > 2) return false;  // not a path

    // walk out the runs
    std::vector<bool> seen(t.edges.size(), false);
    for (std::size_t e0 : eids) {
      if (seen[e0]) continue;
      std::unordered_set<Coord> run_coords;
      std::vector<std::size_t> frontier{e0};
      seen[e0] = true;
      std::vector<int> run_nodes;
      while (!frontier.empty()) {
        const std::size_t e = frontier.back();
        frontier.pop_back();
        run_coords.insert(t.edges[e].label);
        for (int endpoint : {t.links[e].first, t.links[e].second}) {
          run_nodes.push_back(endpoint);
          for (std::size_t e2 : incident[endpoint])
            if (!seen[e2]) {
              seen[e2] = true;
              frontier.push_back(e2);
            }
        }
      }
      if (run_coords.size() != classes[k].size()) return false;  // run misses a member
      for (int v : run_nodes) {
        if (incident[v].size() != 2) continue;  // run endpoint
        if (t.degree[v] != 2) return false;     // junction inside the path
        if (terminal_ids.count(v)) return false;
      }
    }
  }
  return true;
}

bool good_bad_disjoint(const std::vector<std::vector<Coord>>& classes,
                       const std::vector<std::uint32_t>& label_count) {
  for (const auto& cls : classes) {
    bool good = false, bad = false;
    for (Coord j : cls) (label_count[j] >= 2 ? bad : good) = true;
    if (good && bad) return false;
  }
  return true;
}

}  // namespace

PlantedInstance plant(std::size_t d, std::uint32_t q, std::size_t n, std::uint64_t seed) {
  if (d < 1 || n < 2 || 2ull * q >= d)
    throw std::invalid_argument("plant: requires d >= 1, 0 <= q < d/2, n >= 2");

  for (std::uint64_t attempt = 0; attempt < 200; ++attempt) {
    SplitMix64 rng(mix_seed(seed, attempt));
    GrownTree t;
    t.add_node(BitVec(d));
    const std::size_t leaf_target = std::min<std::size_t>(n, std::max<std::size_t>(2, (d + q + 1) / 2));

    std::vector<Coord> order(d);
    for (Coord j = 0; j < d; ++j) order[j] = j;
    for (std::size_t j = d; j > 1; --j)
      std::swap(order[j - 1], order[rng.next_below(j)]);

    for (Coord c : order) {
      const int u = pick_attach(t, leaf_target, rng);
      BitVec w = t.nodes[u].with_flipped(c);
      const int wid = t.add_node(std::move(w));
      t.add_edge(u, wid, c);
    }

    // Duplicate edges reuse the coordinate of a tip edge (the unique edge at
    // some current leaf) and land at a different leaf. A reused coordinate
    // drops out of its column class, so the donor edge must sit at the end of
    // its class run or the survivors are left split in two.
    bool grown = true;
    std::unordered_set<Coord> reused;
    for (std::uint32_t e = 0; e < q; ++e) {
      std::vector<int> leaves;
      for (int v = 0; v < static_cast<int>(t.nodes.size()); ++v)
        if (t.degree[v] == 1) leaves.push_back(v);
      std::vector<Coord> tip_label(t.nodes.size(), 0);
      for (std::size_t k = 0; k < t.links.size(); ++k) {
        if (t.degree[t.links[k].first] == 1) tip_label[t.links[k].first] = t.edges[k].label;
        if (t.degree[t.links[k].second] == 1) tip_label[t.links[k].second] = t.edges[k].label;
      }
      bool placed = false;
      for (int tries = 0; tries < 200 && !placed; ++tries) {
        const int tip = leaves[rng.next_below(leaves.size())];
        const Coord c = tip_label[tip];
        if (reused.count(c)) continue;
        const int u = leaves[rng.next_below(leaves.size())];
        if (u == tip) continue;
        BitVec w = t.nodes[u].with_flipped(c);
        if (t.index.count(w)) continue;
        const int wid = t.add_node(std::move(w));
        t.add_edge(u, wid, c);
        reused.insert(c);
        placed = true;
      }
      if (!placed) {
        grown = false;
        break;
      }
    }
    if (!grown) continue;

    // terminals: every leaf, topped up with random internal nodes
    std::vector<int> terminals, internals;
    for (int v = 0; v < static_cast<int>(t.nodes.size()); ++v)
      (t.degree[v] <= 1 ? terminals : internals).push_back(v);
    for (std::size_t j = internals.size(); j > 1; --j)
      std::swap(internals[j - 1], internals[rng.next_below(j)]);
    for (int v : internals) {
      if (terminals.size() >= n) break;
      terminals.push_back(v);
    }
    std::sort(terminals.begin(), terminals.end());

    TerminalMatrix m;
    m.d = d;
    for (std::size_t r = 0; r < terminals.size(); ++r) {
      m.rows.push_back(t.nodes[terminals[r]]);
      m.labels.push_back("t" + std::to_string(r));
    }

    // every coordinate must distinguish the terminals
    {
      BitVec andf = m.rows[0], orf = m.rows[0];
      for (std::size_t r = 1; r < m.n(); ++r) {
        andf &= m.rows[r];
        orf |= m.rows[r];
      }
      if ((orf ^ andf).count() != d) continue;
    }

    std::vector<std::uint32_t> label_count(d, 0);
    for (const auto& e : t.edges) ++label_count[e.label];
    const auto classes = terminal_classes(m);
    if (!good_bad_disjoint(classes, label_count)) continue;
    std::unordered_set<int> terminal_ids(terminals.begin(), terminals.end());
    if (!classes_well_shaped(t, classes, terminal_ids)) continue;

    PlantedInstance inst;
    inst.matrix = std::move(m);
    inst.witness.nodes = t.nodes;
    inst.witness.edges = t.edges;
    inst.d = d;
    inst.q_planted = q;
    inst.seed = seed;
    return inst;
  }
  throw std::runtime_error("plant: failed to generate an instance for d=" + std::to_string(d) +
                           ", q=" + std::to_string(q) + ", n=" + std::to_string(n));
}

}  // namespace phylo
