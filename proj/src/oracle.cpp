#include "phylo/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

#include "phylo/forest.hpp"

namespace phylo {

VerificationReport verify(const LabeledForest& f, const TerminalMatrix& m) {
  VerificationReport rep;
  rep.cost = f.edges.size();
  rep.per_coordinate_counts.assign(m.d, 0);

  std::unordered_map<BitVec, std::size_t, BitVecHash> index;
  for (std::size_t k = 0; k < f.nodes.size(); ++k) {
    if (!index.emplace(f.nodes[k], k).second)
      rep.violations.push_back("duplicate node " + f.nodes[k].to_string());
    if (f.nodes[k].size() != m.d)
      rep.violations.push_back("node " + f.nodes[k].to_string() + " has " +
                               std::to_string(f.nodes[k].size()) + " coordinates, expected " +
                               std::to_string(m.d));
  }

  std::vector<std::size_t> parent(f.nodes.size());
  for (std::size_t k = 0; k < parent.size(); ++k) parent[k] = k;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };

  for (const auto& e : f.edges) {
    if (e.label < m.d) ++rep.per_coordinate_counts[e.label];

    if (e.u.size() != e.v.size()) {
      rep.violations.push_back("edge endpoints have different widths");
      continue;
    }
    if (e.label >= m.d)
      rep.violations.push_back("edge label " + std::to_string(e.label) + " out of range");
    const BitVec diff = e.u ^ e.v;
    const std::size_t flips = diff.count();
    if (flips != 1)
      rep.violations.push_back("edge flips " + std::to_string(flips) +
                               " coordinates, label claims 1");
    else if (static_cast<std::size_t>(diff.first_set()) != e.label)
      rep.violations.push_back("edge flips coordinate " + std::to_string(diff.first_set()) +
                               ", label claims " + std::to_string(e.label));

    const auto iu = index.find(e.u);
    const auto iv = index.find(e.v);
    if (iu == index.end() || iv == index.end()) {
      rep.violations.push_back("edge endpoint missing from node set");
      continue;
    }
    const std::size_t ru = find(iu->second), rv = find(iv->second);
    if (ru == rv)
      rep.violations.push_back("edge (" + e.u.to_string() + ", " + e.v.to_string() +
                               ") creates a cycle");
    else
      parent[ru] = rv;
  }

  if (!f.nodes.empty()) {
    std::size_t trees = 0;
    for (std::size_t k = 0; k < f.nodes.size(); ++k)
      if (find(k) == k) ++trees;
    if (trees != 1)
      rep.violations.push_back("forest has " + std::to_string(trees) + " trees, expected 1");
  }

  for (std::size_t r = 0; r < m.n(); ++r)
    if (index.find(m.rows[r]) == index.end())
      rep.violations.push_back("terminal " + m.labels[r] + " not spanned");

  for (std::uint32_t c : rep.per_coordinate_counts)
    if (c >= 2) ++rep.bad_count;
  rep.excess = rep.cost > m.d ? rep.cost - m.d : 0;
  rep.valid = rep.violations.empty();
  return rep;
}

LabeledForest exact_steiner(const TerminalMatrix& m, std::size_t max_dim) {
  if (max_dim > 15)
    throw std::invalid_argument("exact_steiner: max_dim must be at most 15");
  if (m.d > max_dim || m.n() > 10)
    throw std::invalid_argument("exact_steiner: limits are n <= 10 and d <= " +
                                std::to_string(max_dim) + "; got n=" + std::to_string(m.n()) +
                                ", d=" + std::to_string(m.d));

  const std::size_t d = m.d;
  std::vector<std::uint32_t> terms;
  for (const auto& row : m.rows) {
    std::uint32_t v = 0;
    row.for_each_set([&](std::size_t j) { v |= 1u << j; });
    if (std::find(terms.begin(), terms.end(), v) == terms.end()) terms.push_back(v);
  }
  const std::size_t k = terms.size();

  auto to_bitvec = [&](std::uint32_t v) {
    BitVec b(d);
    for (std::size_t j = 0; j < d; ++j)
      if (v & (1u << j)) b.set(j, true);
    return b;
  };

  ForestBuilder builder;
  if (k <= 1) {
    builder.add_node(to_bitvec(terms.empty() ? 0 : terms[0]));
    return builder.take();
  }

  const std::size_t V = std::size_t{1} << d;
  const std::uint32_t full = (1u << k) - 1;
  constexpr std::uint8_t INF = 0xFF;
  // dp[mask * V + v]: cheapest tree containing vertex v and the terminals of
  // mask. sub records a merge split, pred an edge relaxation; at most one is
  // set per state.
  std::vector<std::uint8_t> dp(static_cast<std::size_t>(full + 1) * V, INF);
  std::vector<std::int32_t> sub(dp.size(), -1), pred(dp.size(), -1);

  for (std::size_t t = 0; t < k; ++t) dp[(std::size_t{1} << t) * V + terms[t]] = 0;

  std::vector<std::vector<std::uint32_t>> buckets(256);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const std::size_t base = static_cast<std::size_t>(mask) * V;
    const std::uint32_t low = mask & (~mask + 1);
    if (mask != low) {  // merge two sub-trees meeting at v
      for (std::size_t v = 0; v < V; ++v) {
        for (std::uint32_t s = (mask - 1) & mask; s; s = (s - 1) & mask) {
          if (!(s & low)) continue;
          if (s == mask) continue;
          const std::uint8_t a = dp[static_cast<std::size_t>(s) * V + v];
          const std::uint8_t b = dp[static_cast<std::size_t>(mask ^ s) * V + v];
          if (a == INF || b == INF) continue;
          const unsigned c = static_cast<unsigned>(a) + b;
          if (c < dp[base + v]) {
            dp[base + v] = static_cast<std::uint8_t>(c);
            sub[base + v] = static_cast<std::int32_t>(s);
            pred[base + v] = -1;
          }
        }
      }
    }
    // unit-weight relaxation over the hypercube, bucketed by distance
    for (auto& bucket : buckets) bucket.clear();
    std::uint8_t max_seen = 0;
    for (std::size_t v = 0; v < V; ++v)
      if (dp[base + v] != INF) {
        buckets[dp[base + v]].push_back(static_cast<std::uint32_t>(v));
        max_seen = std::max(max_seen, dp[base + v]);
      }
    for (unsigned dist = 0; dist < 255 && dist <= static_cast<unsigned>(max_seen); ++dist) {
      for (std::size_t idx = 0; idx < buckets[dist].size(); ++idx) {
        const std::uint32_t v = buckets[dist][idx];
        if (dp[base + v] != dist) continue;  // stale entry
        for (std::size_t j = 0; j < d; ++j) {
          const std::uint32_t u = v ^ (1u << j);
          if (dist + 1 < dp[base + u]) {
            dp[base + u] = static_cast<std::uint8_t>(dist + 1);
            pred[base + u] = static_cast<std::int32_t>(v);
            sub[base + u] = -1;
            buckets[dist + 1].push_back(u);
            max_seen = std::max<std::uint8_t>(max_seen, static_cast<std::uint8_t>(dist + 1));
          }
        }
      }
    }
  }

  std::uint32_t best_v = 0;
  for (std::size_t v = 1; v < V; ++v)
    if (dp[static_cast<std::size_t>(full) * V + v] < dp[static_cast<std::size_t>(full) * V + best_v])
      best_v = static_cast<std::uint32_t>(v);

  std::vector<std::pair<std::uint32_t, std::uint32_t>> stack{{full, best_v}};
  while (!stack.empty()) {
    auto [mask, v] = stack.back();
    stack.pop_back();
    const std::size_t at = static_cast<std::size_t>(mask) * V + v;
    if (pred[at] >= 0) {
      const std::uint32_t u = static_cast<std::uint32_t>(pred[at]);
      const std::uint32_t diff = u ^ v;
      builder.add_edge(to_bitvec(u), to_bitvec(v),
                       static_cast<Coord>(std::countr_zero(diff)));
      stack.push_back({mask, u});
    } else if (sub[at] >= 0) {
      const std::uint32_t s = static_cast<std::uint32_t>(sub[at]);
      stack.push_back({s, v});
      stack.push_back({mask ^ s, v});
    } else {
      builder.add_node(to_bitvec(v));
    }
  }
  return builder.take();
}

}  // namespace phylo
