#pragma once

#include <cstddef>
#include <unordered_map>
#include <vector>

#include "phylo/bitvec.hpp"

namespace phylo {

// An edge of a phylogeny: endpoints differ in exactly the labeled coordinate.
struct LabeledEdge {
  BitVec u, v;
  Coord label = 0;
};

// Node-labeled forest over hypercube vertices. Cost is the edge count; for a
// valid tree that equals the sum of coordinate flips.
struct LabeledForest {
  std::vector<BitVec> nodes;
  std::vector<LabeledEdge> edges;
  std::size_t cost() const { return edges.size(); }
};

// Incremental forest assembly with node deduplication and a union-find guard:
// an edge whose endpoints are already connected is skipped, so the result is
// acyclic by construction.
class ForestBuilder {
 public:
  std::size_t add_node(const BitVec& v) {
    auto it = index_.find(v);
    if (it != index_.end()) return it->second;
    const std::size_t id = nodes_.size();
    nodes_.push_back(v);
    parent_.push_back(id);
    index_.emplace(v, id);
    return id;
  }

  bool has_node(const BitVec& v) const { return index_.count(v) != 0; }

  // Returns true if the edge was added (endpoints were not yet connected).
  bool add_edge(const BitVec& u, const BitVec& v, Coord label) {
    const std::size_t a = add_node(u);
    const std::size_t b = add_node(v);
    const std::size_t ra = find(a), rb = find(b);
    if (ra == rb) return false;
    parent_[ra] = rb;
    edges_.push_back({u, v, label});
    return true;
  }

  void absorb(const LabeledForest& f) {
    for (const auto& n : f.nodes) add_node(n);
    for (const auto& e : f.edges) add_edge(e.u, e.v, e.label);
  }

  bool connected() {
    if (nodes_.empty()) return true;
    const std::size_t r = find(0);
    for (std::size_t i = 1; i < nodes_.size(); ++i)
      if (find(i) != r) return false;
    return true;
  }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  LabeledForest take() {
    LabeledForest f;
    f.nodes = std::move(nodes_);
    f.edges = std::move(edges_);
    nodes_.clear();
    edges_.clear();
    index_.clear();
    parent_.clear();
    return f;
  }

 private:
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  std::vector<BitVec> nodes_;
  std::vector<LabeledEdge> edges_;
  std::unordered_map<BitVec, std::size_t, BitVecHash> index_;
  std::vector<std::size_t> parent_;
};

}  // namespace phylo
