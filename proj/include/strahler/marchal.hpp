#pragma once

#include <cstdint>

#include "strahler/offspring.hpp"
#include "strahler/rng.hpp"
#include "strahler/tree.hpp"

namespace strahler {

// Marchal's leaf-count growth chain with FExp(gamma) weights. State i is a
// weighted tree with exactly i leaves, distributed as the GW_alpha weighted
// tree conditioned on having i leaves. One step picks either an edge (the
// root's planting edge included) with weight alpha-1, or a vertex u with
// k_u >= 2 with weight k_u - alpha, then applies the split-or-attach rule
// with a uniform sibling position. Sizes strictly increase and the weighted
// Strahler number never decreases along the chain.
class GrowthChain {
 public:
  GrowthChain(double alpha, RngStream& rng);

  void step();
  std::uint64_t leaves() const { return leaves_; }
  std::uint64_t size() const { return store_size_; }
  double alpha() const { return alpha_; }

  // Current state as a depth-first-indexed weighted tree.
  WeightedTree current() const;

 private:
  struct Node {
    NodeId parent;
    std::vector<NodeId> children;
    double weight;  // leaves only
  };

  NodeId pick_growth_site(bool& is_edge);

  double alpha_;
  double gamma_;
  RngStream& rng_;
  std::vector<Node> nodes_;  // arbitrary ids; root_ is the root
  NodeId root_ = 0;
  std::uint64_t leaves_ = 1;
  std::uint64_t store_size_ = 1;
  // vertex selection weights (k_u - alpha for k_u >= 2, else 0)
  std::vector<double> vweight_;
  double vweight_total_ = 0.0;
};

// Runs the chain to the requested leaf count; the result is exactly the
// GW_alpha weighted tree conditioned on that leaf count.
WeightedTree marchal_grow(double alpha, std::uint64_t leaves, RngStream& rng);

}  // namespace strahler
