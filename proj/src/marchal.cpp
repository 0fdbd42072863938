#include "strahler/marchal.hpp"

#include <cmath>
#include <stdexcept>

namespace strahler {

GrowthChain::GrowthChain(double alpha, RngStream& rng) : alpha_(alpha), rng_(rng) {
  if (!(alpha > 1.0 && alpha <= 2.0)) throw std::invalid_argument("alpha must lie in (1,2]");
  gamma_ = std::log(alpha / (alpha - 1.0));
  nodes_.push_back({kNoNode, {}, rng_.fexp(gamma_)});
  vweight_.push_back(0.0);
}

void GrowthChain::step() {
  bool is_edge = false;
  const NodeId u = pick_growth_site(is_edge);
  const double w_new = rng_.fexp(gamma_);

  auto update_vweight = [&](NodeId v) {
    const double k = static_cast<double>(nodes_[v].children.size());
    const double nw = k >= 2.0 ? k - alpha_ : 0.0;
    vweight_total_ += nw - vweight_[v];
    vweight_[v] = nw;
  };

  if (is_edge) {
    // Split the parental edge of u with a middle vertex m; the new leaf and
    // the old subtree become m's two children, ordered by a uniform J in
    // {1,2}.
    const NodeId m = static_cast<NodeId>(nodes_.size());
    nodes_.push_back({nodes_[u].parent, {}, 0.0});
    vweight_.push_back(0.0);
    const NodeId leaf = static_cast<NodeId>(nodes_.size());
    nodes_.push_back({m, {}, w_new});
    vweight_.push_back(0.0);

    const NodeId p = nodes_[u].parent;
    if (p == kNoNode) {
      root_ = m;
    } else {
      for (auto& c : nodes_[p].children)
        if (c == u) {
          c = m;
          break;
        }
    }
    nodes_[u].parent = m;
    const std::uint64_t j = rng_.uniform_below(2);
    if (j == 0) {
      nodes_[m].children = {leaf, u};
    } else {
      nodes_[m].children = {u, leaf};
    }
    update_vweight(m);
    store_size_ += 2;
  } else {
    // Attach a new leaf to u at a uniform position among k_u + 1 slots.
    const NodeId leaf = static_cast<NodeId>(nodes_.size());
    nodes_.push_back({u, {}, w_new});
    vweight_.push_back(0.0);
    auto& ch = nodes_[u].children;
    const std::uint64_t j = rng_.uniform_below(ch.size() + 1);
    ch.insert(ch.begin() + static_cast<std::ptrdiff_t>(j), leaf);
    update_vweight(u);
    store_size_ += 1;
  }
  ++leaves_;
}

NodeId GrowthChain::pick_growth_site(bool& is_edge) {
  // Every vertex carries its parental edge (the root's is the planting
  // edge), so the edge weights total (alpha-1) * size.
  const double edge_total = (alpha_ - 1.0) * static_cast<double>(store_size_);
  const double total = edge_total + vweight_total_;
  double x = rng_.u01() * total;
  if (x < edge_total || vweight_total_ <= 0.0) {
    is_edge = true;
    std::uint64_t idx = static_cast<std::uint64_t>(x / (alpha_ - 1.0));
    if (idx >= store_size_) idx = store_size_ - 1;
    // node ids are dense in [0, nodes_.size()) and all alive
    return static_cast<NodeId>(idx);
  }
  is_edge = false;
  x -= edge_total;
  double cum = 0.0;
  for (NodeId v = 0; v < nodes_.size(); ++v) {
    cum += vweight_[v];
    if (x < cum) return v;
  }
  // numerical slack: fall back to the last positively weighted vertex
  for (NodeId v = static_cast<NodeId>(nodes_.size()); v-- > 0;)
    if (vweight_[v] > 0.0) return v;
  is_edge = true;
  return root_;
}

WeightedTree GrowthChain::current() const {
  // Re-index depth-first from the growth store.
  std::vector<std::uint32_t> counts;
  std::vector<double> leaf_w;
  counts.reserve(store_size_);
  std::vector<NodeId> stack{root_};
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    const auto& ch = nodes_[v].children;
    counts.push_back(static_cast<std::uint32_t>(ch.size()));
    if (ch.empty()) leaf_w.push_back(nodes_[v].weight);
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
  return make_weighted(Tree::from_child_counts(counts), std::move(leaf_w));
}

WeightedTree marchal_grow(double alpha, std::uint64_t leaves, RngStream& rng) {
  if (leaves == 0) throw std::invalid_argument("leaf count must be positive");
  GrowthChain chain(alpha, rng);
  while (chain.leaves() < leaves) chain.step();
  return chain.current();
}

}  // namespace strahler
