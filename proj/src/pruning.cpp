#include "strahler/pruning.hpp"

#include <algorithm>
#include <stdexcept>

#include "strahler/strahler.hpp"

namespace strahler {

namespace {

// Shared skeleton: given the kept predicate as per-node subtree values and a
// threshold test, erase, contract chains, and assemble lengths. `chain_max`
// receives the per-chain maximum of the subtree values for new leaves.
struct Contracted {
  std::vector<std::uint32_t> counts;
  std::vector<double> lengths;
  std::vector<double> chain_max;  // per kept node, max subtree value over its chain
  std::vector<std::uint32_t> kept_child_count;
  std::uint64_t kept_in_t2 = 0;   // size after erasing, before contraction
};

template <typename Value, typename Keep>
Contracted contract(const Tree& t, const std::vector<double>& length,
                    const std::vector<Value>& value, Keep keep) {
  const std::size_t n = t.size();
  // t'' = induced subtree of kept vertices (kept is closed under ancestors).
  std::vector<std::uint32_t> kept_children(n, 0);
  std::vector<char> is_kept(n, 0);
  for (NodeId v = 0; v < n; ++v) is_kept[v] = keep(value[v]) ? 1 : 0;
  for (NodeId v = 1; v < n; ++v)
    if (is_kept[v]) ++kept_children[t.parent(v)];

  Contracted out;
  for (NodeId v = 0; v < n; ++v) out.kept_in_t2 += is_kept[v];
  // Vertices of t' = kept vertices whose kept-child count differs from 1, in
  // depth-first order. Chains of kept unary vertices merge downward.
  for (NodeId v = 0; v < n; ++v) {
    if (!is_kept[v] || kept_children[v] == 1) continue;
    // Walk up the chain of kept unary ancestors.
    NodeId top = v;
    while (top != 0 && is_kept[t.parent(top)] && kept_children[t.parent(top)] == 1)
      top = t.parent(top);
    double l = length[top];
    double m = static_cast<double>(value[top]);
    for (NodeId u = top; u != v;) {
      // the single kept child of u
      NodeId next = kNoNode;
      for (NodeId c : t.children(u))
        if (is_kept[c]) {
          next = c;
          break;
        }
      u = next;
      l += length[u];
      m = std::max(m, static_cast<double>(value[u]));
    }
    out.counts.push_back(kept_children[v]);
    out.lengths.push_back(l);
    out.chain_max.push_back(m);
    out.kept_child_count.push_back(kept_children[v]);
  }
  return out;
}

}  // namespace

EdgeTree horton_prune(const EdgeTree& t) {
  const auto s = strahler_per_node(t.tree);
  if (s[t.tree.root()] < 1) throw std::invalid_argument("S(T) = 0: nothing would remain");
  auto c = contract(t.tree, t.length, s, [](std::uint32_t v) { return v >= 1; });
  return make_edge(Tree::from_child_counts(c.counts), std::move(c.lengths));
}

PruneOutput weighted_prune(const WeightedEdgeTree& t, double r) {
  if (!(r >= 0.0 && r <= 1.0))
    throw std::invalid_argument("r must lie in [0,1]; compose prunings for larger thresholds");
  const auto bs = weighted_strahler_per_node(WeightedTree{t.tree, t.weight});
  if (!(bs[t.tree.root()] >= r)) throw std::invalid_argument("bS(T) < r");
  auto c = contract(t.tree, t.length, bs, [r](double v) { return v >= r; });

  Tree shape = Tree::from_child_counts(c.counts);
  std::vector<double> weights;
  for (std::size_t i = 0; i < c.counts.size(); ++i)
    if (c.counts[i] == 0) weights.push_back(c.chain_max[i] - r);

  PruneOutput out{
      make_weighted_edge(shape, c.lengths, std::move(weights)),
      EdgeTree{std::move(shape), std::move(c.lengths)},
      static_cast<std::uint64_t>(t.tree.size()) - c.counts.size(),
  };
  return out;
}

}  // namespace strahler
