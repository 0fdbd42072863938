#pragma once

#include <cstdint>

#include "strahler/tree.hpp"

namespace strahler {

// Classic Horton-Strahler number, Horton's recursion evaluated with an
// explicit postorder stack (conditioned trees can be deep).
std::uint32_t horton_strahler(const Tree& t);

// Per-node Strahler numbers of the subtrees stemming from each node.
std::vector<std::uint32_t> strahler_per_node(const Tree& t);

struct StrahlerValue {
  std::uint32_t whole = 0;        // floor(bS) = S(underlying tree)
  double frac = 0.0;              // fractional part, in [0,1)
  NodeId witness_leaf = kNoNode;  // a leaf whose weight equals frac
  double bs = 0.0;                // the recursion value itself

  // whole + frac equals bs exactly in real arithmetic; in floats the
  // recursion value is the reference, so it is what value() returns.
  double value() const { return bs; }
};

// Weighted Horton-Strahler number via the two-largest-children formula:
// a leaf contributes its weight; an inner node with child values m1 >= m2 >=
// ... contributes max(m1, 1 + m2).
StrahlerValue weighted_strahler(const WeightedTree& t);
inline StrahlerValue weighted_strahler(const WeightedEdgeTree& t) {
  return weighted_strahler(WeightedTree{t.tree, t.weight});
}

// Per-node weighted Strahler numbers.
std::vector<double> weighted_strahler_per_node(const WeightedTree& t);

// Height of the largest perfect binary tree that embeds into t
// (wedge-preserving and injective). Postorder DP independent of the Horton
// recursion; serves as its oracle.
std::uint32_t max_perfect_embedding(const Tree& t);

}  // namespace strahler
