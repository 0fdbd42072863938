#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "strahler/rng.hpp"
#include "strahler/tree.hpp"

namespace strahler {

// Finite Strahler-dilation query I^{k,n}_d: supremum over embeddings phi of
// the n-perfect binary tree into the metric tree (wedge-preserving injective
// maps, phi(parent of root word) = planted root) of the infimum over words u
// with k <= |u| <= n of
//   (1/(|u|+1)) * sum_{v <= u} d^{|v|+1} * dist(phi(parent v), phi(v)).
// sup over the empty embedding set is 0.
struct DilationQuery {
  double base = 2.0;  // d > 1
  std::uint32_t k = 0;
  std::uint32_t n = 0;
};

// Embedding witness: words of the n-perfect binary tree in heap order
// (root = index 1, children of i at 2i and 2i+1); kNoNode marks absent
// entries (no witness, or value 0 with no embedding).
struct DilationResult {
  double value = 0.0;
  std::optional<std::vector<NodeId>> witness;
};

// Exact value via dynamic programming. For k == n a direct maximin DP is
// used; for k < n the value is located by a binary search on a threshold t,
// each step deciding feasibility with an additive slack DP over the tree.
DilationResult dilation(const EdgeTree& t, const DilationQuery& q, bool want_witness = true);

// Exhaustive enumeration over all embeddings; identical contract. Guarded:
// requires size <= 14 and n <= 3, rejects larger inputs.
DilationResult brute_force_dilation(const EdgeTree& t, const DilationQuery& q);

// Evaluates the objective of a witness map (min over checkpoint words of the
// averaged weighted sums). Throws if the witness is not an embedding.
double replay_dilation(const EdgeTree& t, const DilationQuery& q,
                       const std::vector<NodeId>& witness);

// The d-dyadic reference tree: perfect binary tree of the given depth whose
// edge above each word u has length d^{-|u|-1}. Every root-to-leaf weighted
// sum telescopes to depth+1, so dilation at k = n equals 1.
EdgeTree dyadic_tree(double d, std::uint32_t depth);

struct LimitTreeSample {
  EdgeTree tree;
  bool truncated = false;  // depth cap hit before the scale threshold
};

// Truncated sampler of the alpha=2 limit tree T*: a root segment of
// exponential length with mean 1/2 carrying, at its tip, one copy scaled by
// 1/U (U uniform on [1,2]) and one scaled by 1/2, and along its length a
// Poisson point process (rate 2 per unit length x dxi on [1,inf)) of copies
// scaled by 1/(2 xi). Grafts whose cumulative scale falls below eps_scale
// are replaced by points.
LimitTreeSample sample_hs2_limit(double eps_scale, std::uint32_t depth_cap, RngStream& rng);

struct LimitHeightSample {
  double height = 0.0;
  bool truncated = false;
};

// Height of a truncated T* sample without materializing the tree; consumes
// the same random draws as sample_hs2_limit.
LimitHeightSample sample_hs2_limit_height(double eps_scale, std::uint32_t depth_cap,
                                          RngStream& rng);

}  // namespace strahler
