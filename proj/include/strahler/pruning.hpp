#pragma once

#include <cstdint>

#include "strahler/tree.hpp"

namespace strahler {

// Classic Horton pruning of a tree with edge lengths: erase every subtree of
// Strahler number 0, then contract unary chains summing their lengths.
// Decrements the Strahler number by one. Requires S(T) >= 1 (otherwise
// nothing would remain); throws std::invalid_argument.
EdgeTree horton_prune(const EdgeTree& t);

struct PruneOutput {
  WeightedEdgeTree pruned;   // the weighted image (bold R_r)
  EdgeTree pruned_plain;     // same shape and lengths, weights dropped (R_r)
  std::uint64_t erased_mass; // nodes of the input absent from the output
};

// r-weighted Horton pruning: keep the vertices u with bS(theta_u T) >= r,
// contract unary chains summing lengths, and give each new leaf the weight
//   max over the contracted chain of bS(theta_v T), minus r.
// Subtracts exactly r from the weighted Strahler number. Requires
// bS(T) >= r and r in [0,1]; larger thresholds are obtained by composing
// prunings. Comparisons are exact: weights are generic reals and a tolerance
// would bias the law tests.
PruneOutput weighted_prune(const WeightedEdgeTree& t, double r);

}  // namespace strahler
