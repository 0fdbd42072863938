#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "strahler/offspring.hpp"
#include "strahler/rng.hpp"
#include "strahler/tree.hpp"

namespace strahler {

// Raised when a Galton-Watson sample grows past the node cap. Critical trees
// have infinite mean size, so callers must handle this explicitly; samples are
// never silently clipped.
struct CapExceeded : std::runtime_error {
  explicit CapExceeded(std::uint64_t n)
      : std::runtime_error("node cap exceeded"), nodes_generated(n) {}
  std::uint64_t nodes_generated;
};

inline constexpr std::uint64_t kDefaultNodeCap = 10'000'000;

double sample_fexp(double gamma, RngStream& rng);
std::uint32_t sample_offspring(const StableOffspring& law, RngStream& rng);

// GW_alpha tree by depth-first generation: the child counts along the
// depth-first order are i.i.d. mu_alpha stopped at the tree's end.
Tree sample_gw(const StableOffspring& law, RngStream& rng,
               std::uint64_t node_cap = kDefaultNodeCap);

// Same tree, plus i.i.d. FExp(gamma) weights on the leaves. Draw order per
// node: child count, then (leaves) the weight, so plain and weighted samplers
// agree on the tree for a given stream prefix.
WeightedTree sample_gw_weighted(const StableOffspring& law, RngStream& rng,
                                std::uint64_t node_cap = kDefaultNodeCap);

// Weighted tree with i.i.d. exponential(mean 1) edge lengths. Draw order per
// node: child count, length, then (leaves) the weight.
WeightedEdgeTree sample_gw_edge(const StableOffspring& law, RngStream& rng,
                                std::uint64_t node_cap = kDefaultNodeCap);

// Exact conditioned sampler: GW_alpha given #tau = n, via the Lukasiewicz
// path (draw n offspring values, retry until the increments sum to -1, then
// apply the cycle rotation that makes the walk first hit -1 at the end).
// Unattainable sizes (n = 2 for any alpha; even n for alpha = 2) are
// rejected with std::invalid_argument.
Tree sample_conditioned_size(const StableOffspring& law, std::uint64_t n, RngStream& rng);

struct ConditionedStrahlerResult {
  std::optional<WeightedTree> tree;  // empty if the attempt budget ran out
  std::uint64_t attempts = 0;        // number of trees drawn, including the accepted one
};

// Rejection sampler for the conditional law given |bS - x| < eps, where x is
// a positive non-integer and [x-eps, x+eps] stays inside (floor(x),
// floor(x)+1). Cap-exceeded draws count as rejections.
ConditionedStrahlerResult sample_conditioned_strahler(const StableOffspring& law, double x,
                                                      double eps, RngStream& rng,
                                                      std::uint64_t max_attempts = 1'000'000,
                                                      std::uint64_t node_cap = kDefaultNodeCap);

// ---------------------------------------------------------------------------
// Streaming statistics: generate the depth-first child-count stream without
// materializing the tree. These back the large Monte Carlo experiments.

struct StrahlerStream {
  std::uint32_t strahler = 0;  // exact unless exited_early (then a lower bound)
  std::uint64_t nodes = 0;
  bool capped = false;
  bool exited_early = false;
};

// Computes S(tau) with an explicit postorder stack. If exit_at is nonzero and
// some completed subtree reaches S >= exit_at, generation stops: every event
// {S >= n} with n <= exit_at is already decided. This keeps the work bounded
// without biasing indicator estimates.
StrahlerStream stream_strahler(const StableOffspring& law, RngStream& rng,
                               std::uint32_t exit_at = 0,
                               std::uint64_t node_cap = kDefaultNodeCap);

struct WeightedStream {
  double weighted_strahler = 0.0;
  std::uint64_t nodes = 0;
  bool capped = false;
};

// bS(btau) for a weighted GW tree, same draw order as sample_gw_weighted.
// uniform_weights swaps the FExp(gamma) leaf law for uniforms (negative
// control in the law experiments).
WeightedStream stream_weighted_strahler(const StableOffspring& law, RngStream& rng,
                                        std::uint64_t node_cap = kDefaultNodeCap,
                                        bool uniform_weights = false);

struct ReachStream {
  bool reached = false;
  std::uint64_t nodes = 0;
};

// Decides #tau >= target generating at most target nodes.
ReachStream stream_size_reaches(const StableOffspring& law, RngStream& rng, std::uint64_t target);
// Decides |tau| >= target (combinatorial height), stopping at first hit.
ReachStream stream_height_reaches(const StableOffspring& law, RngStream& rng,
                                  std::uint32_t target);
// Decides #leaves >= target (leaf count only grows along the generation).
ReachStream stream_leaves_reaches(const StableOffspring& law, RngStream& rng,
                                  std::uint64_t target);

}  // namespace strahler
