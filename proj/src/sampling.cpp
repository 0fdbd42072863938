#include "strahler/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "strahler/strahler.hpp"

namespace strahler {

double sample_fexp(double gamma, RngStream& rng) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  return rng.fexp(gamma);
}

std::uint32_t sample_offspring(const StableOffspring& law, RngStream& rng) {
  return law.sample(rng);
}

namespace {

// Depth-first child counts; throws CapExceeded past the cap.
std::vector<std::uint32_t> gw_counts(const StableOffspring& law, RngStream& rng,
                                     std::uint64_t node_cap) {
  std::vector<std::uint32_t> counts;
  std::uint64_t pending = 1;
  while (pending > 0) {
    if (counts.size() >= node_cap) throw CapExceeded(counts.size());
    const std::uint32_t k = law.sample(rng);
    counts.push_back(k);
    pending += k;
    --pending;
  }
  return counts;
}

}  // namespace

Tree sample_gw(const StableOffspring& law, RngStream& rng, std::uint64_t node_cap) {
  return Tree::from_child_counts(gw_counts(law, rng, node_cap));
}

WeightedTree sample_gw_weighted(const StableOffspring& law, RngStream& rng,
                                std::uint64_t node_cap) {
  std::vector<std::uint32_t> counts;
  std::vector<double> leaf_w;
  std::uint64_t pending = 1;
  while (pending > 0) {
    if (counts.size() >= node_cap) throw CapExceeded(counts.size());
    const std::uint32_t k = law.sample(rng);
    counts.push_back(k);
    if (k == 0) leaf_w.push_back(rng.fexp(law.gamma()));
    pending += k;
    --pending;
  }
  return make_weighted(Tree::from_child_counts(counts), std::move(leaf_w));
}

WeightedEdgeTree sample_gw_edge(const StableOffspring& law, RngStream& rng,
                                std::uint64_t node_cap) {
  std::vector<std::uint32_t> counts;
  std::vector<double> lengths;
  std::vector<double> leaf_w;
  std::uint64_t pending = 1;
  while (pending > 0) {
    if (counts.size() >= node_cap) throw CapExceeded(counts.size());
    const std::uint32_t k = law.sample(rng);
    counts.push_back(k);
    lengths.push_back(rng.exponential(1.0));
    if (k == 0) leaf_w.push_back(rng.fexp(law.gamma()));
    pending += k;
    --pending;
  }
  return make_weighted_edge(Tree::from_child_counts(counts), std::move(lengths),
                            std::move(leaf_w));
}

Tree sample_conditioned_size(const StableOffspring& law, std::uint64_t n, RngStream& rng) {
  if (n == 0) throw std::invalid_argument("size must be positive");
  if (n == 2) throw std::invalid_argument("no tree of size 2: mu_alpha(1) = 0");
  if (law.alpha() == 2.0 && n % 2 == 0)
    throw std::invalid_argument("binary trees have odd size");
  std::vector<std::uint32_t> counts(n);
  for (;;) {
    std::int64_t sum = 0;
    for (auto& c : counts) {
      c = law.sample(rng);
      sum += c;
    }
    if (sum != static_cast<std::int64_t>(n) - 1) continue;
    // Cycle lemma: rotate to start right after the first prefix minimum.
    std::int64_t walk = 0, best = 1;
    std::size_t argmin = 0;
    for (std::size_t i = 0; i < n; ++i) {
      walk += static_cast<std::int64_t>(counts[i]) - 1;
      if (walk < best) {
        best = walk;
        argmin = i;
      }
    }
    std::rotate(counts.begin(), counts.begin() + static_cast<std::ptrdiff_t>(argmin + 1),
                counts.end());
    return Tree::from_child_counts(counts);
  }
}

ConditionedStrahlerResult sample_conditioned_strahler(const StableOffspring& law, double x,
                                                      double eps, RngStream& rng,
                                                      std::uint64_t max_attempts,
                                                      std::uint64_t node_cap) {
  const double fl = std::floor(x);
  if (!(eps > 0.0) || !(fl < x - eps) || !(x + eps < fl + 1.0))
    throw std::invalid_argument("need floor(x) < x-eps < x+eps < floor(x)+1");
  ConditionedStrahlerResult out;
  while (out.attempts < max_attempts) {
    ++out.attempts;
    try {
      WeightedTree wt = sample_gw_weighted(law, rng, node_cap);
      const double bs = weighted_strahler(wt).value();
      if (std::fabs(bs - x) < eps) {
        out.tree = std::move(wt);
        return out;
      }
    } catch (const CapExceeded&) {
      // counts as a rejected attempt
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Postorder frame for streaming Strahler evaluation.
struct SFrame {
  std::uint32_t remaining;
  std::uint32_t m1;  // largest completed child value
  std::uint32_t m2;  // second largest
};

struct WFrame {
  std::uint32_t remaining;
  double m1;
  double m2;
};

}  // namespace

StrahlerStream stream_strahler(const StableOffspring& law, RngStream& rng, std::uint32_t exit_at,
                               std::uint64_t node_cap) {
  StrahlerStream out;
  std::vector<SFrame> stack;
  for (;;) {
    if (out.nodes >= node_cap) {
      out.capped = true;
      return out;
    }
    const std::uint32_t k = law.sample(rng);
    ++out.nodes;
    if (k > 0) {
      stack.push_back({k, 0, 0});
      continue;
    }
    // Fold a completed subtree value up the stack.
    std::uint32_t v = 0;
    for (;;) {
      if (exit_at > 0 && v >= exit_at) {
        out.strahler = v;
        out.exited_early = true;
        return out;
      }
      if (stack.empty()) {
        out.strahler = v;
        return out;
      }
      SFrame& f = stack.back();
      if (v > f.m1) {
        f.m2 = f.m1;
        f.m1 = v;
      } else if (v > f.m2) {
        f.m2 = v;
      }
      if (--f.remaining > 0) break;
      // k >= 2 here since mu(1) = 0.
      v = (f.m1 == f.m2) ? f.m1 + 1 : f.m1;
      stack.pop_back();
    }
  }
}

WeightedStream stream_weighted_strahler(const StableOffspring& law, RngStream& rng,
                                        std::uint64_t node_cap, bool uniform_weights) {
  WeightedStream out;
  std::vector<WFrame> stack;
  for (;;) {
    if (out.nodes >= node_cap) {
      out.capped = true;
      return out;
    }
    const std::uint32_t k = law.sample(rng);
    ++out.nodes;
    if (k > 0) {
      stack.push_back({k, -1.0, -1.0});
      continue;
    }
    double v = uniform_weights ? rng.u01() : rng.fexp(law.gamma());
    for (;;) {
      if (stack.empty()) {
        out.weighted_strahler = v;
        return out;
      }
      WFrame& f = stack.back();
      if (v > f.m1) {
        f.m2 = f.m1;
        f.m1 = v;
      } else if (v > f.m2) {
        f.m2 = v;
      }
      if (--f.remaining > 0) break;
      v = std::max(f.m1, 1.0 + f.m2);
      stack.pop_back();
    }
  }
}

ReachStream stream_size_reaches(const StableOffspring& law, RngStream& rng,
                                std::uint64_t target) {
  ReachStream out;
  std::uint64_t pending = 1;
  while (pending > 0) {
    if (out.nodes >= target) {
      out.reached = true;
      return out;
    }
    const std::uint32_t k = law.sample(rng);
    ++out.nodes;
    pending += k;
    --pending;
  }
  out.reached = out.nodes >= target;
  return out;
}

ReachStream stream_height_reaches(const StableOffspring& law, RngStream& rng,
                                  std::uint32_t target) {
  ReachStream out;
  if (target == 0) {
    out.reached = true;
    return out;
  }
  // stack holds remaining-children counters; its depth is the node depth.
  std::vector<std::uint32_t> stack;
  for (;;) {
    const std::uint32_t k = law.sample(rng);
    ++out.nodes;
    if (k > 0) {
      stack.push_back(k);
      if (stack.size() >= target) {
        out.reached = true;  // the next generated child sits at depth target
        return out;
      }
      continue;
    }
    while (!stack.empty() && --stack.back() == 0) stack.pop_back();
    if (stack.empty()) return out;
  }
}

ReachStream stream_leaves_reaches(const StableOffspring& law, RngStream& rng,
                                  std::uint64_t target) {
  ReachStream out;
  if (target == 0) {
    out.reached = true;
    return out;
  }
  std::uint64_t pending = 1, leaves = 0;
  while (pending > 0) {
    const std::uint32_t k = law.sample(rng);
    ++out.nodes;
    if (k == 0 && ++leaves >= target) {
      out.reached = true;
      return out;
    }
    pending += k;
    --pending;
  }
  return out;
}

}  // namespace strahler
