#include "strahler/dilation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace strahler {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_query(const DilationQuery& q) {
  if (!(q.base > 1.0)) throw std::invalid_argument("dilation base must exceed 1");
  if (q.k > q.n) throw std::invalid_argument("need k <= n");
}

// Deepest metric descendant depth below each vertex (0 for leaves), plus the
// realizing node, excluding the vertex's own parental edge.
struct Reach {
  std::vector<double> down;     // max summed length strictly below v
  std::vector<NodeId> deepest;  // node realizing it (v itself for leaves)
};

Reach deepest_below(const EdgeTree& t) {
  const std::size_t n = t.tree.size();
  Reach r{std::vector<double>(n, 0.0), std::vector<NodeId>(n)};
  for (NodeId v = static_cast<NodeId>(n); v-- > 0;) {
    r.deepest[v] = v;
    for (NodeId c : t.tree.children(v)) {
      const double cand = t.length[c] + r.down[c];
      if (cand > r.down[v]) {
        r.down[v] = cand;
        r.deepest[v] = r.deepest[c];
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Direct maximin DP for the k = n query. Level-j value of a vertex v:
//   A_j(v) = best min-over-leaves weighted sum of an embedding of the
//            j-perfect tree rooted in the component of v, edges measured
//            from v's parent with weights d, d^2, ..., relative to the level
// with A_j(v) = d*l_v + M_j(v),
//   M_j(v) = max( [k_v >= 2] d * pairmin_j(v), max_c (d*l_c + M_j(c)) ),
//   pairmin_j(v) = second largest of { A_{j-1}(c) : c child of v },
// and A_0(v) = d * (l_v + deepest below v). Then (n+1) I^{n,n} = A_n(root).

struct MaximinDp {
  // A[j][v]; M[j][v]; choices for witness reconstruction
  std::vector<std::vector<double>> A, M;
  // For M_j(v): kNoNode = branch at v itself, else the child whose subtree
  // hosts the branch point.
  std::vector<std::vector<NodeId>> via;
};

MaximinDp run_maximin(const EdgeTree& t, double d, std::uint32_t n, bool track) {
  const std::size_t sz = t.tree.size();
  MaximinDp dp;
  dp.A.assign(n + 1, std::vector<double>(sz, kNegInf));
  dp.M.assign(n + 1, std::vector<double>(sz, kNegInf));
  if (track) dp.via.assign(n + 1, std::vector<NodeId>(sz, kNoNode));
  const Reach reach = deepest_below(t);
  for (NodeId v = 0; v < sz; ++v) dp.A[0][v] = d * (t.length[v] + reach.down[v]);
  for (std::uint32_t j = 1; j <= n; ++j) {
    auto& A = dp.A[j];
    auto& M = dp.M[j];
    const auto& prev = dp.A[j - 1];
    for (NodeId v = static_cast<NodeId>(sz); v-- > 0;) {
      double best = kNegInf;
      NodeId via = kNoNode;
      if (t.tree.child_count(v) >= 2) {
        double m1 = kNegInf, m2 = kNegInf;
        for (NodeId c : t.tree.children(v)) {
          const double x = prev[c];
          if (x > m1) {
            m2 = m1;
            m1 = x;
          } else if (x > m2) {
            m2 = x;
          }
        }
        if (m2 > kNegInf) best = d * m2;
      }
      for (NodeId c : t.tree.children(v)) {
        if (M[c] == kNegInf) continue;
        const double cand = d * t.length[c] + M[c];
        if (cand > best) {
          best = cand;
          via = c;
        }
      }
      M[v] = best;
      if (track) dp.via[j][v] = via;
      A[v] = best == kNegInf ? kNegInf : d * t.length[v] + best;
    }
  }
  return dp;
}

// Reconstructs the embedding chosen by run_maximin into heap-ordered words.
void extract_maximin_witness(const EdgeTree& t, double d, std::uint32_t n, const MaximinDp& dp,
                             const Reach& reach, std::vector<NodeId>& out, std::size_t word,
                             NodeId v, std::uint32_t j) {
  if (j == 0) {
    out[word] = reach.deepest[v];
    return;
  }
  // Find the branch point for M_j(v).
  NodeId b = v;
  while (dp.via[j][b] != kNoNode) b = dp.via[j][b];
  out[word] = b;
  // Top-two children by A_{j-1}.
  const auto& prev = dp.A[j - 1];
  NodeId c1 = kNoNode, c2 = kNoNode;
  double m1 = kNegInf, m2 = kNegInf;
  for (NodeId c : t.tree.children(b)) {
    const double x = prev[c];
    if (x > m1) {
      m2 = m1;
      c2 = c1;
      m1 = x;
      c1 = c;
    } else if (x > m2) {
      m2 = x;
      c2 = c;
    }
  }
  (void)d;
  extract_maximin_witness(t, d, n, dp, reach, out, 2 * word, c1, j - 1);
  extract_maximin_witness(t, d, n, dp, reach, out, 2 * word + 1, c2, j - 1);
}

DilationResult dilation_equal_kn(const EdgeTree& t, const DilationQuery& q, bool want_witness) {
  const auto dp = run_maximin(t, q.base, q.n, want_witness);
  DilationResult out;
  const double a = dp.A[q.n][t.tree.root()];
  if (a == kNegInf) {
    out.value = 0.0;  // sup over the empty embedding set
    return out;
  }
  out.value = a / (static_cast<double>(q.n) + 1.0);
  if (want_witness) {
    const Reach reach = deepest_below(t);
    std::vector<NodeId> w(std::size_t{2} << q.n, kNoNode);
    extract_maximin_witness(t, q.base, q.n, dp, reach, w, 1, t.tree.root(), q.n);
    out.witness = std::move(w);
  }
  return out;
}

// ---------------------------------------------------------------------------
// General k <= n: binary search on the threshold t. For fixed t the
// constraints "sum up to depth j >= t (j+1) for all checkpoint depths j"
// become additive along paths, giving an exact slack DP:
//   slack(v, i) = best over embeddings of W_{n-i} in the component of v of
//                 min over checkpoints j in [max(k,i), n] of
//                 (local weighted sum to depth j) - t (j+1).
// Feasibility of t is slack(root, 0) >= 0.

struct SlackDp {
  std::vector<std::vector<double>> S;  // S[i][v] = slack(v, i)
  std::vector<std::vector<double>> G;  // auxiliary postorder maxima
  std::vector<std::vector<NodeId>> via;
};

SlackDp run_slack(const EdgeTree& t, const DilationQuery& q, double thr, bool track,
                  const Reach& reach, const std::vector<double>& dpow) {
  const std::size_t sz = t.tree.size();
  const std::uint32_t n = q.n;
  SlackDp dp;
  dp.S.assign(n + 1, std::vector<double>(sz, kNegInf));
  dp.G.assign(n + 1, std::vector<double>(sz, kNegInf));
  if (track) dp.via.assign(n + 1, std::vector<NodeId>(sz, kNoNode));
  for (NodeId v = 0; v < sz; ++v)
    dp.S[n][v] = dpow[n + 1] * (t.length[v] + reach.down[v]) -
                 thr * (static_cast<double>(n) + 1.0);
  for (std::uint32_t i = n; i-- > 0;) {
    auto& S = dp.S[i];
    auto& G = dp.G[i];
    const auto& next = dp.S[i + 1];
    const bool checkpoint = i >= q.k;
    for (NodeId v = static_cast<NodeId>(sz); v-- > 0;) {
      // psi(v): branch at v itself.
      double psi = kNegInf;
      if (t.tree.child_count(v) >= 2) {
        double m1 = kNegInf, m2 = kNegInf;
        for (NodeId c : t.tree.children(v)) {
          const double x = next[c];
          if (x > m1) {
            m2 = m1;
            m1 = x;
          } else if (x > m2) {
            m2 = x;
          }
        }
        if (m2 > kNegInf) {
          psi = m2;
          if (checkpoint) psi = std::min(psi, -thr * (static_cast<double>(i) + 1.0));
        }
      }
      double best = psi;
      NodeId via = kNoNode;
      for (NodeId c : t.tree.children(v)) {
        if (G[c] == kNegInf) continue;
        const double cand = dpow[i + 1] * t.length[c] + G[c];
        if (cand > best) {
          best = cand;
          via = c;
        }
      }
      G[v] = best;
      if (track) dp.via[i][v] = via;
      S[v] = best == kNegInf ? kNegInf : dpow[i + 1] * t.length[v] + best;
    }
  }
  return dp;
}

void extract_slack_witness(const EdgeTree& t, const DilationQuery& q, const SlackDp& dp,
                           const Reach& reach, std::vector<NodeId>& out, std::size_t word,
                           NodeId v, std::uint32_t i) {
  if (i == q.n) {
    out[word] = reach.deepest[v];
    return;
  }
  NodeId b = v;
  while (dp.via[i][b] != kNoNode) b = dp.via[i][b];
  out[word] = b;
  const auto& next = dp.S[i + 1];
  NodeId c1 = kNoNode, c2 = kNoNode;
  double m1 = kNegInf, m2 = kNegInf;
  for (NodeId c : t.tree.children(b)) {
    const double x = next[c];
    if (x > m1) {
      m2 = m1;
      c2 = c1;
      m1 = x;
      c1 = c;
    } else if (x > m2) {
      m2 = x;
      c2 = c;
    }
  }
  extract_slack_witness(t, q, dp, reach, out, 2 * word, c1, i + 1);
  extract_slack_witness(t, q, dp, reach, out, 2 * word + 1, c2, i + 1);
}

DilationResult dilation_general(const EdgeTree& t, const DilationQuery& q, bool want_witness) {
  const Reach reach = deepest_below(t);
  std::vector<double> dpow(q.n + 2);
  dpow[0] = 1.0;
  for (std::uint32_t j = 1; j <= q.n + 1; ++j) dpow[j] = dpow[j - 1] * q.base;

  DilationResult out;
  // Upper bound from the per-level geometric sum of the height.
  const double h = t.metric_height();
  double hi = h * (dpow[q.k + 1] * q.base - q.base) / ((q.k + 1.0) * (q.base - 1.0));
  hi = std::max(hi, 1e-300);
  const auto feasible = [&](double thr) {
    return run_slack(t, q, thr, false, reach, dpow).S[0][t.tree.root()] >= 0.0;
  };
  if (!feasible(0.0)) return out;  // no embedding of the n-perfect tree
  double lo = 0.0;
  if (feasible(hi)) {
    lo = hi;  // height bound is tight only up to rounding
  } else {
    for (int it = 0; it < 200 && hi - lo > 1e-10 * std::max(1.0, lo); ++it) {
      const double mid = 0.5 * (lo + hi);
      (feasible(mid) ? lo : hi) = mid;
    }
  }
  out.value = lo;
  if (want_witness) {
    const auto dp = run_slack(t, q, lo, true, reach, dpow);
    std::vector<NodeId> w(std::size_t{2} << q.n, kNoNode);
    extract_slack_witness(t, q, dp, reach, w, 1, t.tree.root(), 0);
    out.witness = std::move(w);
  }
  return out;
}

}  // namespace

DilationResult dilation(const EdgeTree& t, const DilationQuery& q, bool want_witness) {
  check_query(q);
  if (q.k == q.n) return dilation_equal_kn(t, q, want_witness);
  return dilation_general(t, q, want_witness);
}

double replay_dilation(const EdgeTree& t, const DilationQuery& q,
                       const std::vector<NodeId>& witness) {
  check_query(q);
  const std::size_t words = std::size_t{2} << q.n;
  if (witness.size() != words) throw std::invalid_argument("witness has the wrong arity");
  // Metric depth of every node from the planted root.
  std::vector<double> depth(t.tree.size());
  for (NodeId v = 0; v < t.tree.size(); ++v)
    depth[v] = (v == 0 ? 0.0 : depth[t.tree.parent(v)]) + t.length[v];
  // Ancestor check helper on node pairs.
  const auto depths_comb = t.tree.depths();
  auto is_ancestor = [&](NodeId a, NodeId b) {
    while (depths_comb[b] > depths_comb[a]) b = t.tree.parent(b);
    return a == b;
  };
  // Validate: injective, wedge-preserving along the heap structure.
  for (std::size_t w = 1; w < words; ++w) {
    if (witness[w] == kNoNode) throw std::invalid_argument("incomplete witness");
    for (std::size_t w2 = w + 1; w2 < words; ++w2)
      if (witness[w] == witness[w2]) throw std::invalid_argument("witness not injective");
    if (w >= 2 && !is_ancestor(witness[w / 2], witness[w]))
      throw std::invalid_argument("witness breaks the genealogy");
  }
  for (std::size_t w = 1; w < words / 2; ++w) {
    // children of w must lie in distinct components below witness[w]
    const NodeId b = witness[w];
    NodeId c1 = witness[2 * w], c2 = witness[2 * w + 1];
    auto step_child = [&](NodeId x) {
      while (t.tree.parent(x) != b) x = t.tree.parent(x);
      return x;
    };
    if (step_child(c1) == step_child(c2))
      throw std::invalid_argument("witness children share a component");
  }

  double dmul = q.base;
  std::vector<double> sum(words, 0.0);
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t level = 0; level <= q.n; ++level) {
    const std::size_t from = std::size_t{1} << level, to = std::size_t{2} << level;
    for (std::size_t w = from; w < to; ++w) {
      const double up = w == 1 ? 0.0 : depth[witness[w / 2]];
      sum[w] = (w == 1 ? 0.0 : sum[w / 2]) + dmul * (depth[witness[w]] - up);
      if (level >= q.k) best = std::min(best, sum[w] / (static_cast<double>(level) + 1.0));
    }
    dmul *= q.base;
  }
  return best;
}

DilationResult brute_force_dilation(const EdgeTree& t, const DilationQuery& q) {
  check_query(q);
  if (t.tree.size() > 14 || q.n > 3)
    throw std::invalid_argument("brute force limited to 14 nodes and n <= 3");
  const std::size_t sz = t.tree.size();
  const std::size_t words = std::size_t{2} << q.n;
  const auto depths_comb = t.tree.depths();
  std::vector<double> depth(sz);
  for (NodeId v = 0; v < sz; ++v)
    depth[v] = (v == 0 ? 0.0 : depth[t.tree.parent(v)]) + t.length[v];
  auto is_strict_ancestor = [&](NodeId a, NodeId b) {
    if (a == b) return false;
    while (depths_comb[b] > depths_comb[a]) {
      b = t.tree.parent(b);
      if (a == b) return true;
    }
    return false;
  };

  std::vector<NodeId> phi(words, kNoNode);
  DilationResult best;
  best.value = 0.0;

  // Assign words in heap order; each word ranges over the subtree of its
  // allowed component, siblings over distinct components of their parent.
  std::vector<double> dpow(q.n + 2);
  dpow[0] = 1.0;
  for (std::uint32_t j = 1; j <= q.n + 1; ++j) dpow[j] = dpow[j - 1] * q.base;

  // candidates[w]: all nodes in the subtree rooted at the component root.
  auto enumerate = [&](auto&& self, std::size_t w) -> void {
    if (w == words) {
      double value = std::numeric_limits<double>::infinity();
      std::vector<double> sum(words, 0.0);
      for (std::size_t x = 1; x < words; ++x) {
        const std::uint32_t level = static_cast<std::uint32_t>(std::bit_width(x)) - 1;
        const double up = x == 1 ? 0.0 : depth[phi[x / 2]];
        sum[x] = (x == 1 ? 0.0 : sum[x / 2]) + dpow[level + 1] * (depth[phi[x]] - up);
        if (level >= q.k)
          value = std::min(value, sum[x] / (static_cast<double>(level) + 1.0));
      }
      if (value > best.value) {
        best.value = value;
        best.witness = phi;
      }
      return;
    }
    const bool is_root_word = w == 1;
    for (NodeId v = 0; v < sz; ++v) {
      if (!is_root_word) {
        const NodeId pv = phi[w / 2];
        if (!is_strict_ancestor(pv, v)) continue;
        // sibling must sit in a different component below phi[w/2]
        if (w % 2 == 1) {
          const NodeId sib = phi[w - 1];
          NodeId a = v, b = sib;
          auto child_toward = [&](NodeId x) {
            while (t.tree.parent(x) != pv) x = t.tree.parent(x);
            return x;
          };
          if (child_toward(a) == child_toward(b)) continue;
        }
      }
      bool used = false;
      for (std::size_t x = 1; x < w; ++x) used |= phi[x] == v;
      if (used) continue;
      phi[w] = v;
      self(self, w + 1);
      phi[w] = kNoNode;
    }
  };
  enumerate(enumerate, 1);
  if (!best.witness) best.value = 0.0;
  return best;
}

EdgeTree dyadic_tree(double d, std::uint32_t depth) {
  if (!(d > 1.0)) throw std::invalid_argument("base must exceed 1");
  std::vector<double> level_len(depth + 1);
  double l = 1.0 / d;
  for (std::uint32_t j = 0; j <= depth; ++j) {
    level_len[j] = l;
    l /= d;
  }
  std::vector<std::uint32_t> counts;
  std::vector<double> lengths;
  // Preorder emission of the perfect binary tree.
  struct Frame {
    std::uint32_t level;
  };
  std::vector<Frame> stack{{0}};
  while (!stack.empty()) {
    const auto [level] = stack.back();
    stack.pop_back();
    counts.push_back(level == depth ? 0 : 2);
    lengths.push_back(level_len[level]);
    if (level < depth) {
      stack.push_back({level + 1});
      stack.push_back({level + 1});
    }
  }
  return make_edge(Tree::from_child_counts(counts), std::move(lengths));
}

// ---------------------------------------------------------------------------
// Truncated alpha=2 limit tree.

namespace {

struct LimitBuild {
  double eps;
  std::uint32_t cap;
  RngStream* rng;
  bool truncated = false;
  std::vector<std::uint32_t>* counts = nullptr;  // null for height-only runs
  std::vector<double>* lengths = nullptr;

  // Emits one copy of T* scaled by `scale`, whose root edge starts at the
  // attachment point; returns its height above that point. Grafts arrive in
  // ascending position via exponential gaps, so nothing is buffered.
  double emit(double scale, std::uint32_t depth) {
    if (depth >= cap) {
      truncated = true;
      return 0.0;
    }
    const double seg = rng->exponential(0.5);
    const double u_tip = rng->uniform(1.0, 2.0);
    const double s_left = scale / u_tip;
    const double s_right = scale / 2.0;
    const double xi_max = scale / (2.0 * eps);

    double height = seg * scale;
    double prev = 0.0;
    if (xi_max > 1.0) {
      // Poisson grafts along [0, seg] with rate 2 (xi_max - 1), xi uniform.
      // Each graft point becomes a chain vertex with children
      // [graft subtree, chain continuation]; cap-stopped grafts degenerate
      // to points and the vertex is skipped.
      const double mean_gap = 0.5 / (xi_max - 1.0);
      for (double pos = rng->exponential(mean_gap); pos < seg;
           pos += rng->exponential(mean_gap)) {
        const double xi = rng->uniform(1.0, xi_max);
        if (depth + 1 >= cap) {
          truncated = true;
          continue;
        }
        const double at = pos * scale;
        if (counts) {
          counts->push_back(2);
          lengths->push_back(at - prev);
        }
        prev = at;
        const double h = emit(scale / (2.0 * xi), depth + 1);
        height = std::max(height, at + h);
      }
    }
    // Tip vertex.
    const bool left_real = s_left >= eps && depth + 1 < cap;
    const bool right_real = s_right >= eps && depth + 1 < cap;
    if ((s_left >= eps || s_right >= eps) && depth + 1 >= cap) truncated = true;
    if (counts) {
      counts->push_back(static_cast<std::uint32_t>(left_real) +
                        static_cast<std::uint32_t>(right_real));
      lengths->push_back(seg * scale - prev);
    }
    if (left_real) height = std::max(height, seg * scale + emit(s_left, depth + 1));
    if (right_real) height = std::max(height, seg * scale + emit(s_right, depth + 1));
    return height;
  }
};

}  // namespace

LimitTreeSample sample_hs2_limit(double eps_scale, std::uint32_t depth_cap, RngStream& rng) {
  if (!(eps_scale > 0.0 && eps_scale < 1.0))
    throw std::invalid_argument("eps_scale must lie in (0,1)");
  if (depth_cap == 0) throw std::invalid_argument("depth cap must be positive");
  std::vector<std::uint32_t> counts;
  std::vector<double> lengths;
  LimitBuild b{eps_scale, depth_cap, &rng};
  b.counts = &counts;
  b.lengths = &lengths;
  b.emit(1.0, 0);
  LimitTreeSample out{make_edge(Tree::from_child_counts(counts), std::move(lengths)),
                      b.truncated};
  return out;
}

LimitHeightSample sample_hs2_limit_height(double eps_scale, std::uint32_t depth_cap,
                                          RngStream& rng) {
  if (!(eps_scale > 0.0 && eps_scale < 1.0))
    throw std::invalid_argument("eps_scale must lie in (0,1)");
  if (depth_cap == 0) throw std::invalid_argument("depth cap must be positive");
  LimitBuild b{eps_scale, depth_cap, &rng};
  const double h = b.emit(1.0, 0);
  return {h, b.truncated};
}

}  // namespace strahler
