#include "strahler/strahler.hpp"

#include <algorithm>
#include <cmath>

namespace strahler {

namespace {

// Nodes in reverse depth-first order see all their children first, so a
// single backward sweep is a postorder evaluation.
template <typename Value, typename Leaf, typename Combine>
std::vector<Value> postorder_values(const Tree& t, Leaf leaf, Combine combine) {
  std::vector<Value> val(t.size());
  for (NodeId v = static_cast<NodeId>(t.size()); v-- > 0;) {
    if (t.is_leaf(v)) {
      val[v] = leaf(v);
    } else {
      val[v] = combine(v, val);
    }
  }
  return val;
}

}  // namespace

std::vector<std::uint32_t> strahler_per_node(const Tree& t) {
  return postorder_values<std::uint32_t>(
      t, [](NodeId) { return 0u; },
      [&](NodeId v, const std::vector<std::uint32_t>& val) {
        // Top two child values; with k >= 2 children the zero sentinels are
        // dominated by genuine values.
        std::uint32_t m1 = 0, m2 = 0;
        for (NodeId c : t.children(v)) {
          const std::uint32_t x = val[c];
          if (x > m1) {
            m2 = m1;
            m1 = x;
          } else if (x > m2) {
            m2 = x;
          }
        }
        if (t.child_count(v) == 1) return m1;
        return std::max(m1, m2 + 1);
      });
}

std::uint32_t horton_strahler(const Tree& t) { return strahler_per_node(t)[t.root()]; }

std::vector<double> weighted_strahler_per_node(const WeightedTree& t) {
  return postorder_values<double>(
      t.tree, [&](NodeId v) { return t.weight[v]; },
      [&](NodeId v, const std::vector<double>& val) {
        double m1 = -1.0, m2 = -1.0;
        for (NodeId c : t.tree.children(v)) {
          const double x = val[c];
          if (x > m1) {
            m2 = m1;
            m1 = x;
          } else if (x > m2) {
            m2 = x;
          }
        }
        if (t.tree.child_count(v) == 1) return m1;
        return std::max(m1, 1.0 + m2);
      });
}

StrahlerValue weighted_strahler(const WeightedTree& t) {
  const auto val = weighted_strahler_per_node(t);
  StrahlerValue out;
  // Walk down from the root following the child that realizes the value;
  // the fractional part is carried by some leaf weight along this path.
  NodeId v = t.tree.root();
  while (!t.tree.is_leaf(v)) {
    // The realizing child: if val[v] equals the largest child value, descend
    // there; otherwise val[v] = 1 + second largest, whose fractional part
    // matches, so descend to the runner-up.
    NodeId arg1 = kNoNode, arg2 = kNoNode;
    double m1 = -1.0, m2 = -1.0;
    for (NodeId c : t.tree.children(v)) {
      const double x = val[c];
      if (x > m1) {
        m2 = m1;
        arg2 = arg1;
        m1 = x;
        arg1 = c;
      } else if (x > m2) {
        m2 = x;
        arg2 = c;
      }
    }
    v = (t.tree.child_count(v) == 1 || val[v] == m1) ? arg1 : arg2;
  }
  out.witness_leaf = v;
  out.frac = t.weight[v];
  out.bs = val[t.tree.root()];
  out.whole = static_cast<std::uint32_t>(std::llround(out.bs - out.frac));
  return out;
}

std::uint32_t max_perfect_embedding(const Tree& t) {
  // m[v]: largest n such that the n-perfect binary tree embeds with its root
  // mapped exactly to v. best[v]: max of m over the subtree stemming from v.
  const std::size_t n = t.size();
  std::vector<std::uint32_t> m(n, 0), best(n, 0);
  for (NodeId v = static_cast<NodeId>(n); v-- > 0;) {
    if (t.is_leaf(v)) {
      m[v] = 0;
      best[v] = 0;
      continue;
    }
    // Root children go to distinct child components; each side may map
    // anywhere inside its component, so it contributes best-of-subtree + 1.
    std::uint32_t b1 = 0, b2 = 0;  // two largest best[c] among children
    bool have1 = false, have2 = false;
    std::uint32_t sub = 0;
    for (NodeId c : t.children(v)) {
      sub = std::max(sub, best[c]);
      const std::uint32_t x = best[c];
      if (!have1 || x > b1) {
        if (have1) {
          b2 = std::max(b2, b1);
          have2 = true;
        }
        b1 = x;
        have1 = true;
      } else if (!have2 || x > b2) {
        b2 = x;
        have2 = true;
      }
    }
    m[v] = have2 ? 1 + std::min(b1, b2) : 0;
    best[v] = std::max(sub, m[v]);
  }
  return best[t.root()];
}

}  // namespace strahler
