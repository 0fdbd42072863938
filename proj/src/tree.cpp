#include "strahler/tree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace strahler {

Tree Tree::from_child_counts(std::span<const std::uint32_t> counts) {
  if (counts.empty()) throw std::invalid_argument("empty child-count coding");
  // The Lukasiewicz walk sum(c_j - 1) must first hit -1 at the last index.
  std::int64_t walk = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    walk += static_cast<std::int64_t>(counts[i]) - 1;
    if (walk == -1 && i + 1 != counts.size())
      throw std::invalid_argument("child-count coding ends early");
    if (walk < -1) throw std::invalid_argument("malformed child-count coding");
  }
  if (walk != -1) throw std::invalid_argument("child-count coding does not terminate");

  Tree t;
  const std::size_t n = counts.size();
  t.child_count_.assign(counts.begin(), counts.end());
  t.parent_.assign(n, kNoNode);
  t.child_begin_.assign(n, 0);
  for (std::size_t v = 1; v < n; ++v) t.child_begin_[v] = t.child_begin_[v - 1] + counts[v - 1];
  t.children_.assign(n - 1, 0);

  // Preorder pass: a stack of (node, children still to attach).
  std::vector<std::pair<NodeId, std::uint32_t>> stack;
  stack.reserve(64);
  std::vector<std::size_t> fill(t.child_begin_);
  for (NodeId v = 0; v < n; ++v) {
    if (v != 0) {
      while (stack.back().second == 0) stack.pop_back();
      const NodeId p = stack.back().first;
      --stack.back().second;
      t.parent_[v] = p;
      t.children_[fill[p]++] = v;
    }
    stack.emplace_back(v, counts[v]);
  }
  return t;
}

std::vector<std::uint32_t> Tree::depths() const {
  std::vector<std::uint32_t> d(size(), 0);
  for (NodeId v = 1; v < size(); ++v) d[v] = d[parent_[v]] + 1;
  return d;
}

std::vector<std::uint32_t> Tree::subtree_sizes() const {
  std::vector<std::uint32_t> s(size(), 1);
  for (NodeId v = static_cast<NodeId>(size()); v-- > 1;) s[parent_[v]] += s[v];
  return s;
}

std::vector<NodeId> Tree::leaves() const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < size(); ++v)
    if (is_leaf(v)) out.push_back(v);
  return out;
}

std::size_t Tree::leaf_count() const {
  std::size_t n = 0;
  for (NodeId v = 0; v < size(); ++v) n += is_leaf(v);
  return n;
}

std::uint32_t Tree::height() const {
  std::uint32_t h = 0;
  std::vector<std::uint32_t> d(size(), 0);
  for (NodeId v = 1; v < size(); ++v) {
    d[v] = d[parent_[v]] + 1;
    h = std::max(h, d[v]);
  }
  return h;
}

Tree Tree::subtree(NodeId v) const {
  if (v >= size()) throw std::out_of_range("node id out of range");
  const auto sizes = subtree_sizes();
  std::span<const std::uint32_t> span(child_count_.data() + v, sizes[v]);
  return from_child_counts(span);
}

std::vector<double> WeightedTree::leaf_weights_depth_first() const {
  std::vector<double> out;
  for (NodeId v = 0; v < tree.size(); ++v)
    if (tree.is_leaf(v)) out.push_back(weight[v]);
  return out;
}

double EdgeTree::total_length() const {
  double s = 0.0;
  for (double l : length) s += l;
  return s;
}

double EdgeTree::metric_height() const {
  std::vector<double> depth(tree.size());
  double h = 0.0;
  for (NodeId v = 0; v < tree.size(); ++v) {
    depth[v] = (v == 0 ? 0.0 : depth[tree.parent(v)]) + length[v];
    h = std::max(h, depth[v]);
  }
  return h;
}

namespace {

std::vector<double> expand_leaf_weights(const Tree& t, const std::vector<double>& leaf_df) {
  if (leaf_df.size() != t.leaf_count())
    throw std::invalid_argument("one weight per leaf required");
  std::vector<double> w(t.size(), std::numeric_limits<double>::quiet_NaN());
  std::size_t i = 0;
  for (NodeId v = 0; v < t.size(); ++v)
    if (t.is_leaf(v)) {
      if (!(leaf_df[i] >= 0.0 && leaf_df[i] < 1.0))
        throw std::invalid_argument("leaf weights must lie in [0,1)");
      w[v] = leaf_df[i++];
    }
  return w;
}

void check_lengths(const Tree& t, const std::vector<double>& l) {
  if (l.size() != t.size()) throw std::invalid_argument("one length per node required");
  for (double x : l)
    if (!(x > 0.0)) throw std::invalid_argument("edge lengths must be positive");
}

}  // namespace

WeightedTree make_weighted(Tree t, std::vector<double> leaf_weights_df) {
  auto w = expand_leaf_weights(t, leaf_weights_df);
  return WeightedTree{std::move(t), std::move(w)};
}

EdgeTree make_edge(Tree t, std::vector<double> lengths_df) {
  check_lengths(t, lengths_df);
  return EdgeTree{std::move(t), std::move(lengths_df)};
}

WeightedEdgeTree make_weighted_edge(Tree t, std::vector<double> lengths_df,
                                    std::vector<double> leaf_weights_df) {
  check_lengths(t, lengths_df);
  auto w = expand_leaf_weights(t, leaf_weights_df);
  return WeightedEdgeTree{std::move(t), std::move(lengths_df), std::move(w)};
}

EdgeTree scale(const EdgeTree& t, double lambda) {
  EdgeTree out = t;
  for (double& l : out.length) l *= lambda;
  return out;
}

WeightedEdgeTree scale(const WeightedEdgeTree& t, double lambda) {
  WeightedEdgeTree out = t;
  for (double& l : out.length) l *= lambda;
  return out;
}

double PathCode::at(double s) const {
  if (s < 0.0 || time.empty()) return 0.0;
  if (s >= lifetime) return 0.0;
  // Last breakpoint with time <= s.
  auto it = std::upper_bound(time.begin(), time.end(), s);
  if (it == time.begin()) return 0.0;
  const std::size_t i = static_cast<std::size_t>(it - time.begin()) - 1;
  if (kind == Kind::CadlagRamp) return value[i] + (s - time[i]);
  if (i + 1 == time.size()) return value[i];
  const double t0 = time[i], t1 = time[i + 1];
  if (t1 == t0) return value[i + 1];
  const double a = (s - t0) / (t1 - t0);
  return value[i] + a * (value[i + 1] - value[i]);
}

double PathCode::sup() const {
  double m = 0.0;
  for (std::size_t i = 0; i < value.size(); ++i) {
    double v = value[i];
    if (kind == Kind::CadlagRamp) {
      const double end = (i + 1 < time.size()) ? time[i + 1] : lifetime;
      v += std::max(0.0, end - time[i]);
    }
    m = std::max(m, v);
  }
  return m;
}

PathCode PathCode::normalized() const {
  PathCode out;
  out.kind = kind;
  out.lifetime = lifetime;
  for (std::size_t i = 0; i < time.size(); ++i) {
    if (!out.time.empty()) {
      if (kind == Kind::CadlagRamp) {
        // Drop a breakpoint continuing the previous ramp.
        if (value[i] == out.value.back() + (time[i] - out.time.back())) continue;
      } else {
        // Drop collinear interior breakpoints.
        if (out.time.size() >= 2) {
          const std::size_t k = out.time.size();
          const double t0 = out.time[k - 2], v0 = out.value[k - 2];
          const double t1 = out.time[k - 1], v1 = out.value[k - 1];
          if (t1 > t0) {
            const double slope = (v1 - v0) / (t1 - t0);
            if (v1 + slope * (time[i] - t1) == value[i]) {
              out.time.back() = time[i];
              out.value.back() = value[i];
              continue;
            }
          }
        }
      }
    }
    out.time.push_back(time[i]);
    out.value.push_back(value[i]);
  }
  return out;
}

bool PathCode::operator==(const PathCode& o) const {
  const PathCode a = normalized(), b = o.normalized();
  return a.kind == b.kind && a.lifetime == b.lifetime && a.time == b.time && a.value == b.value;
}

PathCode height_function(const Tree& t) {
  PathCode c;
  c.kind = PathCode::Kind::Continuous;
  const std::size_t n = t.size();
  const auto depth = t.depths();
  c.time.reserve(n + 1);
  c.value.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    c.time.push_back(static_cast<double>(i));
    c.value.push_back(static_cast<double>(depth[i]));
  }
  c.time.push_back(static_cast<double>(n));
  c.value.push_back(0.0);
  c.lifetime = n >= 2 ? static_cast<double>(n) : 0.0;
  return c;
}

std::vector<NodeId> contour_vertices(const Tree& t) {
  std::vector<NodeId> seq;
  seq.reserve(2 * t.size());
  // Explicit DFS: each edge is crossed once up, once down.
  struct Frame {
    NodeId v;
    std::uint32_t next_child;
  };
  std::vector<Frame> stack;
  stack.push_back({0, 0});
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next_child == 0) seq.push_back(f.v);
    if (f.next_child < t.child_count(f.v)) {
      const NodeId c = t.children(f.v)[f.next_child++];
      stack.push_back({c, 0});
    } else {
      stack.pop_back();
      if (!stack.empty()) seq.push_back(stack.back().v);
    }
  }
  return seq;
}

PathCode contour_function(const Tree& t) {
  const auto depth = t.depths();
  const auto seq = contour_vertices(t);
  PathCode c;
  c.kind = PathCode::Kind::Continuous;
  c.time.reserve(seq.size());
  c.value.reserve(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    c.time.push_back(static_cast<double>(i));
    c.value.push_back(static_cast<double>(depth[seq[i]]));
  }
  c.lifetime = t.size() >= 2 ? static_cast<double>(2 * t.size() - 2) : 0.0;
  return c;
}

PathCode edge_height_function(const EdgeTree& t) {
  const std::size_t n = t.tree.size();
  // anc[v] = summed length of the strict ancestors of v, parent first.
  std::vector<double> anc(n, 0.0);
  for (NodeId v = 1; v < n; ++v) anc[v] = anc[t.tree.parent(v)] + t.length[t.tree.parent(v)];

  PathCode c;
  c.kind = PathCode::Kind::CadlagRamp;
  c.time.reserve(n);
  c.value.reserve(n);
  double cum = 0.0;
  for (NodeId v = 0; v < n; ++v) {
    c.time.push_back(cum);
    c.value.push_back(anc[v]);
    cum += t.length[v];
  }
  c.lifetime = cum;
  return c;
}

EdgeTree chain_contract(const EdgeTree& t) {
  const std::size_t n = t.tree.size();
  // Kept vertices: child count != 1. They form the contracted tree, in the
  // same depth-first order.
  std::vector<NodeId> kept;
  std::vector<NodeId> kept_index(n, kNoNode);
  for (NodeId v = 0; v < n; ++v)
    if (t.tree.child_count(v) != 1) {
      kept_index[v] = static_cast<NodeId>(kept.size());
      kept.push_back(v);
    }
  std::vector<std::uint32_t> counts(kept.size());
  std::vector<double> lengths(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const NodeId v = kept[i];
    counts[i] = t.tree.child_count(v);
    // Sum lengths up the chain of unary ancestors, in root-to-v order.
    NodeId top = v;
    while (top != 0 && t.tree.child_count(t.tree.parent(top)) == 1) top = t.tree.parent(top);
    double l = t.length[top];
    for (NodeId u = top; u != v;) {
      u = t.tree.children(u)[0];
      l += t.length[u];
    }
    lengths[i] = l;
  }
  return make_edge(Tree::from_child_counts(counts), std::move(lengths));
}

std::uint32_t graph_distance(const Tree& t, NodeId u, NodeId v) {
  if (u >= t.size() || v >= t.size()) throw std::out_of_range("node id out of range");
  const auto depth = t.depths();
  std::uint32_t du = depth[u], dv = depth[v], d = 0;
  while (du > dv) {
    u = t.parent(u);
    --du;
    ++d;
  }
  while (dv > du) {
    v = t.parent(v);
    --dv;
    ++d;
  }
  while (u != v) {
    u = t.parent(u);
    v = t.parent(v);
    d += 2;
  }
  return d;
}

std::string shape_key(const Tree& t) {
  std::string key;
  key.reserve(t.size());
  for (std::uint32_t k : t.child_counts()) {
    if (k < 250) {
      key.push_back(static_cast<char>(k + 1));
    } else {
      key.push_back(static_cast<char>(251));
      key.append(std::to_string(k));
      key.push_back(static_cast<char>(252));
    }
  }
  return key;
}

namespace {

void codings_no_unary(std::size_t size, std::vector<std::vector<std::uint32_t>>& out) {
  if (size == 1) {
    out.push_back({0});
    return;
  }
  std::vector<std::vector<std::vector<std::uint32_t>>> by_size(size);
  for (std::size_t s = 1; s < size; ++s) codings_no_unary(s, by_size[s]);
  std::vector<std::uint32_t> current;
  // ordered compositions of size-1 into at least two subtree sizes
  auto rec = [&](auto&& self, std::size_t remaining, std::uint32_t parts) -> void {
    if (remaining == 0) {
      if (parts >= 2) {
        std::vector<std::uint32_t> coding{parts};
        coding.insert(coding.end(), current.begin(), current.end());
        out.push_back(std::move(coding));
      }
      return;
    }
    for (std::size_t s = 1; s <= remaining; ++s) {
      for (const auto& sub : by_size[s]) {
        const std::size_t before = current.size();
        current.insert(current.end(), sub.begin(), sub.end());
        self(self, remaining - s, parts + 1);
        current.resize(before);
      }
    }
  };
  rec(rec, size - 1, 0);
}

void binary_codings(std::size_t leaves, std::vector<std::vector<std::uint32_t>>& out) {
  if (leaves == 1) {
    out.push_back({0});
    return;
  }
  for (std::size_t l = 1; l < leaves; ++l) {
    std::vector<std::vector<std::uint32_t>> left, right;
    binary_codings(l, left);
    binary_codings(leaves - l, right);
    for (const auto& a : left)
      for (const auto& b : right) {
        std::vector<std::uint32_t> coding{2};
        coding.insert(coding.end(), a.begin(), a.end());
        coding.insert(coding.end(), b.begin(), b.end());
        out.push_back(std::move(coding));
      }
  }
}

}  // namespace

std::vector<Tree> enumerate_trees_no_unary(std::size_t max_nodes) {
  std::vector<Tree> out;
  for (std::size_t s = 1; s <= max_nodes; ++s) {
    std::vector<std::vector<std::uint32_t>> codings;
    codings_no_unary(s, codings);
    for (const auto& c : codings) out.push_back(Tree::from_child_counts(c));
  }
  return out;
}

std::vector<Tree> enumerate_binary_trees(std::size_t leaves) {
  std::vector<Tree> out;
  std::vector<std::vector<std::uint32_t>> codings;
  binary_codings(leaves, codings);
  for (const auto& c : codings) out.push_back(Tree::from_child_counts(c));
  return out;
}

}  // namespace strahler
