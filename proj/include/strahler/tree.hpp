#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace strahler {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

// Ordered rooted tree with index-based node storage. Node ids are dense and
// assigned in depth-first (preorder) order, so the depth-first enumeration of
// nodes is the identity permutation and the root is node 0. Immutable after
// construction.
class Tree {
 public:
  Tree() = default;

  // Builds a tree from its depth-first child-count coding. Throws
  // std::invalid_argument if the Lukasiewicz walk of the coding hits -1
  // early or never (malformed coding).
  static Tree from_child_counts(std::span<const std::uint32_t> counts);
  static Tree single_node() { return from_child_counts(std::vector<std::uint32_t>{0}); }

  std::size_t size() const { return child_count_.size(); }
  NodeId root() const { return 0; }

  NodeId parent(NodeId v) const { return parent_[v]; }
  std::uint32_t child_count(NodeId v) const { return child_count_[v]; }
  std::span<const NodeId> children(NodeId v) const {
    return {children_.data() + child_begin_[v], child_count_[v]};
  }
  bool is_leaf(NodeId v) const { return child_count_[v] == 0; }

  const std::vector<std::uint32_t>& child_counts() const { return child_count_; }

  // Depth of each node (root has depth 0).
  std::vector<std::uint32_t> depths() const;
  // Number of nodes in the subtree stemming from each node.
  std::vector<std::uint32_t> subtree_sizes() const;
  // Leaves in depth-first order.
  std::vector<NodeId> leaves() const;
  std::size_t leaf_count() const;
  // Combinatorial height max |u|.
  std::uint32_t height() const;

  // Subtree stemming from v, re-indexed depth-first.
  Tree subtree(NodeId v) const;

  bool operator==(const Tree& o) const { return child_count_ == o.child_count_; }

 private:
  std::vector<NodeId> parent_;
  std::vector<std::uint32_t> child_count_;
  std::vector<std::size_t> child_begin_;
  std::vector<NodeId> children_;
};

// Plain tree plus a weight in [0,1) on every leaf. weight[v] is meaningful
// only for leaves (NaN elsewhere).
struct WeightedTree {
  Tree tree;
  std::vector<double> weight;

  std::vector<double> leaf_weights_depth_first() const;
};

// Tree with a strictly positive length on every edge; length[v] is the length
// of the edge from v to its parent, length[root] being the planting edge.
struct EdgeTree {
  Tree tree;
  std::vector<double> length;

  double total_length() const;
  // Metric height: max over nodes of the summed length from the planted root.
  double metric_height() const;
};

struct WeightedEdgeTree {
  Tree tree;
  std::vector<double> length;
  std::vector<double> weight;

  EdgeTree drop_weights() const { return EdgeTree{tree, length}; }
  WeightedTree shape() const { return WeightedTree{tree, weight}; }
};

WeightedTree make_weighted(Tree t, std::vector<double> leaf_weights_df);
EdgeTree make_edge(Tree t, std::vector<double> lengths_df);
WeightedEdgeTree make_weighted_edge(Tree t, std::vector<double> lengths_df,
                                    std::vector<double> leaf_weights_df);

EdgeTree scale(const EdgeTree& t, double lambda);
WeightedEdgeTree scale(const WeightedEdgeTree& t, double lambda);

// Piecewise path coding with an explicit lifetime. Continuous codes
// interpolate affinely between breakpoints; cadlag codes ramp with unit slope
// from each breakpoint value until the next breakpoint time (and are 0 from
// the lifetime on).
struct PathCode {
  enum class Kind { Continuous, CadlagRamp };

  Kind kind = Kind::Continuous;
  std::vector<double> time;
  std::vector<double> value;
  double lifetime = 0.0;

  double at(double s) const;
  double sup() const;
  // Minimal representation: removes breakpoints carrying no information.
  PathCode normalized() const;
  bool operator==(const PathCode& o) const;
};

// Height function H(t): H_i = 1_{i<#t}|u_i|, affine between integer times,
// lifetime 1_{#t>=2} #t.
PathCode height_function(const Tree& t);

// Contour function: the depth of a unit-speed contour-exploring particle;
// lifetime max(0, 2#t-2). Slopes in {1,-1,0}.
PathCode contour_function(const Tree& t);
// The vertex visited by the contour exploration at each integer time.
std::vector<NodeId> contour_vertices(const Tree& t);

// Height function of a tree with edge lengths: a cadlag code whose i-th
// window has width length[u_i] and starts at the ancestral length sum of u_i;
// lifetime is the total length.
PathCode edge_height_function(const EdgeTree& t);

// Removes every vertex with exactly one child, summing lengths along the
// contracted chains. Leaves the edge height function unchanged.
EdgeTree chain_contract(const EdgeTree& t);

// d_gr(u,v) = |u|+|v|-2|u^v|. Throws on out-of-range ids.
std::uint32_t graph_distance(const Tree& t, NodeId u, NodeId v);

// Depth-first child-count coding as a compact hashable key.
std::string shape_key(const Tree& t);

// All trees with no unary vertex and at most max_nodes nodes (the support of
// critical stable GW trees restricted by size), in a deterministic order.
std::vector<Tree> enumerate_trees_no_unary(std::size_t max_nodes);

// All binary trees (every inner vertex has two children) with exactly the
// given leaf count.
std::vector<Tree> enumerate_binary_trees(std::size_t leaves);

}  // namespace strahler
