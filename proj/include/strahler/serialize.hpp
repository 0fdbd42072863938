#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "strahler/tree.hpp"

namespace strahler {

// One JSON value per tree: {"k":[child counts depth-first],
// "w":[leaf weights depth-first, optional], "l":[lengths depth-first,
// optional]}. JSONL (one object per line) for ensembles. This is the
// bit-exact interchange format used by every CLI command.
struct TreeRecord {
  Tree tree;
  std::optional<std::vector<double>> lengths;       // per node, depth-first
  std::optional<std::vector<double>> leaf_weights;  // per leaf, depth-first

  static TreeRecord plain(Tree t) { return {std::move(t), std::nullopt, std::nullopt}; }
  static TreeRecord of(const WeightedTree& t);
  static TreeRecord of(const EdgeTree& t);
  static TreeRecord of(const WeightedEdgeTree& t);

  WeightedTree as_weighted() const;
  EdgeTree as_edge() const;
  WeightedEdgeTree as_weighted_edge() const;
};

std::string to_json(const TreeRecord& rec);
TreeRecord from_json(const std::string& line);

void write_jsonl(std::ostream& os, const TreeRecord& rec);
// Reads one record per non-empty line until EOF.
std::vector<TreeRecord> read_jsonl(std::istream& is);

}  // namespace strahler
