#include "strahler/serialize.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace strahler {

using nlohmann::json;

TreeRecord TreeRecord::of(const WeightedTree& t) {
  return {t.tree, std::nullopt, t.leaf_weights_depth_first()};
}

TreeRecord TreeRecord::of(const EdgeTree& t) { return {t.tree, t.length, std::nullopt}; }

TreeRecord TreeRecord::of(const WeightedEdgeTree& t) {
  return {t.tree, t.length, t.shape().leaf_weights_depth_first()};
}

WeightedTree TreeRecord::as_weighted() const {
  if (!leaf_weights) throw std::invalid_argument("record carries no leaf weights");
  return make_weighted(tree, *leaf_weights);
}

EdgeTree TreeRecord::as_edge() const {
  if (!lengths) throw std::invalid_argument("record carries no lengths");
  return make_edge(tree, *lengths);
}

WeightedEdgeTree TreeRecord::as_weighted_edge() const {
  if (!lengths || !leaf_weights)
    throw std::invalid_argument("record carries no lengths or no weights");
  return make_weighted_edge(tree, *lengths, *leaf_weights);
}

std::string to_json(const TreeRecord& rec) {
  json j;
  j["k"] = rec.tree.child_counts();
  if (rec.leaf_weights) j["w"] = *rec.leaf_weights;
  if (rec.lengths) j["l"] = *rec.lengths;
  return j.dump();
}

TreeRecord from_json(const std::string& line) {
  const json j = json::parse(line);
  TreeRecord rec;
  rec.tree = Tree::from_child_counts(j.at("k").get<std::vector<std::uint32_t>>());
  if (j.contains("w")) rec.leaf_weights = j["w"].get<std::vector<double>>();
  if (j.contains("l")) rec.lengths = j["l"].get<std::vector<double>>();
  return rec;
}

void write_jsonl(std::ostream& os, const TreeRecord& rec) { os << to_json(rec) << '\n'; }

std::vector<TreeRecord> read_jsonl(std::istream& is) {
  std::vector<TreeRecord> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    out.push_back(from_json(line));
  }
  return out;
}

}  // namespace strahler
