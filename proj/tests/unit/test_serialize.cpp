#include <sstream>

#include "doctest.h"
#include "strahler/sampling.hpp"
#include "strahler/serialize.hpp"

using namespace strahler;

TEST_CASE("json round trip is bit-exact on random trees") {
  const StableOffspring law(1.5);
  RngStream rng(91, 0);
  for (int i = 0; i < 200; ++i) {
    const WeightedEdgeTree t = sample_gw_edge(law, rng, 1 << 16);
    const TreeRecord rec = TreeRecord::of(t);
    const std::string line = to_json(rec);
    const TreeRecord back = from_json(line);
    CHECK(back.tree == rec.tree);
    CHECK(back.lengths == rec.lengths);
    CHECK(back.leaf_weights == rec.leaf_weights);
    CHECK(to_json(back) == line);
  }
}

TEST_CASE("plain, weighted, and edge records expose the right views") {
  const Tree cherry = Tree::from_child_counts(std::vector<std::uint32_t>{2, 0, 0});
  const std::string plain = to_json(TreeRecord::plain(cherry));
  CHECK(plain.find("\"w\"") == std::string::npos);
  CHECK(plain.find("\"l\"") == std::string::npos);
  const TreeRecord rec = from_json(R"({"k":[2,0,0],"w":[0.25,0.5],"l":[1.0,2.0,3.0]})");
  const WeightedEdgeTree t = rec.as_weighted_edge();
  CHECK(t.length == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(t.shape().leaf_weights_depth_first() == std::vector<double>{0.25, 0.5});
  CHECK_THROWS_AS(TreeRecord::plain(cherry).as_weighted(), std::invalid_argument);
  CHECK_THROWS_AS(from_json(R"({"k":[2,0]})"), std::invalid_argument);
}

TEST_CASE("jsonl streams round trip") {
  const StableOffspring law(2.0);
  RngStream rng(92, 0);
  std::ostringstream os;
  std::vector<TreeRecord> in;
  for (int i = 0; i < 20; ++i) {
    in.push_back(TreeRecord::of(sample_gw_weighted(law, rng, 1 << 16)));
    write_jsonl(os, in.back());
  }
  std::istringstream is(os.str());
  const auto out = read_jsonl(is);
  REQUIRE(out.size() == in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    CHECK(out[i].tree == in[i].tree);
    CHECK(out[i].leaf_weights == in[i].leaf_weights);
  }
}
