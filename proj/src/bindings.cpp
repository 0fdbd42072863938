#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "strahler/dilation.hpp"
#include "strahler/exact.hpp"
#include "strahler/marchal.hpp"
#include "strahler/offspring.hpp"
#include "strahler/pruning.hpp"
#include "strahler/sampling.hpp"
#include "strahler/serialize.hpp"
#include "strahler/stats.hpp"
#include "strahler/strahler.hpp"
#include "strahler/tree.hpp"

namespace py = pybind11;
using namespace strahler;

namespace {

Tree tree_from_counts(const std::vector<std::uint32_t>& counts) {
  return Tree::from_child_counts(counts);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "alpha-stable Galton-Watson tree laboratory (C++ core)";

  py::class_<Tree>(m, "Tree")
      .def(py::init(&tree_from_counts), py::arg("child_counts"))
      .def_property_readonly("size", &Tree::size)
      .def_property_readonly("child_counts",
                             [](const Tree& t) { return t.child_counts(); })
      .def("leaf_count", &Tree::leaf_count)
      .def("height", &Tree::height)
      .def("parent", [](const Tree& t, NodeId v) { return t.parent(v); })
      .def("children",
           [](const Tree& t, NodeId v) {
             const auto c = t.children(v);
             return std::vector<NodeId>(c.begin(), c.end());
           })
      .def("__eq__", [](const Tree& a, const Tree& b) { return a == b; })
      .def("__repr__", [](const Tree& t) {
        return "<Tree with " + std::to_string(t.size()) + " nodes>";
      });

  py::class_<WeightedTree>(m, "WeightedTree")
      .def(py::init([](const std::vector<std::uint32_t>& counts,
                       const std::vector<double>& weights) {
             return make_weighted(tree_from_counts(counts), weights);
           }),
           py::arg("child_counts"), py::arg("leaf_weights"))
      .def_readonly("tree", &WeightedTree::tree)
      .def("leaf_weights", &WeightedTree::leaf_weights_depth_first);

  py::class_<EdgeTree>(m, "EdgeTree")
      .def(py::init([](const std::vector<std::uint32_t>& counts,
                       const std::vector<double>& lengths) {
             return make_edge(tree_from_counts(counts), lengths);
           }),
           py::arg("child_counts"), py::arg("lengths"))
      .def_readonly("tree", &EdgeTree::tree)
      .def_readonly("lengths", &EdgeTree::length)
      .def("total_length", &EdgeTree::total_length)
      .def("metric_height", &EdgeTree::metric_height);

  py::class_<WeightedEdgeTree>(m, "WeightedEdgeTree")
      .def(py::init([](const std::vector<std::uint32_t>& counts,
                       const std::vector<double>& lengths,
                       const std::vector<double>& weights) {
             return make_weighted_edge(tree_from_counts(counts), lengths, weights);
           }),
           py::arg("child_counts"), py::arg("lengths"), py::arg("leaf_weights"))
      .def_readonly("tree", &WeightedEdgeTree::tree)
      .def_readonly("lengths", &WeightedEdgeTree::length)
      .def("leaf_weights",
           [](const WeightedEdgeTree& t) { return t.shape().leaf_weights_depth_first(); });

  py::class_<RngStream>(m, "RngStream")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream") = 0)
      .def("u01", &RngStream::u01)
      .def("exponential", &RngStream::exponential)
      .def("fexp", &RngStream::fexp);

  py::class_<StableOffspring>(m, "StableOffspring")
      .def(py::init<double, std::uint32_t>(), py::arg("alpha"),
           py::arg("initial_cutoff") = 4096)
      .def_property_readonly("alpha", &StableOffspring::alpha)
      .def_property_readonly("gamma", &StableOffspring::gamma)
      .def_property_readonly("delta", &StableOffspring::delta)
      .def("pmf", &StableOffspring::pmf)
      .def("cdf", &StableOffspring::cdf)
      .def("tail_mass", &StableOffspring::tail_mass)
      .def("sample", [](const StableOffspring& law, RngStream& rng) { return law.sample(rng); });

  m.def("sample_fexp", &sample_fexp, py::arg("gamma"), py::arg("rng"));
  m.def("sample_gw", &sample_gw, py::arg("law"), py::arg("rng"),
        py::arg("node_cap") = kDefaultNodeCap);
  m.def("sample_gw_weighted", &sample_gw_weighted, py::arg("law"), py::arg("rng"),
        py::arg("node_cap") = kDefaultNodeCap);
  m.def("sample_gw_edge", &sample_gw_edge, py::arg("law"), py::arg("rng"),
        py::arg("node_cap") = kDefaultNodeCap);
  m.def("sample_conditioned_size", &sample_conditioned_size, py::arg("law"), py::arg("n"),
        py::arg("rng"));
  m.def(
      "sample_conditioned_strahler",
      [](const StableOffspring& law, double x, double eps, RngStream& rng,
         std::uint64_t max_attempts) {
        const auto res = sample_conditioned_strahler(law, x, eps, rng, max_attempts);
        return py::make_tuple(res.tree ? py::cast(*res.tree) : py::none(), res.attempts);
      },
      py::arg("law"), py::arg("x"), py::arg("eps"), py::arg("rng"),
      py::arg("max_attempts") = 1'000'000);

  m.def("horton_strahler", &horton_strahler);
  py::class_<StrahlerValue>(m, "StrahlerValue")
      .def_readonly("whole", &StrahlerValue::whole)
      .def_readonly("frac", &StrahlerValue::frac)
      .def_readonly("witness_leaf", &StrahlerValue::witness_leaf)
      .def_property_readonly("value", &StrahlerValue::value);
  m.def("weighted_strahler",
        [](const WeightedTree& t) { return weighted_strahler(t); });
  m.def("weighted_strahler_edge",
        [](const WeightedEdgeTree& t) { return weighted_strahler(t); });
  m.def("max_perfect_embedding", &max_perfect_embedding);

  m.def("height_function", [](const Tree& t) {
    const PathCode c = height_function(t);
    return py::make_tuple(c.time, c.value, c.lifetime);
  });
  m.def("contour_function", [](const Tree& t) {
    const PathCode c = contour_function(t);
    return py::make_tuple(c.time, c.value, c.lifetime);
  });
  m.def("edge_height_function", [](const EdgeTree& t) {
    const PathCode c = edge_height_function(t);
    return py::make_tuple(c.time, c.value, c.lifetime);
  });
  m.def("chain_contract", &chain_contract);
  m.def("graph_distance", &graph_distance);

  m.def("horton_prune", &horton_prune);
  py::class_<PruneOutput>(m, "PruneOutput")
      .def_readonly("pruned", &PruneOutput::pruned)
      .def_readonly("pruned_plain", &PruneOutput::pruned_plain)
      .def_readonly("erased_mass", &PruneOutput::erased_mass);
  m.def("weighted_prune", &weighted_prune, py::arg("tree"), py::arg("r"));

  m.def("marchal_grow", &marchal_grow, py::arg("alpha"), py::arg("leaves"), py::arg("rng"));

  py::class_<DilationResult>(m, "DilationResult")
      .def_readonly("value", &DilationResult::value)
      .def_readonly("witness", &DilationResult::witness);
  m.def(
      "dilation",
      [](const EdgeTree& t, double base, std::uint32_t k, std::uint32_t n, bool witness) {
        return dilation(t, DilationQuery{base, k, n}, witness);
      },
      py::arg("tree"), py::arg("base"), py::arg("k"), py::arg("n"),
      py::arg("want_witness") = false);
  m.def("brute_force_dilation",
        [](const EdgeTree& t, double base, std::uint32_t k, std::uint32_t n) {
          return brute_force_dilation(t, DilationQuery{base, k, n});
        });
  m.def("dyadic_tree", &dyadic_tree, py::arg("base"), py::arg("depth"));
  m.def(
      "sample_hs2_limit",
      [](double eps, std::uint32_t cap, RngStream& rng) {
        const auto s = sample_hs2_limit(eps, cap, rng);
        return py::make_tuple(s.tree, s.truncated);
      },
      py::arg("eps_scale"), py::arg("depth_cap"), py::arg("rng"));

  m.def("catalan", [](std::uint32_t n) { return catalan(n).str(); });
  m.def("strahler_count", [](std::uint32_t p, std::uint32_t max_n) {
    const StrahlerCountTable t = strahler_counts(max_n);
    std::vector<std::string> row;
    for (std::uint32_t n = 0; n <= max_n; ++n) row.push_back(t.count(p, n).str());
    return row;
  });
  m.def("closed_form_Rp", &closed_form_Rp);
  m.def("size_gf_given_strahler", &size_gf_given_strahler);
  m.def("size_gf_given_weighted", &size_gf_given_weighted);
  m.def("F_eval", &F_eval);

  py::class_<TestReport>(m, "TestReport")
      .def_readonly("name", &TestReport::name)
      .def_readonly("statistic", &TestReport::statistic)
      .def_readonly("p_value", &TestReport::p_value)
      .def_readonly("n_samples", &TestReport::n_samples)
      .def_readonly("pass_", &TestReport::pass)
      .def_readonly("notes", &TestReport::notes);
  m.def("ks_one_sample", [](std::vector<double> samples, const std::function<double(double)>& cdf) {
    return ks_one_sample(std::move(samples), cdf);
  });
  m.def("ks_two_sample", [](std::vector<double> a, std::vector<double> b) {
    return ks_two_sample(std::move(a), std::move(b));
  });
  m.def("chi_square", [](std::vector<std::uint64_t> obs, std::vector<double> expected) {
    return chi_square(std::move(obs), std::move(expected));
  });
  m.def("binomial_ci", &binomial_ci);

  m.def("to_json", [](const WeightedEdgeTree& t) { return to_json(TreeRecord::of(t)); });
  m.def("tree_from_json", [](const std::string& line) { return from_json(line).tree; });
}
