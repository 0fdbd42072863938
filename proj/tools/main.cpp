#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "strahler/dilation.hpp"
#include "strahler/exact.hpp"
#include "strahler/experiments.hpp"
#include "strahler/marchal.hpp"
#include "strahler/pruning.hpp"
#include "strahler/sampling.hpp"
#include "strahler/serialize.hpp"
#include "strahler/strahler.hpp"

using namespace strahler;

namespace {

std::vector<TreeRecord> load_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_jsonl(in);
}

int cmd_sample(double alpha, const std::string& kind, std::uint64_t count, std::uint64_t seed,
               std::uint64_t cap, std::int64_t size, std::int64_t leaves, double strahler_x,
               double strahler_eps, const std::string& out_path) {
  const StableOffspring law(alpha);
  RngStream rng(seed, 0);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open " + out_path);
  std::uint64_t failures = 0;

  auto attach_lengths = [&](const Tree& t) {
    std::vector<double> lengths;
    lengths.reserve(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) lengths.push_back(rng.exponential(1.0));
    return lengths;
  };
  auto attach_weights = [&](const Tree& t) {
    std::vector<double> w;
    for (std::size_t i = 0; i < t.size(); ++i)
      if (t.child_count(static_cast<NodeId>(i)) == 0) w.push_back(rng.fexp(law.gamma()));
    return w;
  };
  auto emit = [&](TreeRecord rec) { write_jsonl(out, rec); };

  for (std::uint64_t i = 0; i < count; ++i) {
    try {
      if (size >= 0) {
        Tree t = sample_conditioned_size(law, static_cast<std::uint64_t>(size), rng);
        if (kind == "plain") {
          emit(TreeRecord::plain(std::move(t)));
        } else if (kind == "weighted") {
          auto w = attach_weights(t);
          emit(TreeRecord::of(make_weighted(std::move(t), std::move(w))));
        } else {
          auto l = attach_lengths(t);
          auto w = attach_weights(t);
          emit(TreeRecord::of(make_weighted_edge(std::move(t), std::move(l), std::move(w))));
        }
      } else if (leaves >= 0) {
        WeightedTree wt = marchal_grow(alpha, static_cast<std::uint64_t>(leaves), rng);
        if (kind == "plain") {
          emit(TreeRecord::plain(wt.tree));
        } else if (kind == "weighted") {
          emit(TreeRecord::of(wt));
        } else {
          auto l = attach_lengths(wt.tree);
          emit(TreeRecord::of(WeightedEdgeTree{wt.tree, std::move(l), wt.weight}));
        }
      } else if (strahler_x > 0.0) {
        const auto res = sample_conditioned_strahler(law, strahler_x, strahler_eps, rng,
                                                     10'000'000, cap);
        if (!res.tree) {
          ++failures;
          continue;
        }
        if (kind == "plain") {
          emit(TreeRecord::plain(res.tree->tree));
        } else if (kind == "weighted") {
          emit(TreeRecord::of(*res.tree));
        } else {
          auto l = attach_lengths(res.tree->tree);
          emit(TreeRecord::of(WeightedEdgeTree{res.tree->tree, std::move(l), res.tree->weight}));
        }
      } else {
        if (kind == "plain") {
          emit(TreeRecord::plain(sample_gw(law, rng, cap)));
        } else if (kind == "weighted") {
          emit(TreeRecord::of(sample_gw_weighted(law, rng, cap)));
        } else {
          emit(TreeRecord::of(sample_gw_edge(law, rng, cap)));
        }
      }
    } catch (const CapExceeded& e) {
      ++failures;
      std::cerr << "sample " << i << ": node cap exceeded after " << e.nodes_generated
                << " nodes\n";
    }
  }
  if (failures > 0) {
    std::cerr << failures << " of " << count << " draws failed (truncation); "
              << "the output holds only completed samples\n";
    return 3;
  }
  return 0;
}

int cmd_analyze(const std::string& in_path, const std::string& out_path) {
  const auto records = load_jsonl(in_path);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open " + out_path);
  out << "size,leaves,height,S,bS,frac_witness\n";
  out.precision(17);
  for (const auto& rec : records) {
    out << rec.tree.size() << ',' << rec.tree.leaf_count() << ',' << rec.tree.height() << ','
        << horton_strahler(rec.tree) << ',';
    if (rec.leaf_weights) {
      const auto sv = weighted_strahler(rec.as_weighted());
      out << sv.value() << ',' << sv.frac;
    } else {
      out << ',';
    }
    out << '\n';
  }
  return 0;
}

int cmd_prune(const std::string& in_path, double r, bool classic,
              const std::string& out_path) {
  const auto records = load_jsonl(in_path);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open " + out_path);
  std::uint64_t skipped = 0;
  for (const auto& rec : records) {
    try {
      if (classic) {
        write_jsonl(out, TreeRecord::of(horton_prune(rec.as_edge())));
      } else {
        write_jsonl(out, TreeRecord::of(weighted_prune(rec.as_weighted_edge(), r).pruned));
      }
    } catch (const std::invalid_argument&) {
      ++skipped;  // bS < r (or S = 0): nothing would remain
    }
  }
  if (skipped > 0) std::cerr << skipped << " trees below the pruning threshold skipped\n";
  return 0;
}

int cmd_marchal(double alpha, std::uint64_t leaves, std::uint64_t count, std::uint64_t seed,
                bool trace, const std::string& out_path) {
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open " + out_path);
  if (trace) {
    RngStream rng(seed, 0);
    GrowthChain chain(alpha, rng);
    write_jsonl(out, TreeRecord::of(chain.current()));
    while (chain.leaves() < leaves) {
      chain.step();
      write_jsonl(out, TreeRecord::of(chain.current()));
    }
    return 0;
  }
  RngStream rng(seed, 0);
  for (std::uint64_t i = 0; i < count; ++i)
    write_jsonl(out, TreeRecord::of(marchal_grow(alpha, leaves, rng)));
  return 0;
}

int cmd_dilation(const std::string& in_path, double d, std::uint32_t k, std::uint32_t n,
                 const std::string& out_path) {
  const auto records = load_jsonl(in_path);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open " + out_path);
  out << "index,value\n";
  out.precision(17);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const EdgeTree t = records[i].as_edge();
    out << i << ',' << dilation(t, {d, k, n}, false).value << '\n';
  }
  return 0;
}

int cmd_limit_sim(double eps, std::uint32_t cap, std::uint64_t count, std::uint64_t seed,
                  const std::string& out_path) {
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open " + out_path);
  RngStream rng(seed, 0);
  std::uint64_t truncated = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto s = sample_hs2_limit(eps, cap, rng);
    truncated += s.truncated ? 1 : 0;
    write_jsonl(out, TreeRecord::of(s.tree));
  }
  if (truncated > 0)
    std::cerr << truncated << " of " << count << " samples hit the depth cap\n";
  return 0;
}

int cmd_exact_table(std::uint32_t max_n, const std::string& out_path) {
  const StrahlerCountTable table = strahler_counts(max_n);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open " + out_path);
  out << "p,n,count\n";
  for (std::uint32_t p = 0; p <= table.max_p(); ++p)
    for (std::uint32_t n = 0; n <= max_n; ++n)
      if (table.count(p, n) != 0) out << p << ',' << n << ',' << table.count(p, n) << '\n';
  return 0;
}

int cmd_exact_gf(const std::string& spec) {
  std::vector<double> vals;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
  if (vals.size() < 2 || vals.size() > 3)
    throw std::runtime_error("expected --gf s,p or --gf s,p,y");
  const double s = vals[0];
  const auto p = static_cast<std::uint32_t>(vals[1]);
  std::cout.precision(15);
  if (vals.size() == 2) {
    const double closed = size_gf_given_strahler(s, p);
    const StrahlerCountTable table = strahler_counts(400);
    double series = 0.0;
    for (std::uint32_t n = 0; n <= 400; ++n)
      series += static_cast<double>(table.count(p, n)) * std::pow(2.0, -(2.0 * n + 1.0)) *
                std::pow(s, 2.0 * n + 1.0);
    series /= std::pow(2.0, -static_cast<double>(p) - 1.0);
    std::cout << "E[s^size | S=p]   closed form: " << closed << "\n"
              << "                  table series: " << series << "\n"
              << "                  |difference|: " << std::fabs(closed - series) << "\n"
              << "R_p(s^2/4) closed form: " << closed_form_Rp(s * s / 4.0, p) << "\n";
  } else {
    const double y = vals[2];
    const double gw = size_gf_given_weighted(s, p, y);
    const double h = 1e-4;
    const double deriv = (F_eval(s, p + y + h) - F_eval(s, p + y - h)) / (2.0 * h);
    const double from_f = deriv / (std::log(2.0) * std::pow(2.0, -static_cast<double>(p) - y));
    std::cout << "E[s^size | bS=p+y]  closed form: " << gw << "\n"
              << "                    F-derivative: " << from_f << "\n"
              << "                    |difference|: " << std::fabs(gw - from_f) << "\n";
  }
  return 0;
}

int cmd_verify(const std::string& which, const ExperimentConfig& cfg,
               const std::string& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<TestReport> reports;
  if (which == "laws") {
    reports = verify_strahler_laws(cfg);
  } else if (which == "pruning") {
    reports = verify_pruning_invariance(cfg);
  } else if (which == "tails") {
    reports = verify_tail_asymptotics(cfg);
  } else if (which == "theorem15") {
    reports = verify_theorem_1_5(cfg);
  } else if (which == "limit") {
    reports = verify_limit_tree(cfg);
  } else {
    throw std::runtime_error("unknown experiment: " + which);
  }
  const bool ok = write_reports(reports, out_dir, which);
  for (const auto& r : reports)
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << "  stat=" << r.statistic
              << (r.p_value >= 0 ? "  p=" + std::to_string(r.p_value) : "") << "\n";
  const auto dt = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - t0);
  std::cerr << which << " wall time: " << dt.count() << " ms\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"alpha-stable Galton-Watson tree laboratory"};
  app.require_subcommand(1);

  // sample
  auto* sample = app.add_subcommand("sample", "draw GW trees, optionally conditioned");
  double alpha = 2.0;
  std::string kind = "plain";
  std::uint64_t count = 1, seed = 1, cap = kDefaultNodeCap;
  std::int64_t size = -1, leaves = -1;
  double strahler_x = -1.0, strahler_eps = 0.1;
  std::string out_path, in_path;
  sample->add_option("--alpha", alpha)->check(CLI::Range(1.0 + 1e-9, 2.0));
  sample->add_option("--kind", kind)->check(CLI::IsMember({"plain", "weighted", "edge"}));
  sample->add_option("--count", count);
  sample->add_option("--seed", seed);
  sample->add_option("--cap", cap);
  sample->add_option("--size", size, "condition on exactly this many nodes");
  sample->add_option("--leaves", leaves, "condition on exactly this many leaves");
  sample->add_option("--strahler", strahler_x, "condition on |bS - x| < eps");
  sample->add_option("--eps", strahler_eps);
  sample->add_option("--out", out_path)->required();

  // analyze
  auto* analyze = app.add_subcommand("analyze", "per-tree statistics as CSV");
  analyze->add_option("--in", in_path)->required();
  analyze->add_option("--out", out_path)->required();

  // prune
  auto* prune = app.add_subcommand("prune", "weighted or classic Horton pruning");
  double r = 0.5;
  bool classic = false;
  prune->add_option("--in", in_path)->required();
  prune->add_option("--r", r);
  prune->add_flag("--classic", classic);
  prune->add_option("--out", out_path)->required();

  // marchal
  auto* marchal = app.add_subcommand("marchal", "Marchal leaf-count growth chains");
  std::uint64_t m_leaves = 1;
  bool trace = false;
  marchal->add_option("--alpha", alpha)->check(CLI::Range(1.0 + 1e-9, 2.0));
  marchal->add_option("--leaves", m_leaves)->required();
  marchal->add_option("--count", count);
  marchal->add_option("--seed", seed);
  marchal->add_flag("--trace", trace, "emit every intermediate tree of one chain");
  marchal->add_option("--out", out_path)->required();

  // dilation
  auto* dil = app.add_subcommand("dilation", "finite Strahler dilation values");
  double d_base = 2.0;
  std::uint32_t q_k = 0, q_n = 0;
  dil->add_option("--in", in_path)->required();
  dil->add_option("--d", d_base)->check(CLI::Range(1.0 + 1e-9, 1e9));
  dil->add_option("--k", q_k);
  dil->add_option("--n", q_n);
  dil->add_option("--out", out_path)->required();

  // limit-sim
  auto* limit = app.add_subcommand("limit-sim", "truncated alpha=2 limit tree samples");
  double eps = 1e-3;
  std::uint32_t depth_cap = 400;
  limit->add_option("--eps", eps)->check(CLI::Range(1e-12, 1.0));
  limit->add_option("--cap", depth_cap);
  limit->add_option("--count", count);
  limit->add_option("--seed", seed);
  limit->add_option("--out", out_path)->required();

  // exact
  auto* exact = app.add_subcommand("exact", "alpha=2 closed-form analytics");
  std::int64_t table_n = -1;
  std::string gf;
  exact->add_option("--table", table_n, "emit R_{p,n} for n <= N as CSV");
  exact->add_option("--gf", gf, "three-way comparison at s,p or s,p,y");
  exact->add_option("--out", out_path);

  // verify
  auto* verify = app.add_subcommand("verify", "scripted verification experiments");
  std::string which, out_dir = "reports";
  ExperimentConfig cfg;
  verify->add_option("experiment", which)
      ->required()
      ->check(CLI::IsMember({"laws", "pruning", "tails", "theorem15", "limit"}));
  verify->add_option("--alpha", cfg.alpha)->check(CLI::Range(1.0 + 1e-9, 2.0));
  verify->add_option("--n", cfg.n_samples);
  verify->add_option("--n-weighted", cfg.n_weighted);
  verify->add_option("--seed", cfg.seed);
  verify->add_option("--workers", cfg.workers);
  verify->add_option("--cap", cfg.node_cap);
  verify->add_option("--r", cfg.r);
  verify->add_option("--eps", cfg.eps);
  verify->add_option("--depth-cap", cfg.depth_cap);
  verify->add_option("--big-n", cfg.big_n);
  verify->add_option("--n-dilation", cfg.n_dilation);
  verify->add_option("--y0", cfg.y0);
  verify->add_flag("--negative-control", cfg.negative_control);
  verify->add_option("--out", out_dir);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sample->parsed())
      return cmd_sample(alpha, kind, count, seed, cap, size, leaves, strahler_x, strahler_eps,
                        out_path);
    if (analyze->parsed()) return cmd_analyze(in_path, out_path);
    if (prune->parsed()) return cmd_prune(in_path, r, classic, out_path);
    if (marchal->parsed()) return cmd_marchal(alpha, m_leaves, count, seed, trace, out_path);
    if (dil->parsed()) return cmd_dilation(in_path, d_base, q_k, q_n, out_path);
    if (limit->parsed()) return cmd_limit_sim(eps, depth_cap, count, seed, out_path);
    if (exact->parsed()) {
      if (table_n >= 0) return cmd_exact_table(static_cast<std::uint32_t>(table_n), out_path);
      if (!gf.empty()) return cmd_exact_gf(gf);
      throw std::runtime_error("exact needs --table or --gf");
    }
    if (verify->parsed()) return cmd_verify(which, cfg, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
