#include "strahler/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include "strahler/dilation.hpp"
#include "strahler/marchal.hpp"
#include "strahler/pruning.hpp"
#include "strahler/sampling.hpp"
#include "strahler/strahler.hpp"
#include "strahler/tree.hpp"

namespace strahler {

namespace {

// Distinct RNG stream blocks per sampling pass inside one experiment.
constexpr std::uint64_t kStreamBlock = std::uint64_t{1} << 20;

std::vector<std::uint64_t> split_counts(std::uint64_t total, std::uint32_t workers) {
  std::vector<std::uint64_t> out(workers, total / workers);
  for (std::uint64_t i = 0; i < total % workers; ++i) ++out[i];
  return out;
}

// Runs fn(worker, stream, quota) over the workers; results are merged in
// worker order so the outcome does not depend on scheduling.
template <typename Result, typename Fn>
std::vector<Result> run_parallel(const ExperimentConfig& cfg, std::uint64_t pass,
                                 std::uint64_t total, Fn fn) {
  const std::uint32_t workers = std::max(1u, cfg.workers);
  const auto quotas = split_counts(total, workers);
  std::vector<Result> results(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::uint32_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      RngStream rng(cfg.seed, pass * kStreamBlock + w);
      results[w] = fn(w, rng, quotas[w]);
    });
  }
  for (auto& t : threads) t.join();
  return results;
}

double exp_cdf(double rate, double x) { return x <= 0.0 ? 0.0 : -std::expm1(-rate * x); }

double fexp_cdf(double a, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return -std::expm1(-a * x) / -std::expm1(-a);
}

// ---------------------------------------------------------------------------
// Exact shape table: all trees without unary vertices up to max_nodes, with
// their GW_alpha probabilities prod mu(k_u). Used as chi-square classes; the
// leftover probability goes to an "other" bucket.

struct ShapeTable {
  std::map<std::string, std::size_t> index;  // shape key -> class id
  std::vector<double> prob;                  // per class
  double other = 0.0;                        // 1 - sum(prob)

  std::size_t classes() const { return prob.size() + 1; }
  std::size_t id_of(const Tree& t, std::size_t max_nodes) const {
    if (t.size() > max_nodes) return prob.size();
    const auto it = index.find(shape_key(t));
    return it == index.end() ? prob.size() : it->second;
  }
};

ShapeTable make_shape_table(const StableOffspring& law, std::size_t max_nodes) {
  ShapeTable table;
  double total = 0.0;
  for (const Tree& t : enumerate_trees_no_unary(max_nodes)) {
    double p = 1.0;
    for (std::uint32_t k : t.child_counts()) p *= law.pmf(k);
    if (p <= 0.0) continue;
    table.index.emplace(shape_key(t), table.prob.size());
    table.prob.push_back(p);
    total += p;
  }
  table.other = 1.0 - total;
  return table;
}

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<TestReport> verify_strahler_laws(const ExperimentConfig& cfg) {
  const StableOffspring law(cfg.alpha);
  const double gamma = law.gamma();
  std::vector<TestReport> reports;

  // (a) geometric law via streaming Strahler with early exit above n = 8.
  struct GeomAcc {
    std::array<std::uint64_t, 9> ge{};
    std::uint64_t capped = 0;
    std::uint64_t used = 0;
  };
  if (cfg.n_samples > 0) {
    auto parts = run_parallel<GeomAcc>(
        cfg, 0, cfg.n_samples, [&](std::uint32_t, RngStream& rng, std::uint64_t quota) {
          GeomAcc acc;
          for (std::uint64_t i = 0; i < quota; ++i) {
            const auto s = stream_strahler(law, rng, 9, cfg.node_cap);
            if (s.capped && !s.exited_early) {
              ++acc.capped;
              continue;
            }
            ++acc.used;
            const std::uint32_t v = s.exited_early ? 9u : s.strahler;
            for (std::uint32_t n = 0; n <= 8 && n <= v; ++n) ++acc.ge[n];
          }
          return acc;
        });
    GeomAcc acc;
    for (const auto& p : parts) {
      for (int i = 0; i < 9; ++i) acc.ge[i] += p.ge[i];
      acc.capped += p.capped;
      acc.used += p.used;
    }
    TestReport r;
    r.name = "laws_geometric_alpha=" + format_double(cfg.alpha);
    r.seed = cfg.seed;
    r.n_samples = acc.used;
    double worst = 0.0;
    bool ok = true;
    const double n_used = static_cast<double>(acc.used);
    for (std::uint32_t n = 0; n <= 8; ++n) {
      const double p = std::pow(1.0 - 1.0 / cfg.alpha, n);
      const double se = std::sqrt(std::max(p * (1.0 - p), 1e-300) / n_used);
      const double dev = std::fabs(static_cast<double>(acc.ge[n]) / n_used - p);
      if (n > 0) {  // n = 0 holds identically
        worst = std::max(worst, dev / se);
        ok = ok && dev <= 3.0 * se;
      }
    }
    r.statistic = worst;
    r.pass = ok;
    r.notes = "max |phat - (1-1/alpha)^n| / SE over n=1..8; pass iff <= 3; capped_excluded=" +
              std::to_string(acc.capped);
    reports.push_back(r);
  }

  // (b) + (c): exponential law of bS and floor/frac independence.
  struct WAcc {
    std::vector<double> bs;
    std::uint64_t capped = 0;
  };
  if (cfg.n_weighted > 0) {
    auto parts = run_parallel<WAcc>(
        cfg, 1, cfg.n_weighted, [&](std::uint32_t, RngStream& rng, std::uint64_t quota) {
          WAcc acc;
          acc.bs.reserve(quota);
          for (std::uint64_t i = 0; i < quota; ++i) {
            const auto s =
                stream_weighted_strahler(law, rng, cfg.node_cap, cfg.negative_control);
            if (s.capped) {
              ++acc.capped;
              continue;
            }
            acc.bs.push_back(s.weighted_strahler);
          }
          return acc;
        });
    std::vector<double> bs;
    std::uint64_t capped = 0;
    for (auto& p : parts) {
      bs.insert(bs.end(), p.bs.begin(), p.bs.end());
      capped += p.capped;
    }

    TestReport ks = ks_one_sample(
        bs, [gamma](double x) { return exp_cdf(gamma, x); },
        "laws_bS_exponential_alpha=" + format_double(cfg.alpha));
    ks.seed = cfg.seed;
    ks.notes += "; capped_excluded=" + std::to_string(capped);
    if (cfg.negative_control) {
      ks.name += "_negative_control";
      ks.pass = ks.p_value < 1e-6;
      ks.notes += "; control passes iff p < 1e-6";
    }
    reports.push_back(ks);

    // 5x5 grid: floor bucket {0,1,2,3,>=4} x frac quintile under FExp(gamma).
    std::vector<std::vector<std::uint64_t>> grid(5, std::vector<std::uint64_t>(5, 0));
    for (double v : bs) {
      const double fl = std::floor(v);
      const std::size_t row = static_cast<std::size_t>(std::min(fl, 4.0));
      const double u = fexp_cdf(gamma, v - fl);
      const std::size_t col = std::min<std::size_t>(4, static_cast<std::size_t>(u * 5.0));
      ++grid[row][col];
    }
    TestReport ind = chi_square_independence(
        grid, "laws_floor_frac_independence_alpha=" + format_double(cfg.alpha));
    ind.seed = cfg.seed;
    reports.push_back(ind);
  }
  return reports;
}

// ---------------------------------------------------------------------------

namespace {

struct PruneAcc {
  std::vector<double> lengths;                   // plain image total lengths
  std::vector<std::uint64_t> shape_counts;       // vs ShapeTable classes
  std::vector<std::uint64_t> weighted_counts;    // (shape, decile) classes
  std::uint64_t capped = 0;
  std::uint64_t rejected = 0;
};

constexpr std::size_t kShapeNodes = 7;

std::size_t weighted_class(const ShapeTable& table, const WeightedTree& wt, double gamma) {
  const std::size_t shape_id = table.id_of(wt.tree, kShapeNodes);
  if (shape_id == table.prob.size()) return table.prob.size() * 10;  // other
  double first_w = 0.0;
  for (NodeId v = 0; v < wt.tree.size(); ++v)
    if (wt.tree.is_leaf(v)) {
      first_w = wt.weight[v];
      break;
    }
  const std::size_t decile =
      std::min<std::size_t>(9, static_cast<std::size_t>(fexp_cdf(gamma, first_w) * 10.0));
  return shape_id * 10 + decile;
}

}  // namespace

std::vector<TestReport> verify_pruning_invariance(const ExperimentConfig& cfg) {
  const StableOffspring law(cfg.alpha);
  const double gamma = law.gamma();
  const double delta = law.delta();
  const double scale_r = cfg.negative_control ? 1.0 : std::pow(delta, cfg.r);
  const ShapeTable table = make_shape_table(law, kShapeNodes);
  const std::size_t n_weighted_classes = table.prob.size() * 10 + 1;

  // Side A: conditioned on bS >= r, pruned at r.
  auto collect_pruned = [&](std::uint64_t pass, double threshold, bool second_prune) {
    return run_parallel<PruneAcc>(
        cfg, pass, cfg.n_samples, [&, threshold, second_prune](std::uint32_t, RngStream& rng,
                                                               std::uint64_t quota) {
          PruneAcc acc;
          acc.shape_counts.assign(table.classes(), 0);
          acc.weighted_counts.assign(n_weighted_classes, 0);
          std::uint64_t accepted = 0;
          while (accepted < quota) {
            try {
              WeightedEdgeTree t = sample_gw_edge(law, rng, cfg.node_cap);
              const double bs = weighted_strahler(t).value();
              if (bs < threshold) {
                ++acc.rejected;
                continue;
              }
              ++accepted;
              PruneOutput out = weighted_prune(t, cfg.r);
              if (second_prune) out = weighted_prune(out.pruned, 1.0);
              acc.lengths.push_back(out.pruned_plain.total_length());
              ++acc.shape_counts[table.id_of(out.pruned_plain.tree, kShapeNodes)];
              ++acc.weighted_counts[weighted_class(table, out.pruned.shape(), gamma)];
            } catch (const CapExceeded&) {
              ++acc.capped;
            }
          }
          return acc;
        });
  };

  auto merge = [&](std::vector<PruneAcc> parts) {
    PruneAcc acc;
    acc.shape_counts.assign(table.classes(), 0);
    acc.weighted_counts.assign(n_weighted_classes, 0);
    for (auto& p : parts) {
      acc.lengths.insert(acc.lengths.end(), p.lengths.begin(), p.lengths.end());
      for (std::size_t i = 0; i < acc.shape_counts.size(); ++i)
        acc.shape_counts[i] += p.shape_counts[i];
      for (std::size_t i = 0; i < acc.weighted_counts.size(); ++i)
        acc.weighted_counts[i] += p.weighted_counts[i];
      acc.capped += p.capped;
      acc.rejected += p.rejected;
    }
    return acc;
  };

  // Fresh reference samples (lengths scaled by delta^r, shapes untouched).
  struct FreshAcc {
    std::vector<double> lengths;
    std::vector<std::uint64_t> weighted_counts;
    std::uint64_t capped = 0;
  };
  auto collect_fresh = [&](std::uint64_t pass, double length_scale, double threshold,
                           bool prune_once) {
    return run_parallel<FreshAcc>(
        cfg, pass, cfg.n_samples, [&, length_scale, threshold, prune_once](std::uint32_t,
                                                                           RngStream& rng,
                                                                           std::uint64_t quota) {
          FreshAcc acc;
          acc.weighted_counts.assign(n_weighted_classes, 0);
          std::uint64_t accepted = 0;
          while (accepted < quota) {
            try {
              WeightedEdgeTree t = sample_gw_edge(law, rng, cfg.node_cap);
              const double bs = weighted_strahler(t).value();
              if (bs < threshold) continue;
              ++accepted;
              if (prune_once) {
                PruneOutput out = weighted_prune(t, 1.0);
                acc.lengths.push_back(length_scale * out.pruned_plain.total_length());
                ++acc.weighted_counts[weighted_class(table, out.pruned.shape(), gamma)];
              } else {
                acc.lengths.push_back(length_scale * t.drop_weights().total_length());
                ++acc.weighted_counts[weighted_class(table, t.shape(), gamma)];
              }
            } catch (const CapExceeded&) {
              ++acc.capped;
            }
          }
          return acc;
        });
  };

  std::vector<TestReport> reports;
  const std::string tag =
      "_alpha=" + format_double(cfg.alpha) + "_r=" + format_double(cfg.r);

  PruneAcc a = merge(collect_pruned(0, cfg.r, false));

  FreshAcc b;
  {
    auto parts = collect_fresh(1, scale_r, -1.0, false);
    b.weighted_counts.assign(n_weighted_classes, 0);
    for (auto& p : parts) {
      b.lengths.insert(b.lengths.end(), p.lengths.begin(), p.lengths.end());
      for (std::size_t i = 0; i < b.weighted_counts.size(); ++i)
        b.weighted_counts[i] += p.weighted_counts[i];
      b.capped += p.capped;
    }
  }

  // (i) total length: KS of the plain image vs delta^r-scaled fresh trees.
  {
    TestReport ks = ks_two_sample(a.lengths, b.lengths, "pruning_length_ks" + tag);
    ks.seed = cfg.seed;
    ks.notes += "; capped_excluded=" + std::to_string(a.capped + b.capped);
    if (cfg.negative_control) {
      ks.name += "_negative_control";
      ks.pass = ks.p_value < kAlphaLevel;
      ks.notes += "; control passes iff the unscaled comparison is rejected";
    }
    reports.push_back(ks);
  }

  // (i) shape law of the plain image vs the exact GW shape probabilities.
  if (!cfg.negative_control) {
    std::vector<double> expected(table.prob);
    expected.push_back(table.other);
    TestReport chi = chi_square(a.shape_counts, expected, "pruning_shape_chi2" + tag);
    chi.seed = cfg.seed;
    reports.push_back(chi);
  }

  // (ii) weighted shape of Sha(bold R_r) vs the exact weighted-tree law.
  if (!cfg.negative_control) {
    std::vector<double> expected;
    expected.reserve(n_weighted_classes);
    for (double p : table.prob)
      for (int d = 0; d < 10; ++d) expected.push_back(p / 10.0);
    expected.push_back(table.other);
    TestReport chi =
        chi_square(a.weighted_counts, expected, "pruning_weighted_shape_chi2" + tag);
    chi.seed = cfg.seed;
    reports.push_back(chi);
  }

  // (iii) bold R_1 o R_r under bS >= 1+r vs delta^r . bold R_1 under bS >= 1.
  if (!cfg.negative_control) {
    PruneAcc a3 = merge(collect_pruned(2, 1.0 + cfg.r, true));
    FreshAcc b3;
    {
      auto parts = collect_fresh(3, scale_r, 1.0, true);
      b3.weighted_counts.assign(n_weighted_classes, 0);
      for (auto& p : parts) {
        b3.lengths.insert(b3.lengths.end(), p.lengths.begin(), p.lengths.end());
        for (std::size_t i = 0; i < b3.weighted_counts.size(); ++i)
          b3.weighted_counts[i] += p.weighted_counts[i];
        b3.capped += p.capped;
      }
    }
    TestReport ks = ks_two_sample(a3.lengths, b3.lengths, "pruning_R1Rr_length_ks" + tag);
    ks.seed = cfg.seed;
    reports.push_back(ks);

    std::vector<std::vector<std::uint64_t>> contingency(2);
    contingency[0] = a3.weighted_counts;
    contingency[1] = b3.weighted_counts;
    // Merge sparse columns to keep expectations sane.
    std::vector<std::vector<std::uint64_t>> merged(2);
    std::uint64_t tail0 = 0, tail1 = 0;
    for (std::size_t c = 0; c < n_weighted_classes; ++c) {
      if (contingency[0][c] + contingency[1][c] >= 10) {
        merged[0].push_back(contingency[0][c]);
        merged[1].push_back(contingency[1][c]);
      } else {
        tail0 += contingency[0][c];
        tail1 += contingency[1][c];
      }
    }
    merged[0].push_back(tail0);
    merged[1].push_back(tail1);
    TestReport chi = chi_square_independence(merged, "pruning_R1Rr_weighted_chi2" + tag);
    chi.seed = cfg.seed;
    reports.push_back(chi);
  }

  return reports;
}

// ---------------------------------------------------------------------------

std::vector<TestReport> verify_tail_asymptotics(const ExperimentConfig& cfg) {
  const StableOffspring law(cfg.alpha);
  const double alpha = cfg.alpha;
  const double beta = law.beta();
  const double gamma = law.gamma();
  std::vector<TestReport> reports;
  const std::string tag = "_alpha=" + format_double(alpha);

  if (alpha == 2.0) {
    // Exact leaf-count law: P(#tau = 2n-1) = 2^{1-2n} Catalan(n-1), checked
    // against the cycle-lemma expression (1/(2n-1)) C(2n-1, n) 2^{1-2n}.
    bool ok = true;
    for (std::uint64_t n = 1; n <= 20; ++n) {
      auto binom = [](std::uint64_t nn, std::uint64_t kk) {
        std::uint64_t num = 1, den = 1;
        // safe below 2^63 for nn <= 40
        __int128 acc = 1;
        for (std::uint64_t i = 1; i <= kk; ++i) acc = acc * (nn - kk + i) / i;
        (void)num;
        (void)den;
        return static_cast<std::uint64_t>(acc);
      };
      const std::uint64_t lhs = binom(2 * n - 1, n) * n;
      const std::uint64_t rhs = binom(2 * n - 2, n - 1) * (2 * n - 1);
      ok = ok && lhs == rhs;
    }
    TestReport r;
    r.name = "tails_exact_leaf_formula_alpha=2";
    r.seed = cfg.seed;
    r.statistic = ok ? 0.0 : 1.0;
    r.pass = ok;
    r.n_samples = 20;
    r.notes = "cycle-lemma count vs 2^{1-2n} Catalan(n-1), n <= 20, zero tolerance";
    reports.push_back(r);
  }

  struct HitAcc {
    std::uint64_t hits = 0;
  };
  auto mc_tail = [&](std::uint64_t pass, std::uint64_t n_samples, auto&& probe) {
    auto parts = run_parallel<HitAcc>(
        cfg, pass, n_samples, [&](std::uint32_t, RngStream& rng, std::uint64_t quota) {
          HitAcc acc;
          for (std::uint64_t i = 0; i < quota; ++i) acc.hits += probe(rng) ? 1 : 0;
          return acc;
        });
    std::uint64_t hits = 0;
    for (const auto& p : parts) hits += p.hits;
    return static_cast<double>(hits) / static_cast<double>(n_samples);
  };

  auto tail_report = [&](const std::string& name, double estimate, double target,
                         double rel_tol, std::uint64_t n) {
    TestReport r;
    r.name = name;
    r.seed = cfg.seed;
    r.n_samples = n;
    r.statistic = std::fabs(estimate / target - 1.0);
    r.pass = r.statistic <= rel_tol;
    r.notes = "estimate=" + format_double(estimate) + " target=" + format_double(target) +
              " declared rel tol=" + format_double(rel_tol) + " (asymptotic constant)";
    return r;
  };

  const double size_const = std::pow(alpha, 1.0 / alpha) / std::tgamma(1.0 - 1.0 / alpha);
  std::uint64_t pass = 10;
  for (std::uint64_t thr : {std::uint64_t{1000}, std::uint64_t{10000}}) {
    const double phat = mc_tail(pass++, cfg.n_samples, [&](RngStream& rng) {
      return stream_size_reaches(law, rng, thr).reached;
    });
    reports.push_back(tail_report("tails_size_n=" + std::to_string(thr) + tag,
                                  std::pow(static_cast<double>(thr), 1.0 / alpha) * phat,
                                  size_const, 0.15, cfg.n_samples));
  }

  {
    // Height tail: heavier for small alpha, so the threshold shrinks and the
    // tolerance loosens as declared in the experiment notes.
    const std::uint32_t thr = alpha < 2.0 ? 100 : 1000;
    const double tol = alpha < 2.0 ? 0.25 : 0.15;
    const std::uint64_t n = cfg.n_samples * (alpha < 2.0 ? 4 : 1);
    const double phat = mc_tail(pass++, n, [&](RngStream& rng) {
      return stream_height_reaches(law, rng, thr).reached;
    });
    reports.push_back(tail_report("tails_height_n=" + std::to_string(thr) + tag,
                                  std::pow(static_cast<double>(thr), beta) * phat,
                                  std::exp(gamma * beta), tol, n));
  }

  {
    const std::uint64_t thr = 1000;
    const double phat = mc_tail(pass++, cfg.n_samples, [&](RngStream& rng) {
      return stream_leaves_reaches(law, rng, thr).reached;
    });
    reports.push_back(tail_report("tails_leaves_n=" + std::to_string(thr) + tag,
                                  std::pow(static_cast<double>(thr), 1.0 / alpha) * phat,
                                  1.0 / std::tgamma(1.0 - 1.0 / alpha), 0.15, cfg.n_samples));
  }

  return reports;
}

// ---------------------------------------------------------------------------

std::vector<TestReport> verify_theorem_1_5(const ExperimentConfig& cfg) {
  if (cfg.alpha != 2.0) throw std::invalid_argument("theorem-1.5 check requires alpha = 2");
  const std::uint64_t n = cfg.big_n;
  if (n % 2 == 0) throw std::invalid_argument("vertex count must be odd at alpha = 2");
  const std::uint64_t leaves = (n + 1) / 2;
  const double a_n = std::pow(2.0, -0.5) * std::sqrt(static_cast<double>(n));
  const double norm = a_n / static_cast<double>(n);

  struct Acc {
    std::vector<double> x;  // 2 (a_n/n) 2^{bS}
    std::vector<double> y;  // (a_n/n) height
  };
  auto parts = run_parallel<Acc>(
      cfg, 0, cfg.n_samples, [&](std::uint32_t, RngStream& rng, std::uint64_t quota) {
        Acc acc;
        for (std::uint64_t i = 0; i < quota; ++i) {
          const WeightedTree wt = marchal_grow(2.0, leaves, rng);
          const double bs = weighted_strahler(wt).value();
          acc.x.push_back(2.0 * norm * std::pow(2.0, bs));
          acc.y.push_back(norm * static_cast<double>(wt.tree.height()));
        }
        return acc;
      });
  std::vector<double> xs, ys;
  for (auto& p : parts) {
    xs.insert(xs.end(), p.x.begin(), p.x.end());
    ys.insert(ys.end(), p.y.begin(), p.y.end());
  }

  std::vector<TestReport> reports;
  {
    TestReport r;
    r.name = "theorem15_ks_n=" + std::to_string(n);
    r.seed = cfg.seed;
    r.n_samples = xs.size() + ys.size();
    r.statistic = ks_distance(xs, ys);
    r.pass = r.statistic < 0.08;
    r.notes = "two-sample KS distance between 2 (a_n/n) 2^{bS} and (a_n/n) |tau|; "
              "pass iff < 0.08 (declared finite-n tolerance)";
    reports.push_back(r);
  }
  {
    std::vector<double> xs_half(xs);
    for (double& v : xs_half) v *= 0.5;  // drop the factor 2
    TestReport r;
    r.name = "theorem15_negative_control_n=" + std::to_string(n);
    r.seed = cfg.seed;
    r.n_samples = xs_half.size() + ys.size();
    r.statistic = ks_distance(xs_half, ys);
    r.pass = r.statistic > 0.2;
    r.notes = "factor-2 dropped; control passes iff KS distance > 0.2";
    reports.push_back(r);
  }
  {
    // Monotone sanity along one Marchal chain.
    RngStream rng(cfg.seed, 7 * kStreamBlock);
    GrowthChain chain(2.0, rng);
    double prev = -1.0;
    std::uint64_t violations = 0;
    const std::uint64_t chain_leaves = std::min<std::uint64_t>(leaves, 2000);
    while (chain.leaves() < chain_leaves) {
      chain.step();
      const double bs = weighted_strahler(chain.current()).value();
      if (bs < prev) ++violations;
      prev = bs;
    }
    TestReport r;
    r.name = "theorem15_chain_monotone";
    r.seed = cfg.seed;
    r.n_samples = chain_leaves;
    r.statistic = static_cast<double>(violations);
    r.pass = violations == 0;
    r.notes = "bS never decreases along a Marchal chain; zero violations required";
    reports.push_back(r);
  }
  return reports;
}

// ---------------------------------------------------------------------------

std::vector<TestReport> verify_limit_tree(const ExperimentConfig& cfg) {
  if (cfg.alpha != 2.0) throw std::invalid_argument("limit-tree check requires alpha = 2");
  std::vector<TestReport> reports;

  struct HAcc {
    std::vector<double> h;
    std::uint64_t truncated = 0;
  };
  auto parts = run_parallel<HAcc>(
      cfg, 0, cfg.n_samples, [&](std::uint32_t, RngStream& rng, std::uint64_t quota) {
        HAcc acc;
        acc.h.reserve(quota);
        for (std::uint64_t i = 0; i < quota; ++i) {
          const auto s = sample_hs2_limit_height(cfg.eps, cfg.depth_cap, rng);
          acc.h.push_back(s.height);
          acc.truncated += s.truncated ? 1 : 0;
        }
        return acc;
      });
  std::vector<double> h;
  std::uint64_t truncated = 0;
  for (auto& p : parts) {
    h.insert(h.end(), p.h.begin(), p.h.end());
    truncated += p.truncated;
  }
  std::sort(h.begin(), h.end());
  const double n = static_cast<double>(h.size());

  {
    // P(h < x) <= 1 - e^{-4x} at every empirical quantile, 3 SE slack.
    double worst = -1e300;
    bool ok = true;
    for (std::size_t i = 0; i < h.size(); ++i) {
      const double phat = static_cast<double>(i) / n;  // P^(h < h_(i))
      const double bound = -std::expm1(-4.0 * h[i]);
      const double se = std::sqrt(std::max(bound * (1.0 - bound), 1e-300) / n);
      worst = std::max(worst, (phat - bound) / std::max(se, 1e-300));
      ok = ok && phat <= bound + 3.0 * se;
    }
    TestReport r;
    r.name = "limit_height_lower_bound";
    r.seed = cfg.seed;
    r.n_samples = h.size();
    r.statistic = worst;
    r.pass = ok;
    r.notes = "P(h<x) <= 1-e^{-4x} at all empirical quantiles, 3 SE slack; truncated=" +
              std::to_string(truncated);
    reports.push_back(r);
  }
  {
    // P(h > y) <= e^{-y/40} from y0 on (the bound holds for large heights).
    double worst = -1e300;
    bool ok = true;
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (h[i] < cfg.y0) continue;
      const double phat = (n - static_cast<double>(i + 1)) / n;  // P^(h > h_(i))
      const double bound = std::exp(-h[i] / 40.0);
      const double se = std::sqrt(std::max(bound * (1.0 - bound), 1e-300) / n);
      worst = std::max(worst, (phat - bound) / std::max(se, 1e-300));
      ok = ok && phat <= bound + 3.0 * se;
    }
    TestReport r;
    r.name = "limit_height_upper_bound";
    r.seed = cfg.seed;
    r.n_samples = h.size();
    r.statistic = worst;
    r.pass = ok;
    r.notes = "P(h>y) <= e^{-y/40} at empirical quantiles with y >= y0=" + format_double(cfg.y0) +
              " (the bound is stated for large heights)";
    reports.push_back(r);
  }

  {
    // Dilation medians at d = 2, k = n, n in {4,6,8} on a subsample, plus
    // descriptive values at d in {1.2, 4}.
    struct DAcc {
      std::vector<double> v4, v6, v8, low, high;
    };
    auto dparts = run_parallel<DAcc>(
        cfg, 1, cfg.n_dilation, [&](std::uint32_t, RngStream& rng, std::uint64_t quota) {
          DAcc acc;
          for (std::uint64_t i = 0; i < quota; ++i) {
            const auto sample = sample_hs2_limit(cfg.eps, cfg.depth_cap, rng);
            acc.v4.push_back(dilation(sample.tree, {2.0, 4, 4}, false).value);
            acc.v6.push_back(dilation(sample.tree, {2.0, 6, 6}, false).value);
            acc.v8.push_back(dilation(sample.tree, {2.0, 8, 8}, false).value);
            acc.low.push_back(dilation(sample.tree, {1.2, 6, 6}, false).value);
            acc.high.push_back(dilation(sample.tree, {4.0, 6, 6}, false).value);
          }
          return acc;
        });
    DAcc acc;
    for (auto& p : dparts) {
      acc.v4.insert(acc.v4.end(), p.v4.begin(), p.v4.end());
      acc.v6.insert(acc.v6.end(), p.v6.begin(), p.v6.end());
      acc.v8.insert(acc.v8.end(), p.v8.begin(), p.v8.end());
      acc.low.insert(acc.low.end(), p.low.begin(), p.low.end());
      acc.high.insert(acc.high.end(), p.high.begin(), p.high.end());
    }
    auto median = [](std::vector<double> v) {
      std::sort(v.begin(), v.end());
      return v[v.size() / 2];
    };
    const double m4 = median(acc.v4), m6 = median(acc.v6), m8 = median(acc.v8);
    TestReport r;
    r.name = "limit_dilation_trajectory";
    r.seed = cfg.seed;
    r.n_samples = acc.v4.size();
    r.statistic = m8;
    r.pass = m4 >= m6 && m6 >= m8;
    r.notes = "d=2 medians I^{n,n} at n=4,6,8: " + format_double(m4) + ", " + format_double(m6) +
              ", " + format_double(m8) + " (non-increasing required; no target asserted); " +
              "descriptive medians at n=6: d=1.2 -> " + format_double(median(acc.low)) +
              ", d=4 -> " + format_double(median(acc.high));
    reports.push_back(r);
  }
  return reports;
}

// ---------------------------------------------------------------------------

bool write_reports(const std::vector<TestReport>& reports, const std::string& out_dir,
                   const std::string& name) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  bool all_pass = true;

  std::ofstream json(fs::path(out_dir) / (name + ".json"));
  json << "[\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    json << "  " << reports[i].to_json() << (i + 1 < reports.size() ? "," : "") << "\n";
    all_pass = all_pass && reports[i].pass;
  }
  json << "]\n";

  std::ofstream csv(fs::path(out_dir) / (name + ".csv"));
  csv << TestReport::csv_header() << "\n";
  for (const auto& r : reports) csv << r.to_csv_line() << "\n";
  return all_pass;
}

}  // namespace strahler
