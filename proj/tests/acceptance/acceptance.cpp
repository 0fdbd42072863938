// Acceptance suite: one criterion per section, each printing a PASS/FAIL
// line with its headline numbers. Exit code = number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "strahler/dilation.hpp"
#include "strahler/exact.hpp"
#include "strahler/experiments.hpp"
#include "strahler/marchal.hpp"
#include "strahler/pruning.hpp"
#include "strahler/sampling.hpp"
#include "strahler/serialize.hpp"
#include "strahler/stats.hpp"
#include "strahler/strahler.hpp"

using namespace strahler;

namespace {

std::uint32_t hw_workers() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 4 : std::min(n, 16u);
}

// Minimal deterministic fan-out across workers (merged in worker order).
template <typename Result, typename Fn>
std::vector<Result> fan_out(std::uint64_t seed, std::uint64_t pass, std::uint64_t total,
                            Fn fn) {
  const std::uint32_t workers = hw_workers();
  std::vector<std::uint64_t> quota(workers, total / workers);
  for (std::uint64_t i = 0; i < total % workers; ++i) ++quota[i];
  std::vector<Result> results(workers);
  std::vector<std::thread> threads;
  for (std::uint32_t w = 0; w < workers; ++w)
    threads.emplace_back([&, w] {
      RngStream rng(seed, (pass << 20) + w);
      results[w] = fn(rng, quota[w]);
    });
  for (auto& t : threads) t.join();
  return results;
}

bool all_pass(const std::vector<TestReport>& reports, std::string& summary) {
  bool ok = true;
  std::ostringstream os;
  for (const auto& r : reports) {
    ok = ok && r.pass;
    if (!r.pass) os << " [" << r.name << " stat=" << r.statistic << " p=" << r.p_value << "]";
  }
  summary = os.str();
  return ok;
}

ExperimentConfig base_cfg(double alpha, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.alpha = alpha;
  cfg.seed = seed;
  cfg.workers = hw_workers();
  return cfg;
}

// --------------------------------------------------------------------------
// Criterion 1: geometric law of S at alpha in {1.3, 1.5, 2}, N = 1e6,
// P(S >= n) within 3 binomial SE of (1-1/alpha)^n for n <= 8.
bool criterion_geometric(std::ostream& out) {
  bool ok = true;
  for (double alpha : {1.3, 1.5, 2.0}) {
    ExperimentConfig cfg = base_cfg(alpha, 1);
    cfg.n_samples = 1'000'000;
    cfg.n_weighted = 0;
    cfg.node_cap = 100'000'000;
    const auto reports = verify_strahler_laws(cfg);
    std::string why;
    const bool pass = all_pass(reports, why);
    out << "  alpha=" << alpha << ": max|dev|/SE=" << reports[0].statistic
        << (pass ? "" : " FAIL" + why) << "\n";
    ok = ok && pass;
  }
  return ok;
}

// Criterion 2: exponential law of bS (KS, N = 1e5) and floor/frac
// independence chi-square, both at p > 0.01.
bool criterion_exponential(std::ostream& out) {
  ExperimentConfig cfg = base_cfg(2.0, 2);
  cfg.n_samples = 0;
  cfg.n_weighted = 100'000;
  cfg.node_cap = 100'000'000;
  const auto reports = verify_strahler_laws(cfg);
  std::string why;
  const bool pass = all_pass(reports, why);
  for (const auto& r : reports) out << "  " << r.name << ": p=" << r.p_value << "\n";
  if (!pass) out << "  FAIL" << why << "\n";
  return pass;
}

// Criterion 3: pruning identities on 1e4 random weighted edge trees plus the
// 32-node reference figure at r = 0.5.
bool criterion_pruning_identities(std::ostream& out) {
  const std::vector<std::uint32_t> shape = {3, 2, 3, 2, 0, 0, 0, 2, 2, 2, 0, 0, 0, 0, 1, 2,
                                            2, 0, 1, 0, 3, 0, 0, 0, 0, 3, 1, 0, 2, 0, 0, 0};
  const std::vector<double> lengths = {1.5, 3,   2,   4,   5, 1, 2,   2,   1.5, 3.5, 3.5,
                                       2,   2.5, 2.5, 3,   1, 2.5, 2, 2.5, 2,   4,   1,
                                       4,   2.5, 4,   1,   1.5, 2.5, 2,  4.5, 2,   5};
  const std::vector<double> weights = {0.3, 0.9, 0.7, 0.1, 0.0, 0.4, 0.3, 0.8, 0.5,
                                       0.0, 0.2, 0.2, 0.4, 0.3, 0.2, 0.6, 0.1};
  bool ok = true;
  {
    const auto fixture =
        make_weighted_edge(Tree::from_child_counts(shape), lengths, weights);
    const PruneOutput got = weighted_prune(fixture, 0.5);
    const std::vector<std::uint32_t> want_shape = {2, 2, 3, 0, 0, 0, 2, 2, 0, 0, 0, 0};
    const std::vector<double> want_len = {1.5, 3, 2, 5, 2, 7, 4, 2.5, 2, 4.5, 4, 5};
    const std::vector<double> want_w = {0.8, 0.2, 0.9, 0.3, 0.0, 0.7, 0.8};
    bool fig = got.pruned.tree.child_counts() == want_shape && got.pruned.length == want_len;
    const auto got_w = got.pruned.shape().leaf_weights_depth_first();
    fig = fig && got_w.size() == want_w.size();
    for (std::size_t i = 0; fig && i < want_w.size(); ++i)
      fig = std::fabs(got_w[i] - want_w[i]) <= 1e-12;
    out << "  reference figure at r=0.5: shapes+lengths exact, weights to 1e-12 -> "
        << (fig ? "ok" : "MISMATCH") << "\n";
    ok = ok && fig;
  }
  struct Acc {
    double worst_shift = 0.0;
    std::uint64_t unary = 0, r1_mismatch = 0, n = 0;
  };
  for (double alpha : {1.5, 2.0}) {
    const StableOffspring law(alpha);
    auto parts = fan_out<Acc>(3, alpha == 1.5 ? 0 : 1, 5000, [&](RngStream& rng,
                                                                 std::uint64_t quota) {
      Acc acc;
      const double rs[] = {0.3, 0.5, 0.85, 1.0};
      while (acc.n < quota) {
        const double r = rs[acc.n % 4];
        try {
          const WeightedEdgeTree t = sample_gw_edge(law, rng, 200'000);
          const double bs = weighted_strahler(t).value();
          if (bs < r) continue;
          const PruneOutput o = weighted_prune(t, r);
          acc.worst_shift = std::max(
              acc.worst_shift, std::fabs(weighted_strahler(o.pruned).value() - (bs - r)));
          for (NodeId v = 0; v < o.pruned.tree.size(); ++v)
            acc.unary += o.pruned.tree.child_count(v) == 1;
          if (r == 1.0 && horton_strahler(t.tree) >= 1) {
            const EdgeTree classic = horton_prune(t.drop_weights());
            if (!(o.pruned_plain.tree == classic.tree &&
                  o.pruned_plain.length == classic.length))
              ++acc.r1_mismatch;
          }
          ++acc.n;
        } catch (const CapExceeded&) {
        }
      }
      return acc;
    });
    Acc acc;
    for (const auto& p : parts) {
      acc.worst_shift = std::max(acc.worst_shift, p.worst_shift);
      acc.unary += p.unary;
      acc.r1_mismatch += p.r1_mismatch;
      acc.n += p.n;
    }
    out << "  alpha=" << alpha << ": n=" << acc.n << " max|bS(R_r)-(bS-r)|=" << acc.worst_shift
        << " unary=" << acc.unary << " r1_mismatch=" << acc.r1_mismatch << "\n";
    ok = ok && acc.worst_shift <= 1e-12 && acc.unary == 0 && acc.r1_mismatch == 0;
  }
  return ok;
}

// Criterion 4: pruning invariance in law at r = 0.5, alpha in {1.5, 2},
// N = 1e5, plus the unscaled negative control.
bool criterion_pruning_invariance(std::ostream& out) {
  bool ok = true;
  for (double alpha : {1.5, 2.0}) {
    ExperimentConfig cfg = base_cfg(alpha, 4);
    cfg.n_samples = 100'000;
    cfg.r = 0.5;
    const auto reports = verify_pruning_invariance(cfg);
    std::string why;
    const bool pass = all_pass(reports, why);
    out << "  alpha=" << alpha << ":";
    for (const auto& r : reports) out << " p=" << r.p_value;
    out << (pass ? "" : " FAIL" + why) << "\n";
    ok = ok && pass;

    ExperimentConfig neg = cfg;
    neg.n_samples = 30'000;
    neg.negative_control = true;
    const auto control = verify_pruning_invariance(neg);
    const bool cpass = control.size() == 1 && control[0].pass;
    out << "  alpha=" << alpha << " negative control: rejected with p=" << control[0].p_value
        << (cpass ? "" : " FAIL (not rejected)") << "\n";
    ok = ok && cpass;
  }
  return ok;
}

// Criterion 5: Marchal exactness at alpha in {1.5, 2}, leaves in {2,3,4},
// chi-square vs the product-formula enumeration at N = 1e6; exact leaf
// counts; monotone bS along chains.
bool criterion_marchal(std::ostream& out) {
  bool ok = true;
  std::uint64_t pass_id = 0;
  for (double alpha : {1.5, 2.0}) {
    const StableOffspring law(alpha);
    for (std::uint64_t leaves : {2u, 3u, 4u}) {
      struct Acc {
        std::map<std::string, std::uint64_t> freq;
        std::uint64_t bad_leaves = 0;
      };
      auto parts =
          fan_out<Acc>(5, pass_id++, 1'000'000, [&](RngStream& rng, std::uint64_t quota) {
            Acc acc;
            for (std::uint64_t i = 0; i < quota; ++i) {
              const WeightedTree wt = marchal_grow(alpha, leaves, rng);
              if (wt.tree.leaf_count() != leaves) ++acc.bad_leaves;
              ++acc.freq[shape_key(wt.tree)];
            }
            return acc;
          });
      std::map<std::string, std::uint64_t> freq;
      std::uint64_t bad = 0, total = 0;
      for (auto& p : parts) {
        bad += p.bad_leaves;
        for (auto& [k, v] : p.freq) {
          freq[k] += v;
          total += v;
        }
      }
      // exact conditional probabilities over the full support
      std::vector<double> probs;
      std::vector<std::uint64_t> counts;
      double mass = 0.0;
      std::uint64_t seen = 0;
      for (const Tree& t : enumerate_trees_no_unary(2 * leaves - 1)) {
        if (t.leaf_count() != leaves) continue;
        double p = 1.0;
        for (std::uint32_t k : t.child_counts()) p *= law.pmf(k);
        if (p <= 0.0) continue;
        probs.push_back(p);
        counts.push_back(freq[shape_key(t)]);
        seen += counts.back();
        mass += p;
      }
      for (double& p : probs) p /= mass;
      double pval = 1.0;
      if (probs.size() >= 2) pval = chi_square(counts, probs).p_value;
      const bool pass = bad == 0 && seen == total && pval > 0.01;
      out << "  alpha=" << alpha << " leaves=" << leaves << ": shapes=" << probs.size()
          << " chi2 p=" << pval << " bad_leaf_counts=" << bad
          << " off_support=" << (total - seen) << (pass ? "" : " FAIL") << "\n";
      ok = ok && pass;
    }
    // monotone coupling along chains
    RngStream rng(6, pass_id);
    std::uint64_t violations = 0;
    for (int c = 0; c < 3; ++c) {
      GrowthChain chain(alpha, rng);
      double prev = weighted_strahler(chain.current()).value();
      std::uint64_t prev_size = chain.size();
      while (chain.leaves() < 300) {
        chain.step();
        const double bs = weighted_strahler(chain.current()).value();
        if (bs < prev || chain.size() <= prev_size) ++violations;
        prev = bs;
        prev_size = chain.size();
      }
    }
    out << "  alpha=" << alpha << " chain monotonicity violations=" << violations << "\n";
    ok = ok && violations == 0;
  }
  return ok;
}

// Criterion 6: exact alpha=2 analytics, cross-validated three ways.
bool criterion_exact(std::ostream& out) {
  bool ok = true;
  const StrahlerCountTable table = strahler_counts(60);
  {
    bool catalan_ok = true;
    for (std::uint32_t n = 0; n <= 60; ++n) catalan_ok = catalan_ok && table.row_sum(n) == catalan(n);
    out << "  Catalan row sums n<=60 exact: " << (catalan_ok ? "ok" : "FAIL") << "\n";
    ok = ok && catalan_ok;
  }
  {
    bool enum_ok = true;
    for (std::size_t leaves = 1; leaves <= 10; ++leaves) {
      std::vector<BigInt> by_p(12, BigInt(0));
      for (const Tree& t : enumerate_binary_trees(leaves)) ++by_p[horton_strahler(t)];
      for (std::uint32_t p = 0; p < 12; ++p)
        enum_ok = enum_ok && table.count(p, static_cast<std::uint32_t>(leaves - 1)) == by_p[p];
    }
    out << "  table equals brute-force enumeration (<=10 leaves): "
        << (enum_ok ? "ok" : "FAIL") << "\n";
    ok = ok && enum_ok;
  }
  const StrahlerCountTable big = strahler_counts(400);
  {
    double worst = 0.0;
    for (double z : {0.02, 0.05, 0.1, 0.15, 0.2})
      for (std::uint32_t p = 0; p <= 6; ++p)
        worst = std::max(worst, std::fabs(closed_form_Rp(z, p) - big.series(p, z)));
    out << "  closed form vs series, worst |diff|=" << worst << (worst < 1e-10 ? "" : " FAIL")
        << "\n";
    ok = ok && worst < 1e-10;
  }
  {
    double worst = 0.0;
    for (double s : {0.3, 0.5, 0.9})
      for (std::uint32_t p : {1u, 2u, 3u}) {
        double series = 0.0;
        for (std::uint32_t n = 0; n <= 400; ++n)
          series += static_cast<double>(big.count(p, n)) * std::pow(2.0, -(2.0 * n + 1.0)) *
                    std::pow(s, 2.0 * n + 1.0);
        series /= std::pow(2.0, -static_cast<double>(p) - 1.0);
        worst = std::max(worst, std::fabs(size_gf_given_strahler(s, p) - series));
      }
    out << "  sinh form vs table series, worst |diff|=" << worst
        << (worst < 1e-10 ? "" : " FAIL") << "\n";
    ok = ok && worst < 1e-10;
  }
  {
    // Monte Carlo route: E[s^{#tau} | S = 2] at s = 0.9, 1e6 accepted draws.
    const StableOffspring law(2.0);
    struct Acc {
      double sum = 0.0, sumsq = 0.0;
      std::uint64_t n = 0;
    };
    auto parts = fan_out<Acc>(8, 0, 1'000'000, [&](RngStream& rng, std::uint64_t quota) {
      Acc acc;
      while (acc.n < quota) {
        const auto s = stream_strahler(law, rng, 3, 1 << 24);
        if (s.exited_early || s.capped || s.strahler != 2) continue;
        const double v = std::pow(0.9, static_cast<double>(s.nodes));
        acc.sum += v;
        acc.sumsq += v * v;
        ++acc.n;
      }
      return acc;
    });
    Acc acc;
    for (const auto& p : parts) {
      acc.sum += p.sum;
      acc.sumsq += p.sumsq;
      acc.n += p.n;
    }
    const double mean = acc.sum / static_cast<double>(acc.n);
    const double var = acc.sumsq / static_cast<double>(acc.n) - mean * mean;
    const double se = std::sqrt(var / static_cast<double>(acc.n));
    const double target = size_gf_given_strahler(0.9, 2);
    const bool pass = std::fabs(mean - target) <= 3.0 * se;
    out << "  Monte Carlo E[0.9^size | S=2]=" << mean << " vs " << target << " (3SE=" << 3 * se
        << "): " << (pass ? "ok" : "FAIL") << "\n";
    ok = ok && pass;
  }
  {
    double worst_deriv = 0.0;
    for (double s : {0.4, 0.7})
      for (std::uint32_t p : {1u, 2u})
        for (double y : {0.3, 0.6}) {
          const double h = 1e-4;
          const double deriv = (F_eval(s, p + y + h) - F_eval(s, p + y - h)) / (2.0 * h);
          const double expect = std::log(2.0) * std::pow(2.0, -static_cast<double>(p) - y) *
                                size_gf_given_weighted(s, p, y);
          worst_deriv = std::max(worst_deriv, std::fabs(deriv - expect));
        }
    out << "  Prop-9.1-type identity vs F numeric derivative, worst |diff|=" << worst_deriv
        << (worst_deriv < 1e-6 ? "" : " FAIL") << "\n";
    ok = ok && worst_deriv < 1e-6;

    // FExp mixture via adaptive Simpson
    auto integrand = [](double s, std::uint32_t p, double y) {
      return size_gf_given_weighted(s, p, y) * 2.0 * std::log(2.0) * std::pow(2.0, -y);
    };
    auto simpson = [&](double s, std::uint32_t p) {
      struct Seg {
        double a, b, fa, fb, fm, tol;
        int depth;
      };
      const double a0 = 1e-9, b0 = 1.0 - 1e-9;
      std::vector<Seg> stack{{a0, b0, integrand(s, p, a0), integrand(s, p, b0),
                              integrand(s, p, 0.5 * (a0 + b0)), 1e-11, 0}};
      double total = 0.0;
      while (!stack.empty()) {
        const Seg seg = stack.back();
        stack.pop_back();
        const double m = 0.5 * (seg.a + seg.b);
        const double lm = 0.5 * (seg.a + m), rm = 0.5 * (m + seg.b);
        const double flm = integrand(s, p, lm), frm = integrand(s, p, rm);
        const double whole = (seg.b - seg.a) / 6.0 * (seg.fa + 4.0 * seg.fm + seg.fb);
        const double left = (m - seg.a) / 6.0 * (seg.fa + 4.0 * flm + seg.fm);
        const double right = (seg.b - m) / 6.0 * (seg.fm + 4.0 * frm + seg.fb);
        if (seg.depth > 40 || std::fabs(left + right - whole) < 15.0 * seg.tol) {
          total += left + right + (left + right - whole) / 15.0;
        } else {
          stack.push_back({seg.a, m, seg.fa, seg.fm, flm, seg.tol / 2.0, seg.depth + 1});
          stack.push_back({m, seg.b, seg.fm, seg.fb, frm, seg.tol / 2.0, seg.depth + 1});
        }
      }
      return total;
    };
    double worst_mix = 0.0;
    for (double s : {0.3, 0.6, 0.9})
      for (std::uint32_t p : {0u, 1u, 3u})
        worst_mix =
            std::max(worst_mix, std::fabs(simpson(s, p) - size_gf_given_strahler(s, p)));
    out << "  FExp mixture identity, worst |diff|=" << worst_mix
        << (worst_mix < 1e-8 ? "" : " FAIL") << "\n";
    ok = ok && worst_mix < 1e-8;

    double worst_g = 0.0;
    for (double s : {0.25, 0.55, 0.8})
      for (double x : {1.2, 2.9, 4.5}) {
        const double root = std::sqrt(1.0 - s * s);
        const double gp = (1.0 - s * F_eval(s, x - 1.0)) / root;
        const double g = (1.0 - s * F_eval(s, x)) / root;
        worst_g = std::max(worst_g, std::fabs(g - (gp * gp + 1.0) / (2.0 * gp)));
      }
    out << "  cotangent double-angle recursion, worst |diff|=" << worst_g
        << (worst_g < 1e-12 ? "" : " FAIL") << "\n";
    ok = ok && worst_g < 1e-12;
  }
  return ok;
}

// Criterion 7: dilation correctness: DP vs brute force on 1e4 small trees,
// the dyadic telescope, and the structural inequalities.
bool criterion_dilation(std::ostream& out) {
  bool ok = true;
  {
    struct Acc {
      double worst = 0.0;
      std::uint64_t n = 0;
    };
    auto parts = fan_out<Acc>(9, 0, 10'000, [&](RngStream& rng, std::uint64_t quota) {
      Acc acc;
      while (acc.n < quota) {
        // random tree with <= 14 nodes, unary chains allowed
        std::vector<std::uint32_t> counts;
        std::uint64_t pending = 1;
        bool fits = true;
        while (pending > 0) {
          if (counts.size() >= 14) {
            fits = false;
            break;
          }
          const std::uint64_t u = rng.uniform_below(10);
          const std::uint32_t k = u < 5 ? 0 : (u < 7 ? 1 : (u < 9 ? 2 : 3));
          counts.push_back(k);
          pending += k;
          --pending;
        }
        if (!fits) continue;
        std::vector<double> lengths;
        for (std::size_t i = 0; i < counts.size(); ++i) lengths.push_back(0.05 + rng.u01());
        const EdgeTree t = make_edge(Tree::from_child_counts(counts), lengths);
        const std::uint32_t n = static_cast<std::uint32_t>(rng.uniform_below(4));
        const std::uint32_t k = static_cast<std::uint32_t>(rng.uniform_below(n + 1));
        const double d = 1.2 + 2.0 * rng.u01();
        const auto fast = dilation(t, {d, k, n});
        const auto slow = brute_force_dilation(t, {d, k, n});
        acc.worst = std::max(acc.worst, std::fabs(fast.value - slow.value));
        if (fast.value > 0.0 && fast.witness) {
          const double replay = replay_dilation(t, {d, k, n}, *fast.witness);
          acc.worst = std::max(acc.worst, std::fabs(replay - fast.value));
        }
        ++acc.n;
      }
      return acc;
    });
    double worst = 0.0;
    for (const auto& p : parts) worst = std::max(worst, p.worst);
    out << "  DP vs brute force on 1e4 trees, worst |diff|=" << worst
        << (worst <= 1e-9 ? "" : " FAIL") << "\n";
    ok = ok && worst <= 1e-9;
  }
  {
    double worst = 0.0;
    for (double d : {1.5, 2.0, 3.0})
      for (std::uint32_t n = 0; n <= 10; ++n)
        worst = std::max(worst,
                         std::fabs(dilation(dyadic_tree(d, n), {d, n, n}, false).value - 1.0));
    out << "  dyadic telescope |value-1| worst=" << worst << (worst <= 1e-12 ? "" : " FAIL")
        << "\n";
    ok = ok && worst <= 1e-12;
  }
  {
    struct Acc {
      std::uint64_t violations = 0, n = 0;
    };
    auto parts = fan_out<Acc>(9, 1, 10'000, [&](RngStream& rng, std::uint64_t quota) {
      Acc acc;
      while (acc.n < quota) {
        std::vector<std::uint32_t> counts;
        std::uint64_t pending = 1;
        bool fits = true;
        while (pending > 0) {
          if (counts.size() >= 40) {
            fits = false;
            break;
          }
          const std::uint64_t u = rng.uniform_below(10);
          const std::uint32_t k = u < 5 ? 0 : (u < 7 ? 1 : (u < 9 ? 2 : 3));
          counts.push_back(k);
          pending += k;
          --pending;
        }
        if (!fits) continue;
        std::vector<double> lengths;
        for (std::size_t i = 0; i < counts.size(); ++i) lengths.push_back(0.05 + rng.u01());
        const EdgeTree t = make_edge(Tree::from_child_counts(counts), lengths);
        const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.uniform_below(3));
        const std::uint32_t k = static_cast<std::uint32_t>(rng.uniform_below(n + 1));
        const double d = 1.2 + 2.0 * rng.u01();
        const double lam = 0.25 + 3.0 * rng.u01();
        const double v = dilation(t, {d, k, n}, false).value;
        const double vs = dilation(scale(t, lam), {d, k, n}, false).value;
        if (std::fabs(vs - lam * v) > 1e-9 * std::max(1.0, lam * v)) ++acc.violations;
        if (dilation(t, {d, k, n + 1}, false).value > v + 1e-12) ++acc.violations;
        if (k < n && dilation(t, {d, k + 1, n}, false).value < v - 1e-12) ++acc.violations;
        const double bound = t.metric_height() * (std::pow(d, k + 2) - d) /
                             ((k + 1.0) * (d - 1.0));
        if (v > bound + 1e-9) ++acc.violations;
        ++acc.n;
      }
      return acc;
    });
    std::uint64_t violations = 0;
    for (const auto& p : parts) violations += p.violations;
    out << "  homogeneity/monotonicity/bound violations on 1e4 instances: " << violations
        << (violations == 0 ? "" : " FAIL") << "\n";
    ok = ok && violations == 0;
  }
  return ok;
}

// Criterion 8: theorem-1.5 shadow at alpha = 2, n = 20001, N = 2000.
bool criterion_theorem15(std::ostream& out) {
  ExperimentConfig cfg = base_cfg(2.0, 7);
  cfg.n_samples = 2000;
  cfg.big_n = 20'001;
  const auto reports = verify_theorem_1_5(cfg);
  std::string why;
  const bool pass = all_pass(reports, why);
  for (const auto& r : reports) out << "  " << r.name << ": stat=" << r.statistic << "\n";
  if (!pass) out << "  FAIL" << why << "\n";
  return pass;
}

// Criterion 9: limit-tree height bounds and dilation trajectory.
bool criterion_limit(std::ostream& out) {
  ExperimentConfig cfg = base_cfg(2.0, 9);
  cfg.n_samples = 10'000;
  cfg.eps = 1e-3;
  cfg.depth_cap = 400;
  cfg.n_dilation = 200;
  const auto reports = verify_limit_tree(cfg);
  std::string why;
  const bool pass = all_pass(reports, why);
  for (const auto& r : reports)
    out << "  " << r.name << ": stat=" << r.statistic << "  " << r.notes << "\n";
  if (!pass) out << "  FAIL" << why << "\n";
  return pass;
}

// Criterion 10: tail asymptotics, exact at alpha = 2 and Monte Carlo at the
// declared engineering tolerances.
bool criterion_tails(std::ostream& out) {
  bool ok = true;
  for (double alpha : {2.0, 1.5}) {
    ExperimentConfig cfg = base_cfg(alpha, 10);
    cfg.n_samples = 100'000;
    const auto reports = verify_tail_asymptotics(cfg);
    std::string why;
    const bool pass = all_pass(reports, why);
    out << "  alpha=" << alpha << ":";
    for (const auto& r : reports) out << " " << r.statistic;
    out << "  (rel errors / flags)" << (pass ? "" : " FAIL" + why) << "\n";
    ok = ok && pass;
  }
  return ok;
}

// Criterion 11: byte-identical artifacts under a fixed master seed. The
// suite reruns every experiment at reduced N (artifact identity does not
// depend on the sample counts) and compares all emitted files.
bool criterion_reproducibility(std::ostream& out) {
  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "strahler_accept_repro";
  fs::remove_all(base);

  auto run_all = [&](const fs::path& dir) {
    ExperimentConfig laws = base_cfg(1.5, 11);
    laws.n_samples = 20'000;
    laws.n_weighted = 20'000;
    write_reports(verify_strahler_laws(laws), dir.string(), "laws");
    ExperimentConfig pruning = base_cfg(2.0, 11);
    pruning.n_samples = 4000;
    write_reports(verify_pruning_invariance(pruning), dir.string(), "pruning");
    ExperimentConfig tails = base_cfg(2.0, 11);
    tails.n_samples = 20'000;
    write_reports(verify_tail_asymptotics(tails), dir.string(), "tails");
    ExperimentConfig t15 = base_cfg(2.0, 11);
    t15.n_samples = 100;
    t15.big_n = 2001;
    write_reports(verify_theorem_1_5(t15), dir.string(), "theorem15");
    ExperimentConfig limit = base_cfg(2.0, 11);
    limit.n_samples = 1000;
    limit.n_dilation = 20;
    write_reports(verify_limit_tree(limit), dir.string(), "limit");
    // a JSONL ensemble next to the reports
    const StableOffspring law(1.5);
    RngStream rng(11, 0);
    std::ofstream jsonl(dir / "sample.jsonl");
    for (int i = 0; i < 500; ++i) {
      try {
        write_jsonl(jsonl, TreeRecord::of(sample_gw_edge(law, rng, 1 << 20)));
      } catch (const CapExceeded&) {
      }
    }
  };
  run_all(base / "a");
  run_all(base / "b");

  bool identical = true;
  std::size_t files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(base / "a")) {
    if (!entry.is_regular_file()) continue;
    ++files;
    const fs::path rel = fs::relative(entry.path(), base / "a");
    std::ifstream fa(entry.path(), std::ios::binary), fb(base / "b" / rel, std::ios::binary);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    if (sa.str() != sb.str() || sa.str().empty()) {
      identical = false;
      out << "  mismatch: " << rel.string() << "\n";
    }
  }
  out << "  " << files << " artifact files compared byte-for-byte: "
      << (identical ? "identical" : "MISMATCH") << "\n";
  fs::remove_all(base);
  return identical && files >= 11;
}

struct Criterion {
  const char* name;
  bool (*run)(std::ostream&);
};

const Criterion kCriteria[] = {
    {"geometric law P(S>=n) = (1-1/alpha)^n, alpha in {1.3,1.5,2}, N=1e6, 3 SE",
     criterion_geometric},
    {"exponential law of bS (KS p>0.01) and floor/frac independence (chi2 p>0.01), N=1e5",
     criterion_exponential},
    {"pruning identities: bS shift exact to 1e-12, no unary vertices, R_1 = classic, "
     "reference figure reproduced",
     criterion_pruning_identities},
    {"pruning invariance in law at r=0.5 (KS + chi2 at level 0.01) with failing "
     "unscaled control",
     criterion_pruning_invariance},
    {"Marchal exactness: shape chi-square vs product formula at N=1e6, exact leaf "
     "counts, monotone chains",
     criterion_marchal},
    {"alpha=2 exact analytics: Catalan sums, enumeration, closed forms, Monte Carlo, "
     "mixture identities",
     criterion_exact},
    {"dilation: DP = oracle to 1e-9 on 1e4 trees, dyadic telescope = 1, inequalities "
     "hold with zero violations",
     criterion_dilation},
    {"height-vs-dilation shadow at n=20001: KS < 0.08, dropped factor 2 exceeds 0.2",
     criterion_theorem15},
    {"limit tree: height tail bounds at 3 SE slack, dilation medians non-increasing",
     criterion_limit},
    {"tail asymptotics: exact alpha=2 leaf formula, Monte Carlo constants within "
     "15-25% declared tolerances",
     criterion_tails},
    {"reproducibility: rerun with the master seed produces byte-identical artifacts",
     criterion_reproducibility},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[i + 1]);
  }
  int failures = 0;
  for (std::size_t i = 0; i < std::size(kCriteria); ++i) {
    if (only > 0 && static_cast<std::size_t>(only) != i + 1) continue;
    const auto t0 = std::chrono::steady_clock::now();
    std::ostringstream details;
    bool pass = false;
    try {
      pass = kCriteria[i].run(details);
    } catch (const std::exception& e) {
      details << "  exception: " << e.what() << "\n";
    }
    const auto secs = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count() /
                      1000.0;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << ": "
              << kCriteria[i].name << "\n"
              << details.str();
    std::cerr << "criterion " << (i + 1) << " wall time: " << secs << " s\n";
    if (!pass) ++failures;
  }
  std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES: " + std::to_string(failures))
            << "\n";
  return failures;
}
