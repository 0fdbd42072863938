#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace strahler {

// Outcome of one verification experiment. `pass` is a deterministic function
// of the statistic and the thresholds named in `notes`.
struct TestReport {
  std::string name;
  double statistic = 0.0;
  double p_value = -1.0;  // -1 when the check is a CI / tolerance test
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::uint64_t n_samples = 0;
  bool pass = false;
  std::uint64_t seed = 0;
  std::string notes;

  std::string to_json() const;
  std::string to_csv_line() const;
  static std::string csv_header();
};

// Fixed significance level used by every acceptance run.
inline constexpr double kAlphaLevel = 0.01;

// Asymptotic Kolmogorov distribution Q(lambda) = P(K > lambda).
double kolmogorov_q(double lambda);
// Regularized upper incomplete gamma Q(a, x) (chi-square tail probability is
// Q(df/2, stat/2)).
double gamma_q(double a, double x);

// One-sample Kolmogorov-Smirnov test against a cdf, asymptotic p-value.
TestReport ks_one_sample(std::vector<double> samples,
                         const std::function<double(double)>& cdf,
                         const std::string& name = "ks_one_sample");

// Two-sample Kolmogorov-Smirnov test, asymptotic p-value.
TestReport ks_two_sample(std::vector<double> a, std::vector<double> b,
                         const std::string& name = "ks_two_sample");

// Two-sample KS distance only (no p-value).
double ks_distance(std::vector<double> a, std::vector<double> b);

// Pearson chi-square of observed counts against expected class
// probabilities (which must sum to 1 within 1e-9). Classes with expected
// count below 5 are merged into the smallest-expectation bucket
// automatically; degrees of freedom follow the merged classes.
TestReport chi_square(std::vector<std::uint64_t> observed, std::vector<double> expected,
                      const std::string& name = "chi_square");

// Contingency-table independence chi-square with (r-1)(c-1) degrees of
// freedom after merging sparse rows/columns.
TestReport chi_square_independence(const std::vector<std::vector<std::uint64_t>>& table,
                                   const std::string& name = "chi_square_independence");

// Wilson score interval.
std::pair<double, double> binomial_ci(std::uint64_t count, std::uint64_t n, double level);

}  // namespace strahler
