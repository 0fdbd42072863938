#include "strahler/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

#include "json.hpp"

namespace strahler {

std::string TestReport::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["statistic"] = statistic;
  if (p_value >= 0.0) j["p_value"] = p_value;
  if (ci_hi > ci_lo) j["ci"] = {ci_lo, ci_hi};
  j["n_samples"] = n_samples;
  j["pass"] = pass;
  j["seed"] = seed;
  j["notes"] = notes;
  return j.dump();
}

std::string TestReport::csv_header() { return "name,statistic,p_value,n_samples,pass,seed,notes"; }

std::string TestReport::to_csv_line() const {
  std::ostringstream os;
  os.precision(17);
  os << name << ',' << statistic << ',' << p_value << ',' << n_samples << ','
     << (pass ? "1" : "0") << ',' << seed << ",\"" << notes << '"';
  return os.str();
}

double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double q = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 200; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    q += sign * term;
    sign = -sign;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * q, 0.0, 1.0);
}

double gamma_q(double a, double x) { return boost::math::gamma_q(a, x); }

namespace {

double ks_stat_one(std::vector<double>& s, const std::function<double(double)>& cdf) {
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = cdf(s[i]);
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

}  // namespace

TestReport ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf,
                         const std::string& name) {
  if (samples.empty()) throw std::invalid_argument("empty sample");
  TestReport r;
  r.name = name;
  r.n_samples = samples.size();
  r.statistic = ks_stat_one(samples, cdf);
  r.p_value = kolmogorov_q(std::sqrt(static_cast<double>(samples.size())) * r.statistic);
  r.pass = r.p_value > kAlphaLevel;
  r.notes = "asymptotic Kolmogorov p-value; pass iff p > 0.01";
  return r;
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / a.size() -
                              static_cast<double>(j) / b.size()));
  }
  return d;
}

TestReport ks_two_sample(std::vector<double> a, std::vector<double> b, const std::string& name) {
  TestReport r;
  r.name = name;
  r.n_samples = a.size() + b.size();
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  r.statistic = ks_distance(std::move(a), std::move(b));
  const double neff = na * nb / (na + nb);
  r.p_value = kolmogorov_q(std::sqrt(neff) * r.statistic);
  r.pass = r.p_value > kAlphaLevel;
  r.notes = "asymptotic two-sample Kolmogorov p-value; pass iff p > 0.01";
  return r;
}

TestReport chi_square(std::vector<std::uint64_t> observed, std::vector<double> expected,
                      const std::string& name) {
  if (observed.size() != expected.size() || observed.size() < 2)
    throw std::invalid_argument("need matching class vectors with >= 2 classes");
  const double psum = std::accumulate(expected.begin(), expected.end(), 0.0);
  if (std::fabs(psum - 1.0) > 1e-9)
    throw std::invalid_argument("expected probabilities must sum to 1");
  const std::uint64_t n =
      std::accumulate(observed.begin(), observed.end(), std::uint64_t{0});
  const double dn = static_cast<double>(n);

  // Merge low-expectation classes (expected count < 5) into a shared tail
  // bucket, smallest expectations first.
  std::vector<std::size_t> order(observed.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return expected[i] < expected[j]; });
  std::vector<std::uint64_t> obs;
  std::vector<double> exp;
  std::uint64_t merged_o = 0;
  double merged_e = 0.0;
  for (std::size_t idx : order) {
    if (expected[idx] * dn < 5.0 || (merged_e > 0.0 && merged_e * dn < 5.0)) {
      merged_o += observed[idx];
      merged_e += expected[idx];
    } else {
      obs.push_back(observed[idx]);
      exp.push_back(expected[idx]);
    }
  }
  if (merged_e > 0.0) {
    if (merged_e * dn >= 5.0 || obs.empty()) {
      obs.push_back(merged_o);
      exp.push_back(merged_e);
    } else {
      obs.front() += merged_o;  // smallest kept class absorbs the remainder
      exp.front() += merged_e;
    }
  }
  if (obs.size() < 2 || exp.front() * dn < 5.0)
    throw std::invalid_argument("degenerate class structure after merging");

  double stat = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const double e = exp[i] * dn;
    const double d = static_cast<double>(obs[i]) - e;
    stat += d * d / e;
  }
  TestReport r;
  r.name = name;
  r.statistic = stat;
  r.n_samples = n;
  const double df = static_cast<double>(obs.size() - 1);
  r.p_value = gamma_q(df / 2.0, stat / 2.0);
  r.pass = r.p_value > kAlphaLevel;
  r.notes = "Pearson chi-square, df=" + std::to_string(obs.size() - 1) +
            " after tail merging; pass iff p > 0.01";
  return r;
}

TestReport chi_square_independence(const std::vector<std::vector<std::uint64_t>>& table,
                                   const std::string& name) {
  const std::size_t rows = table.size();
  if (rows < 2 || table[0].size() < 2) throw std::invalid_argument("need a 2x2 table at least");
  const std::size_t cols = table[0].size();
  std::vector<double> row_sum(rows, 0.0), col_sum(cols, 0.0);
  double n = 0.0;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      row_sum[i] += static_cast<double>(table[i][j]);
      col_sum[j] += static_cast<double>(table[i][j]);
      n += static_cast<double>(table[i][j]);
    }
  double stat = 0.0;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const double e = row_sum[i] * col_sum[j] / n;
      if (e <= 0.0) continue;
      const double d = static_cast<double>(table[i][j]) - e;
      stat += d * d / e;
    }
  TestReport r;
  r.name = name;
  r.statistic = stat;
  r.n_samples = static_cast<std::uint64_t>(n);
  const double df = static_cast<double>((rows - 1) * (cols - 1));
  r.p_value = gamma_q(df / 2.0, stat / 2.0);
  r.pass = r.p_value > kAlphaLevel;
  r.notes = "contingency chi-square, df=" + std::to_string((rows - 1) * (cols - 1)) +
            "; pass iff p > 0.01";
  return r;
}

std::pair<double, double> binomial_ci(std::uint64_t count, std::uint64_t n, double level) {
  if (count > n || n == 0) throw std::invalid_argument("need count <= n, n > 0");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("level must lie in (0,1)");
  // Normal quantile via Acklam-style inverse erf through boost gamma is
  // overkill; use the classic rational approximation of the probit.
  const double p_tail = (1.0 - level) / 2.0;
  // Beasley-Springer-Moro style approximation, adequate at CI accuracy.
  auto probit = [](double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (p < plow) {
      const double q = std::sqrt(-2.0 * std::log(p));
      return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
             ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
      const double q = std::sqrt(-2.0 * std::log(1.0 - p));
      return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
             ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5, r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  };
  const double z = -probit(p_tail);
  const double nn = static_cast<double>(n);
  const double phat = static_cast<double>(count) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (phat + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

}  // namespace strahler
