#include "strahler/exact.hpp"

#include <cmath>
#include <stdexcept>

namespace strahler {

namespace {

// log(sinh(x)) without overflow.
double log_sinh(double x) {
  if (x > 20.0) return x - std::log(2.0) + std::log1p(-std::exp(-2.0 * x));
  return std::log(std::sinh(x));
}

// acoth(g) for g > 1.
double acoth(double g) { return 0.5 * std::log((g + 1.0) / (g - 1.0)); }

// a_y(s) of Prop 9.1-type formulas.
double a_y_of(double s, double y) {
  const double root = std::sqrt(1.0 - s * s);
  const double g = (1.0 - s * s + s * s * std::pow(2.0, -y)) / root;
  return acoth(g);
}

}  // namespace

StrahlerCountTable::StrahlerCountTable(std::uint32_t max_n) : max_n_(max_n), zero_(0) {
  if (max_n > 2000) throw std::invalid_argument("table limited to n <= 2000");
  // p ranges while 2^p - 1 <= n <=> p <= log2(n+1).
  std::uint32_t max_p = 0;
  while (((std::uint64_t{1} << (max_p + 1)) - 1) <= max_n) ++max_p;
  rows_.assign(max_p + 1, std::vector<BigInt>(max_n + 1, BigInt(0)));
  rows_[0][0] = 1;  // the single node

  // Prefix sums C_{p,b} = sum_{q<=p} R_{q,b} maintained incrementally.
  std::vector<std::vector<BigInt>> below(max_p + 1,
                                         std::vector<BigInt>(max_n + 1, BigInt(0)));
  for (std::uint32_t b = 0; b <= max_n; ++b) below[0][b] = rows_[0][b];

  for (std::uint32_t p = 1; p <= max_p; ++p) {
    for (std::uint32_t n = 1; n <= max_n; ++n) {
      BigInt acc = 0;
      for (std::uint32_t a = 0; a < n; ++a) {
        const std::uint32_t b = n - 1 - a;
        acc += rows_[p - 1][a] * rows_[p - 1][b];
        acc += 2 * rows_[p][a] * below[p - 1][b];
      }
      rows_[p][n] = acc;
    }
    if (p < max_p)
      for (std::uint32_t b = 0; b <= max_n; ++b) below[p][b] = below[p - 1][b] + rows_[p][b];
  }
}

const BigInt& StrahlerCountTable::count(std::uint32_t p, std::uint32_t n) const {
  if (p >= rows_.size() || n > max_n_) return zero_;
  return rows_[p][n];
}

BigInt StrahlerCountTable::row_sum(std::uint32_t n) const {
  BigInt s = 0;
  for (const auto& row : rows_) s += row[n];
  return s;
}

double StrahlerCountTable::series(std::uint32_t p, double z) const {
  if (p >= rows_.size()) return 0.0;
  double sum = 0.0, zp = 1.0;
  for (std::uint32_t n = 0; n <= max_n_; ++n) {
    sum += static_cast<double>(rows_[p][n]) * zp;
    zp *= z;
  }
  return sum;
}

BigInt catalan(std::uint32_t n) {
  // C_n = binom(2n, n) / (n+1), built by the recurrence C_{k+1} = C_k * 2(2k+1)/(k+2).
  BigInt c = 1;
  for (std::uint32_t k = 0; k < n; ++k) {
    c *= 2 * (2 * k + 1);
    c /= k + 2;
  }
  return c;
}

StrahlerCountTable strahler_counts(std::uint32_t max_n) { return StrahlerCountTable(max_n); }

double closed_form_Rp(double z, std::uint32_t p) {
  if (!(z > 0.0 && z < 0.25)) throw std::invalid_argument("z must lie in (0, 1/4)");
  if (p == 0) return 1.0;
  // cosh^2 c = 1/(4z)
  const double c = std::acosh(1.0 / (2.0 * std::sqrt(z)));
  return std::exp(log_sinh(2.0 * c) - log_sinh(std::ldexp(2.0, static_cast<int>(p)) * c));
}

double size_gf_given_strahler(double s, std::uint32_t p) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("s must lie in (0,1)");
  const double a = std::acosh(1.0 / s);
  const double two = std::ldexp(1.0, static_cast<int>(p) + 1);  // 2^{p+1}
  return std::exp((static_cast<double>(p) + 1.0) * std::log(2.0) + log_sinh(a) -
                  log_sinh(two * a));
}

double size_gf_given_weighted(double s, std::uint32_t p, double y) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("s must lie in (0,1)");
  if (!(y > 0.0 && y < 1.0)) throw std::invalid_argument("y must lie in (0,1)");
  const double a = a_y_of(s, y);
  const double two_p = std::ldexp(1.0, static_cast<int>(p));  // 2^p
  const double log_val = static_cast<double>(p) * std::log(4.0) + std::log(s) +
                         2.0 * (log_sinh(a) - log_sinh(two_p * a));
  return std::exp(log_val);
}

double F_eval(double s, double x) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("s must lie in (0,1)");
  if (!(x >= 0.0)) throw std::invalid_argument("x must be nonnegative");
  if (x < 1.0) return (1.0 - std::pow(2.0, -x)) * s;
  const double p = std::floor(x);
  const double y = x - p;
  // coth(2^p a_y): for y = 0 the closed form continuously extends with
  // coth a_0 = 1/sqrt(1-s^2).
  const double root = std::sqrt(1.0 - s * s);
  const double g = (1.0 - s * s + s * s * std::pow(2.0, -y)) / root;
  const double a = acoth(g);
  const double arg = std::ldexp(a, static_cast<int>(p));  // 2^p a
  double coth;
  if (arg > 20.0) {
    coth = 1.0;
  } else {
    coth = 1.0 + 2.0 / std::expm1(2.0 * arg);
  }
  return (1.0 - root * coth) / s;
}

double F_recursion_step(double s, double f_prev) {
  return (s / 2.0) * (1.0 - f_prev * f_prev) / (1.0 - s * f_prev);
}

}  // namespace strahler
