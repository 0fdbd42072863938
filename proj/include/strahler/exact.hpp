#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace strahler {

using BigInt = boost::multiprecision::cpp_int;

// Exact counts R_{p,n} of binary trees with Strahler number p and 2n+1
// vertices (n+1 leaves), built by the root decomposition of the Horton
// recursion:
//   R_{p,n} = sum_{a+b=n-1} [ R_{p-1,a} R_{p-1,b} + 2 R_{p,a} sum_{q<p} R_{q,b} ].
// Row sums reproduce the Catalan numbers.
class StrahlerCountTable {
 public:
  explicit StrahlerCountTable(std::uint32_t max_n);

  std::uint32_t max_n() const { return max_n_; }
  std::uint32_t max_p() const { return static_cast<std::uint32_t>(rows_.size()) - 1; }
  // R_{p,n}; zero outside the table's support.
  const BigInt& count(std::uint32_t p, std::uint32_t n) const;
  // sum_p R_{p,n} (= Catalan(n) by construction; tested independently).
  BigInt row_sum(std::uint32_t n) const;

  // Partial generating-function sum  sum_{n<=max_n} R_{p,n} z^n  in doubles.
  double series(std::uint32_t p, double z) const;

 private:
  std::uint32_t max_n_;
  std::vector<std::vector<BigInt>> rows_;  // rows_[p][n]
  BigInt zero_;
};

BigInt catalan(std::uint32_t n);

// Builds the table; max_n <= 2000 (big-integer arithmetic).
StrahlerCountTable strahler_counts(std::uint32_t max_n);

// Closed form of the generating function R_p(z) = sum_n R_{p,n} z^n for
// z in (0, 1/4): sinh(2c)/sinh(2^{p+1} c) with cosh^2(c) = 1/(4z)
// (the trigonometric solution evaluated on its hyperbolic branch).
double closed_form_Rp(double z, std::uint32_t p);

// E[s^{#tau} | S(tau) = p] = 2^{p+1} sinh(a)/sinh(2^{p+1} a), cosh a = 1/s.
// Evaluated in log space so p up to ~40 stays finite.
double size_gf_given_strahler(double s, std::uint32_t p);

// E[s^{#tau} | bS(btau) = p+y] = 4^p s sinh^2(a_y(s))/sinh^2(2^p a_y(s)),
// coth a_y(s) = (1 - s^2 + s^2 2^{-y}) / sqrt(1-s^2); y in (0,1).
double size_gf_given_weighted(double s, std::uint32_t p, double y);

// F_x(s) = E[1_{bS <= x} s^{#tau}] via the closed form
//   s F_{p+y}(s) = 1 - sqrt(1-s^2) coth(2^p a_y(s)),
// with initial condition F_y(s) = (1 - 2^{-y}) s for y in [0,1).
double F_eval(double s, double x);

// One step of the quadratic recursion F_x = (s/2)(1 - F_{x-1}^2) + s F_x F_{x-1}
// solved for F_x; used to cross-check the closed form.
double F_recursion_step(double s, double f_prev);

}  // namespace strahler
