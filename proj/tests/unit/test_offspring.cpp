#include <cmath>

#include "doctest.h"
#include "strahler/offspring.hpp"

using namespace strahler;

TEST_CASE("pmf closed values at alpha = 2 and alpha = 1.5") {
  const StableOffspring bin(2.0);
  CHECK(bin.pmf(0) == 0.5);
  CHECK(bin.pmf(1) == 0.0);
  CHECK(bin.pmf(2) == 0.5);
  CHECK(bin.pmf(3) == 0.0);
  CHECK(bin.pmf(17) == 0.0);

  const StableOffspring law(1.5);
  CHECK(law.pmf(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(law.pmf(1) == 0.0);
  CHECK(law.pmf(2) == 0.25);
  CHECK(law.pmf(3) == doctest::Approx(1.0 / 24.0).epsilon(1e-15));
  // cross-check pmf(3) = pmf(2) (2 - alpha)/3
  CHECK(law.pmf(3) == law.pmf(2) * (2.0 - 1.5) / 3.0);
}

TEST_CASE("pmf recurrence consistency, exactly in evaluation order") {
  const StableOffspring law(1.3);
  for (std::uint32_t k = 2; k <= 4000; ++k) {
    const double expected = law.pmf(k) * (static_cast<double>(k) - 1.3) /
                            (static_cast<double>(k) + 1.0);
    CHECK(law.pmf(k + 1) == expected);
  }
}

TEST_CASE("criticality with the exact tail mean") {
  for (double alpha : {1.2, 1.5, 1.8, 2.0}) {
    const StableOffspring law(alpha);
    const std::uint32_t k = law.cached_cutoff();
    double partial = 0.0;
    for (std::uint32_t j = 0; j <= k; ++j) partial += static_cast<double>(j) * law.pmf(j);
    CHECK(partial + law.tail_mean(k) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("tail mass closed form agrees with summing the recurrence") {
  const StableOffspring law(1.5);
  // frozen small case: P(xi > 2) = 1 - 2/3 - 1/4 = 1/12
  CHECK(law.tail_mass(2) == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  double summed = 0.0;
  for (std::uint32_t k = 10; k < 300000; ++k) summed += law.pmf(k);
  CHECK(law.tail_mass(9) == doctest::Approx(summed).epsilon(1e-6));
}

TEST_CASE("generating function identity at a grid of s values") {
  for (double alpha : {1.3, 1.5, 1.9, 2.0}) {
    const StableOffspring law(alpha);
    for (double s = 0.1; s < 0.95; s += 0.1) {
      double lhs = 0.0, sk = 1.0;
      for (std::uint32_t k = 0; k <= law.cached_cutoff(); ++k) {
        lhs += sk * law.pmf(k);
        sk *= s;
      }
      const double rhs = s + std::pow(1.0 - s, alpha) / alpha;
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
  }
}

TEST_CASE("sampling matches the pmf and the exact tail") {
  const StableOffspring law(1.5);
  RngStream rng(21, 0);
  const int n = 1'000'000;
  std::uint64_t zeros = 0, tail10 = 0;
  double mean = 0.0;
  for (int i = 0; i < n; ++i) {
    const std::uint32_t k = law.sample(rng);
    zeros += k == 0;
    tail10 += k >= 10;
    mean += k;
  }
  mean /= n;
  const double se_mean = 3.0;  // infinite-variance law: only a sanity band here
  CHECK(std::fabs(mean - 1.0) < se_mean * 0.05);
  const double p0 = 2.0 / 3.0;
  CHECK(std::fabs(static_cast<double>(zeros) / n - p0) <
        3.0 * std::sqrt(p0 * (1.0 - p0) / n));
  const double pt = law.tail_mass(9);
  CHECK(std::fabs(static_cast<double>(tail10) / n - pt) <
        3.0 * std::sqrt(pt * (1.0 - pt) / n));

  const StableOffspring bin(2.0);
  for (int i = 0; i < 1000; ++i) {
    const std::uint32_t k = bin.sample(rng);
    CHECK((k == 0 || k == 2));
  }
}
