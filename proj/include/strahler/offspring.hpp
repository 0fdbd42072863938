#pragma once

#include <cstdint>
#include <vector>

#include "strahler/rng.hpp"

namespace strahler {

// The critical stable offspring law mu_alpha with generating function
// s + (1-s)^alpha / alpha, alpha in (1,2]. Explicitly:
//   mu(0) = 1/alpha, mu(1) = 0, mu(2) = (alpha-1)/2,
//   mu(k+1) = mu(k) (k-alpha)/(k+1) for k >= 2.
// The pmf/cdf are cached up to a cutoff and the heavy tail is handled by
// extending the same recurrence on demand, so inverse-CDF sampling is exact.
class StableOffspring {
 public:
  explicit StableOffspring(double alpha, std::uint32_t initial_cutoff = 4096);

  double alpha() const { return alpha_; }
  double beta() const { return 1.0 / (alpha_ - 1.0); }
  double gamma() const { return gamma_; }
  double delta() const { return delta_; }

  // mu_alpha(k). Extends the cache if k lies beyond it.
  double pmf(std::uint32_t k) const;
  // P(xi <= k) from the cache.
  double cdf(std::uint32_t k) const;
  // Exact tail mass P(xi > k) = (k+1) mu(k+1) / alpha.
  double tail_mass(std::uint32_t k) const;
  // Exact tail mean E[xi 1_{xi > k}] = k (k+1) mu(k+1) / (alpha-1).
  double tail_mean(std::uint32_t k) const;

  std::uint32_t cached_cutoff() const { return static_cast<std::uint32_t>(pmf_.size()) - 1; }

  // Inverse-CDF draw.
  std::uint32_t sample(RngStream& rng) const;

 private:
  void extend(std::uint32_t k) const;

  double alpha_;
  double gamma_;
  double delta_;
  mutable std::vector<double> pmf_;
  mutable std::vector<double> cdf_;
};

}  // namespace strahler
