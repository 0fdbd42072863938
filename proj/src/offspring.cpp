#include "strahler/offspring.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace strahler {

StableOffspring::StableOffspring(double alpha, std::uint32_t initial_cutoff) : alpha_(alpha) {
  if (!(alpha > 1.0 && alpha <= 2.0)) throw std::invalid_argument("alpha must lie in (1,2]");
  gamma_ = std::log(alpha / (alpha - 1.0));
  delta_ = std::pow(alpha / (alpha - 1.0), alpha - 1.0);
  pmf_ = {1.0 / alpha, 0.0, (alpha - 1.0) / 2.0};
  cdf_ = {pmf_[0], pmf_[0], pmf_[0] + pmf_[2]};
  extend(initial_cutoff);
}

void StableOffspring::extend(std::uint32_t k) const {
  while (pmf_.size() <= k) {
    const std::uint32_t j = static_cast<std::uint32_t>(pmf_.size()) - 1;  // last cached index
    const double next = pmf_[j] * (static_cast<double>(j) - alpha_) / (static_cast<double>(j) + 1.0);
    pmf_.push_back(next);
    cdf_.push_back(cdf_.back() + next);
  }
}

double StableOffspring::pmf(std::uint32_t k) const {
  extend(k);
  return pmf_[k];
}

double StableOffspring::cdf(std::uint32_t k) const {
  extend(k);
  return cdf_[k];
}

double StableOffspring::tail_mass(std::uint32_t k) const {
  return (static_cast<double>(k) + 1.0) * pmf(k + 1) / alpha_;
}

double StableOffspring::tail_mean(std::uint32_t k) const {
  return static_cast<double>(k) * (static_cast<double>(k) + 1.0) * pmf(k + 1) / (alpha_ - 1.0);
}

std::uint32_t StableOffspring::sample(RngStream& rng) const {
  const double u = rng.u01();
  // Fast paths cover almost all of the mass.
  if (u < cdf_[0]) return 0;
  if (u < cdf_[2]) return 2;
  auto it = std::upper_bound(cdf_.begin() + 2, cdf_.end(), u);
  if (it != cdf_.end()) return static_cast<std::uint32_t>(it - cdf_.begin());
  // Tail beyond the cache: continue the exact recurrence until the cdf
  // passes u. The pmf is strictly positive for k >= 2 (alpha < 2) and the cdf
  // reaches 1 exactly at k = 2 when alpha = 2, so this terminates for every
  // u < 1. The cache itself stays bounded; extreme draws walk local values.
  constexpr std::size_t kMaxCache = std::size_t{1} << 21;
  while (cdf_.back() <= u && pmf_.size() < kMaxCache)
    extend(static_cast<std::uint32_t>(pmf_.size()));
  it = std::upper_bound(cdf_.begin() + 2, cdf_.end(), u);
  if (it != cdf_.end()) return static_cast<std::uint32_t>(it - cdf_.begin());
  std::uint64_t k = pmf_.size() - 1;
  double p = pmf_.back();
  double c = cdf_.back();
  while (c <= u) {
    p *= (static_cast<double>(k) - alpha_) / (static_cast<double>(k) + 1.0);
    c += p;
    ++k;
  }
  return static_cast<std::uint32_t>(k);
}

}  // namespace strahler
