#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace strahler {

// Deterministic random source identified by (seed, stream). Identical
// (seed, stream) pairs reproduce the exact same draw sequence; distinct
// stream ids give streams safe to hand to parallel workers.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    eng_.seed(seq);
  }

  std::uint64_t next_u64() { return eng_(); }

  // Uniform on [0,1), 53-bit resolution.
  double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Uniform on (0,1]; safe as a log argument.
  double u01_pos() { return 1.0 - u01(); }

  double uniform(double a, double b) { return a + (b - a) * u01(); }

  // Unbiased uniform integer in [0, n).
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return x % n;
  }

  double exponential(double mean) { return -mean * std::log(u01_pos()); }

  // Fractional part of an exponential with mean 1/a, i.e. FExp(a).
  double fexp(double a) {
    const double e = exponential(1.0 / a);
    return e - std::floor(e);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace strahler
