#pragma once

#include <cmath>
#include <cstdint>

namespace ridgecrest {

//! Counted-stream 64-bit generator (splitmix64 applied to a keyed counter).
//!
//! Every draw is a pure function of (seed, stream, counter), so values are
//! identical across platforms and independent of how many other streams were
//! consumed. Normal variates use Box-Muller with a fixed two-uniform cost per
//! draw to keep streams prefix-stable.
class CountedRng {
 public:
  explicit CountedRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(seed ^ mix(stream ^ 0x9e3779b97f4a7c15ULL))), counter_(0) {}

  std::uint64_t next_u64() { return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  //! Uniform double in [0, 1), 53 mantissa bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  //! Uniform double in [lo, hi).
  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  //! Standard normal via Box-Muller; always consumes exactly two uniforms.
  double next_normal() {
    double u1 = next_double();
    double u2 = next_double();
    // avoid log(0)
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  //! Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  static const char* algorithm() { return "splitmix64-counter/boxmuller"; }

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

//! Derives an independent child seed from a master seed and an index.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return CountedRng::mix(master ^ CountedRng::mix(index + 1));
}

}  // namespace ridgecrest
