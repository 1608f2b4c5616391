#pragma once

// Seedable per-stream randomness.  Each (class, purpose) pair owns an
// mt19937_64 seeded through a splitmix64 chain, so adding or removing one
// traffic class never perturbs the draws of another.  Variates are produced
// by inverse CDF on the engine's raw 64-bit output; nothing here depends on
// libstdc++ distribution internals, which keeps summaries bit-reproducible.

#include <cmath>
#include <cstdint>
#include <random>

namespace usam {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

enum class Purpose : std::uint64_t { Arrival = 1, Service = 2 };

inline std::uint64_t stream_seed(std::uint64_t base, int class_idx, Purpose p) {
  std::uint64_t s = base;
  (void)splitmix64(s);  // decorrelate trivially related base seeds
  s ^= 0x1000u * static_cast<std::uint64_t>(class_idx + 1) +
       static_cast<std::uint64_t>(p);
  return splitmix64(s);
}

class Stream {
 public:
  Stream() : eng_(0) {}
  Stream(std::uint64_t base, int class_idx, Purpose p)
      : eng_(stream_seed(base, class_idx, p)) {}

  // Uniform on [0,1) with 53 random bits.
  double u01() { return (eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

  // rate in 1/ms; returns ms.  u01() < 1 keeps the log argument positive.
  double exponential(double rate) { return -std::log(1.0 - u01()) / rate; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace usam
