#pragma once

// Seeded randomness. The engine is std::mt19937_64, whose output sequence is
// fixed by the standard; all derived draws below use only raw engine words, so
// samples are identical across platforms and standard libraries.

#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <vector>

namespace lowcolor {

using Seed = std::uint64_t;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Seed of trial `t` under master seed `master`.
inline Seed sub_seed(Seed master, std::uint64_t t) {
  return splitmix64(splitmix64(master) ^ (t * 0xD1B54A32D192ED03ull + 1));
}

class Rng {
 public:
  explicit Rng(Seed seed) : engine_(seed) {}

  std::uint64_t bits64() { return engine_(); }

  // Fair coin as +1/-1, one engine word per 64 coins.
  std::int8_t sign() {
    if (nbits_ == 0) {
      buffer_ = engine_();
      nbits_ = 64;
    }
    const bool b = buffer_ & 1u;
    buffer_ >>= 1;
    --nbits_;
    return b ? 1 : -1;
  }

  // Uniform in [0, bound), unbiased by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return x % bound;
  }

  // Uniform in [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  template <class T>
  void shuffle(std::span<T> xs) {
    for (std::size_t i = xs.size(); i > 1; --i) std::swap(xs[i - 1], xs[below(i)]);
  }

  std::vector<int> permutation(int n) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    shuffle(std::span<int>(p));
    return p;
  }

 private:
  std::mt19937_64 engine_;
  std::uint64_t buffer_ = 0;
  int nbits_ = 0;
};

}  // namespace lowcolor
