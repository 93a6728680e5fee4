#ifndef SFCR_RNG_HPP
#define SFCR_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace sfcr {

// mt19937_64 with hand-rolled samplers so that a seed reproduces the same
// draws on every platform (std::*_distribution is implementation-defined).
// fork() derives an independent per-purpose stream via splitmix64 so the
// order of module calls does not perturb unrelated draws.
struct rng {
  std::uint64_t seed = 0;
  std::mt19937_64 eng;

  explicit rng(std::uint64_t s = 0) : seed(s), eng(s) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  rng fork(std::uint64_t salt) const { return rng(mix(seed ^ mix(salt))); }

  // uniform in [0, 1) with 53 random bits
  double uniform() { return std::ldexp(static_cast<double>(eng() >> 11), -53); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [lo, hi]
  int uniform_int(int lo, int hi) {
    if (hi <= lo) return lo;
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    std::uint64_t bound = (~0ull / span) * span;  // rejection: unbiased
    std::uint64_t v;
    do {
      v = eng();
    } while (v >= bound);
    return lo + static_cast<int>(v % span);
  }

  // geometric on {1, 2, ...} with success probability p, by inverse transform
  int geometric(double p) {
    if (p >= 1.0) return 1;
    double u = uniform();
    double k = std::ceil(std::log1p(-u) / std::log1p(-p));
    if (k < 1.0) k = 1.0;
    return static_cast<int>(k);
  }

  // k distinct values from {0, ..., n-1}, ascending order not guaranteed
  std::vector<int> sample(int n, int k) {
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    if (k > n) k = n;
    for (int i = 0; i < k; ++i) {
      int j = uniform_int(i, n - 1);
      std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
  }
};

} // namespace sfcr

#endif
