#ifndef CONROUTE_RNG_HPP
#define CONROUTE_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace conroute {

// Mixes a user seed with a stage tag so every pipeline stage draws from its
// own stream.  mt19937_64 output is fully specified by the standard, and all
// distribution logic below is hand-rolled, so identical seeds give identical
// bytes on every platform.
inline uint64_t splitmix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline uint64_t hash_seed(uint64_t seed, std::string_view tag) {
  uint64_t h = splitmix64(seed);
  for (unsigned char c : tag) h = splitmix64(h ^ c);
  return h;
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next_u64() { return eng_(); }

  // Uniform in [0,1) with 53 random bits.
  double next_unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0,n), rejection-sampled to avoid modulo bias.
  uint64_t next_below(uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::next_below: n must be positive");
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
      v = eng_();
    } while (v >= limit);
    return v % n;
  }

  // Uniform integer in [lo, hi] inclusive.
  int64_t next_int(int64_t lo, int64_t hi) {
    if (lo > hi) throw std::invalid_argument("Rng::next_int: empty range");
    return lo + static_cast<int64_t>(next_below(static_cast<uint64_t>(hi - lo) + 1));
  }

  // Triangular(min=a, mode=c, max=b) via inverse CDF.
  double triangular(double a, double c, double b) {
    if (!(a <= c && c <= b && a < b))
      throw std::invalid_argument("Rng::triangular: need min <= mode <= max, min < max");
    double u = next_unit();
    double fc = (c - a) / (b - a);
    if (u < fc) return a + std::sqrt(u * (b - a) * (c - a));
    return b - std::sqrt((1.0 - u) * (b - a) * (b - c));
  }

  // Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace conroute

#endif
