#pragma once

// Seeded random stream with fully specified output.
//
// std::mt19937_64 is bit-exact across standard libraries, but the
// <random> distributions are not, so uniform/normal draws are derived
// here directly from raw engine output. Every artifact produced from a
// given seed is therefore reproducible on any conforming toolchain.

#include "lrsar/common.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

namespace lrsar {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  // Independent substream for a named purpose (noise, phases, ...).
  Rng fork(std::uint64_t salt) const {
    return Rng(splitmix64(seed_ ^ splitmix64(salt)));
  }

  std::uint64_t bits() { return engine_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  Index uniform_index(Index n) {
    // Rejection sampling keeps the draw exactly uniform over [0, n).
    const std::uint64_t un = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = ~0ull - ~0ull % un;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<Index>(x % un);
  }

  // Standard normal via Box-Muller; second deviate is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * kPi * u2);
  }

  // Circular complex normal with unit variance, E|z|^2 = 1.
  cxd cnormal() {
    const double s = std::sqrt(0.5);
    return cxd(s * normal(), s * normal());
  }

  // k distinct indices from [0, n), returned sorted ascending.
  IndexList sample_indices(Index n, Index k) {
    require(k >= 0 && k <= n, "sample_indices: need 0 <= k <= n");
    std::vector<Index> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), Index{0});
    for (Index i = 0; i < k; ++i) {
      const Index j = i + uniform_index(n - i);
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    IndexList out(pool.begin(), pool.begin() + k);
    std::sort(out.begin(), out.end());
    return out;
  }

  CMatrix cnormal_matrix(Index rows, Index cols) {
    CMatrix m(rows, cols);
    for (Index c = 0; c < cols; ++c)
      for (Index r = 0; r < rows; ++r) m(r, c) = cnormal();
    return m;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace lrsar
