#include "lrsar/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <set>

using namespace lrsar;

TEST_CASE("engine output matches the standard-mandated mt19937_64 sequence") {
  // The 10000th draw from a default-seeded mt19937_64 is pinned by the
  // C++ standard; the raw bit stream is therefore portable.
  std::mt19937_64 reference(std::mt19937_64::default_seed);
  for (int i = 0; i < 9999; ++i) reference();
  REQUIRE(reference() == 9981545732273789042ull);

  Rng a(7), b(7);
  for (int i = 0; i < 100; ++i) REQUIRE(a.bits() == b.bits());
}

TEST_CASE("uniform draws live in [0,1) and reproduce by seed") {
  Rng a(123), b(123);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    REQUIRE(u == b.uniform());
  }
}

TEST_CASE("uniform and normal moments are sane") {
  Rng rng(99);
  const int n = 20000;
  double um = 0.0, nm = 0.0, nv = 0.0;
  for (int i = 0; i < n; ++i) um += rng.uniform();
  um /= n;
  REQUIRE(um > 0.47);
  REQUIRE(um < 0.53);
  std::vector<double> draws(n);
  for (double& d : draws) d = rng.normal();
  for (double d : draws) nm += d;
  nm /= n;
  for (double d : draws) nv += (d - nm) * (d - nm);
  nv /= n - 1;
  REQUIRE(std::abs(nm) < 0.03);
  REQUIRE(nv > 0.9);
  REQUIRE(nv < 1.1);
}

TEST_CASE("complex normal has unit power split across parts") {
  Rng rng(5);
  double p = 0.0, re = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const cxd z = rng.cnormal();
    p += std::norm(z);
    re += z.real();
  }
  REQUIRE(std::abs(p / n - 1.0) < 0.05);
  REQUIRE(std::abs(re / n) < 0.03);
}

TEST_CASE("forked streams are decorrelated and stable") {
  Rng root(2024);
  Rng f1 = root.fork(1), f2 = root.fork(2), f1b = root.fork(1);
  REQUIRE(f1.bits() != f2.bits());
  Rng f1c = root.fork(1);
  REQUIRE(f1b.bits() == f1c.bits());
  // Forking does not consume parent state.
  Rng root2(2024);
  REQUIRE(root.bits() == root2.bits());
}

TEST_CASE("sample_indices returns sorted distinct indices in range") {
  Rng rng(31);
  for (int rep = 0; rep < 50; ++rep) {
    const Index n = 1 + rng.uniform_index(40);
    const Index k = rng.uniform_index(n + 1);
    const IndexList s = rng.sample_indices(n, k);
    REQUIRE(static_cast<Index>(s.size()) == k);
    std::set<Index> seen;
    Index prev = -1;
    for (Index v : s) {
      REQUIRE(v >= 0);
      REQUIRE(v < n);
      REQUIRE(v > prev);
      prev = v;
      seen.insert(v);
    }
    REQUIRE(static_cast<Index>(seen.size()) == k);
  }
  const IndexList all = rng.sample_indices(7, 7);
  for (Index i = 0; i < 7; ++i) REQUIRE(all[static_cast<std::size_t>(i)] == i);
  REQUIRE_THROWS_AS(rng.sample_indices(3, 4), ValidationError);
}
