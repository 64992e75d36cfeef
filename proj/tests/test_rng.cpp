/*
 * Copyright 2026 The prequel authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <cstdint>
#include <set>
#include <vector>

#include "prequel/rng.hpp"
#include "prequel/stats.hpp"

using prequel::rng::SplitMix64;

TEST_CASE("same seed gives the same stream") {
  SplitMix64 a(42);
  SplitMix64 b(42);
  for (int i = 0; i < 1000; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("next is the finalizer applied to the advanced counter") {
  const std::uint64_t seed = 0xDEADBEEFCAFEF00DULL;
  SplitMix64 g(seed);
  CHECK(g.next() == SplitMix64::mix(seed + SplitMix64::kGamma));
  CHECK(g.next() == SplitMix64::mix(seed + 2 * SplitMix64::kGamma));
  CHECK(g.state() == seed + 2 * SplitMix64::kGamma);
}

TEST_CASE("fnv1a reference values") {
  // Offset basis for the empty string, published FNV-1a test vector for "a".
  CHECK(SplitMix64::fnv1a("") == 0xCBF29CE484222325ULL);
  CHECK(SplitMix64::fnv1a("a") == 0xAF63DC4C8601EC8CULL);
  CHECK(SplitMix64::fnv1a("ab") != SplitMix64::fnv1a("ba"));
}

TEST_CASE("split matches the documented derivation") {
  SplitMix64 g(20260817);
  const auto child = g.split("replicate", 7);
  CHECK(child.state() == SplitMix64::derive(g.state(), "replicate", 7));
  // Splitting never advances the parent.
  SplitMix64 h(20260817);
  CHECK(g.state() == h.state());
}

TEST_CASE("derive separates tags and indices") {
  const std::uint64_t seed = 99;
  std::set<std::uint64_t> states;
  for (std::uint64_t i = 0; i < 64; ++i) {
    states.insert(SplitMix64::derive(seed, "alpha", i));
    states.insert(SplitMix64::derive(seed, "beta", i));
  }
  CHECK(states.size() == 128);
}

TEST_CASE("substreams are not shifted copies of each other") {
  SplitMix64 g(5);
  auto s0 = g.split("stream", 0);
  auto s1 = g.split("stream", 1);
  int collisions = 0;
  std::vector<std::uint64_t> first;
  for (int i = 0; i < 64; ++i) first.push_back(s0.next());
  for (int i = 0; i < 64; ++i) {
    const std::uint64_t v = s1.next();
    for (std::uint64_t w : first) {
      if (v == w) ++collisions;
    }
  }
  CHECK(collisions == 0);
}

TEST_CASE("next_double stays in the half-open unit interval") {
  SplitMix64 g(123);
  for (int i = 0; i < 100000; ++i) {
    const double u = g.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("bernoulli honours its degenerate probabilities") {
  SplitMix64 g(7);
  for (int i = 0; i < 10000; ++i) CHECK_FALSE(g.bernoulli(0.0));
  for (int i = 0; i < 10000; ++i) CHECK(g.bernoulli(1.0));
}

TEST_CASE("bernoulli tracks its probability") {
  SplitMix64 g(11);
  int hits = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) hits += g.bernoulli(0.3) ? 1 : 0;
  const double freq = static_cast<double>(hits) / n;
  CHECK(freq == doctest::Approx(0.3).epsilon(0.02));
}

TEST_CASE("below covers its range roughly evenly") {
  SplitMix64 g(13);
  std::vector<int> counts(3, 0);
  const int n = 30000;
  for (int i = 0; i < n; ++i) {
    const std::uint64_t v = g.below(3);
    REQUIRE(v < 3);
    ++counts[static_cast<std::size_t>(v)];
  }
  for (int c : counts) {
    CHECK(c > n / 3 - 600);
    CHECK(c < n / 3 + 600);
  }
}

TEST_CASE("uniform doubles pass a one-sample distribution check") {
  SplitMix64 g(20260817);
  std::vector<double> u;
  u.reserve(2000);
  for (int i = 0; i < 2000; ++i) u.push_back(g.next_double());
  const double d = prequel::stats::ks_statistic_uniform(u);
  CHECK(d < prequel::stats::ks_critical_value(2000, 0.01));
}
