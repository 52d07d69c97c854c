// Copyright 2026 The Beaver Forge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "beaver/prng.hpp"
#include "doctest.h"
#include "golden_values.hpp"
#include "oracles.hpp"

using beaver::Prng;

TEST_SUITE("prng") {

TEST_CASE("same seed replays the same stream") {
  Prng a(987654321);
  Prng b(987654321);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
}

TEST_CASE("golden stream for seed 42") {
  Prng p(42);
  for (uint64_t want : golden::kPrng42First) {
    CHECK(p.next_u64() == want);
  }
  CHECK(Prng(42).derive("label").next_u64() == golden::kPrng42DeriveLabel);
  CHECK(Prng(42).derive(uint64_t{7}).next_u64() == golden::kPrng42DeriveIndex7);
}

TEST_CASE("derive ignores parent stream position") {
  Prng fresh(31337);
  Prng spent(31337);
  for (int i = 0; i < 100; ++i) {
    spent.next_u64();
  }
  CHECK(fresh.derive("child").next_u64() == spent.derive("child").next_u64());
  CHECK(fresh.derive(uint64_t{5}).next_u64() ==
        spent.derive(uint64_t{5}).next_u64());
}

TEST_CASE("derived streams differ per label and from the parent") {
  Prng p(5);
  const uint64_t parent = Prng(5).next_u64();
  const uint64_t a = p.derive("a").next_u64();
  const uint64_t b = p.derive("b").next_u64();
  const uint64_t i0 = p.derive(uint64_t{0}).next_u64();
  const uint64_t i1 = p.derive(uint64_t{1}).next_u64();
  CHECK(a != b);
  CHECK(i0 != i1);
  CHECK(a != parent);
  CHECK(i0 != parent);
}

TEST_CASE("uniform_below stays in range and rejects bound 0") {
  Prng p(1);
  for (int i = 0; i < 10000; ++i) {
    CHECK(p.uniform_below(7) < 7);
  }
  CHECK(p.uniform_below(1) == 0);
  CHECK_THROWS_AS(p.uniform_below(0), std::invalid_argument);
}

TEST_CASE("uniform_centered covers the symmetric range") {
  Prng p(2);
  const int64_t m = 101;
  std::vector<bool> seen(static_cast<size_t>(m), false);
  for (int i = 0; i < 20000; ++i) {
    const int64_t v = p.uniform_centered(m);
    CHECK(v >= -(m - 1) / 2);
    CHECK(v <= (m - 1) / 2);
    seen[static_cast<size_t>(v + (m - 1) / 2)] = true;
  }
  for (bool s : seen) {
    CHECK(s);
  }
  CHECK_THROWS_AS(p.uniform_centered(1), std::invalid_argument);
}

TEST_CASE("uniform_below is unbiased across a non-power-of-two bound") {
  // 16 buckets over [0, 48): rejection sampling has to even out the
  // modulo bias that naive masking would leave.
  Prng p(77);
  const uint64_t bound = 48;
  std::vector<uint64_t> counts(16, 0);
  const uint64_t total = 100000;
  for (uint64_t i = 0; i < total; ++i) {
    counts[p.uniform_below(bound) * 16 / bound]++;
  }
  CHECK(oracles::chi_square_uniform(counts, total) < oracles::kChi2Crit15);
}

TEST_CASE("from_hex accepts 0x prefix and bare digits") {
  CHECK(Prng::from_hex("0x2a").seed() == 42);
  CHECK(Prng::from_hex("2A").seed() == 42);
  CHECK(Prng::from_hex("ffffffffffffffff").seed() == ~uint64_t{0});
  CHECK(Prng::from_hex("0x2a").next_u64() == Prng(42).next_u64());
  CHECK_THROWS_AS(Prng::from_hex(""), std::invalid_argument);
  CHECK_THROWS_AS(Prng::from_hex("0x"), std::invalid_argument);
  CHECK_THROWS_AS(Prng::from_hex("xyz"), std::invalid_argument);
  CHECK_THROWS_AS(Prng::from_hex("10000000000000000"), std::invalid_argument);
}

}  // TEST_SUITE("prng")
