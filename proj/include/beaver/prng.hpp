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

#ifndef BEAVER_PRNG_HPP_
#define BEAVER_PRNG_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace beaver {

// Deterministic random generator. All randomness in the library flows
// through an injected Prng so that protocol runs replay bit-identically
// from a master seed. Not a cryptographic generator; transcript
// reproducibility is the goal here, side-channel-grade sampling is not.
//
// std::mt19937_64 output is fully specified by the standard, and the
// uniform draws below use plain rejection sampling, so the stream does not
// depend on the standard library implementation.
class Prng {
 public:
  explicit Prng(uint64_t seed);

  // Parses a seed given as hex digits, with or without a 0x prefix.
  static Prng from_hex(std::string_view hex);

  uint64_t next_u64();

  // Uniform draw from [0, bound). bound must be >= 1.
  uint64_t uniform_below(uint64_t bound);

  // Uniform draw from the centered residue set of `modulus` (odd modulus m
  // gives [-(m-1)/2, (m-1)/2]). modulus must be >= 2.
  int64_t uniform_centered(int64_t modulus);

  // Independent child stream. Derivation depends only on this generator's
  // seed and the label, never on how much of the parent stream has been
  // consumed, so worker fan-out stays deterministic.
  Prng derive(std::string_view label) const;
  Prng derive(uint64_t index) const;

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace beaver

#endif  // BEAVER_PRNG_HPP_
