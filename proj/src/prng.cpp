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

#include "beaver/prng.hpp"

#include <limits>

#include "beaver/errors.hpp"

namespace beaver {

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

Prng::Prng(uint64_t seed) : seed_(seed), gen_(seed) {}

Prng Prng::from_hex(std::string_view hex) {
  if (hex.size() >= 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X')) {
    hex.remove_prefix(2);
  }
  if (hex.empty() || hex.size() > 16) {
    throw ParamError("seed must be 1..16 hex digits");
  }
  uint64_t value = 0;
  for (char c : hex) {
    int digit;
    if (c >= '0' && c <= '9') {
      digit = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      digit = c - 'a' + 10;
    } else if (c >= 'A' && c <= 'F') {
      digit = c - 'A' + 10;
    } else {
      throw ParamError("seed contains a non-hex character");
    }
    value = (value << 4) | static_cast<uint64_t>(digit);
  }
  return Prng(value);
}

uint64_t Prng::next_u64() { return gen_(); }

uint64_t Prng::uniform_below(uint64_t bound) {
  if (bound == 0) {
    throw ParamError("uniform_below: bound must be >= 1");
  }
  // Rejection from the top keeps the draw unbiased.
  const uint64_t limit =
      std::numeric_limits<uint64_t>::max() -
      std::numeric_limits<uint64_t>::max() % bound;
  for (;;) {
    uint64_t v = gen_();
    if (v < limit) {
      return v % bound;
    }
  }
}

int64_t Prng::uniform_centered(int64_t modulus) {
  if (modulus < 2) {
    throw ParamError("uniform_centered: modulus must be >= 2");
  }
  int64_t r = static_cast<int64_t>(uniform_below(static_cast<uint64_t>(modulus)));
  if (r > modulus / 2) {
    r -= modulus;
  }
  return r;
}

Prng Prng::derive(std::string_view label) const {
  return Prng(splitmix64(seed_ ^ splitmix64(fnv1a64(label))));
}

Prng Prng::derive(uint64_t index) const {
  return Prng(splitmix64(seed_ ^ splitmix64(0x6265617665726673ULL + index)));
}

}  // namespace beaver
