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

#include "beaver/ring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

#include "beaver/errors.hpp"

namespace beaver::ring {

namespace {

bool is_power_of_two(uint32_t x) { return x != 0 && (x & (x - 1)) == 0; }

void require_same_params(const RingElement& a, const RingElement& b) {
  if (!a.params().same_ring(b.params())) {
    throw ParamError("ring elements have mismatched params");
  }
}

// True when sum of n products of centered values fits __int128 with margin.
bool raw_accumulation_safe(const RingParams& p) {
  unsigned __int128 half = static_cast<unsigned __int128>(p.half_q());
  unsigned __int128 cap = (static_cast<unsigned __int128>(1) << 126) / p.n;
  return half * half <= cap;
}

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(
      static_cast<unsigned __int128>(a) * b % m);
}

uint64_t powmod_u64(uint64_t base, uint64_t exp, uint64_t m) {
  uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod_u64(result, base, m);
    base = mulmod_u64(base, base, m);
    exp >>= 1;
  }
  return result;
}

}  // namespace

RingParams::RingParams(uint32_t n_, int64_t q_, double sigma_, int32_t tail_bound_)
    : n(n_), q(q_), sigma(sigma_), tail_bound(tail_bound_) {
  if (!is_power_of_two(n)) {
    throw ParamError("ring degree n must be a power of two, got " + std::to_string(n));
  }
  if (q <= 2 || q % 2 == 0) {
    throw ParamError("modulus q must be odd and > 2, got " + std::to_string(q));
  }
  if (!(sigma > 0.0)) {
    throw ParamError("sigma must be > 0");
  }
  if (tail_bound < 1) {
    throw ParamError("tail_bound must be >= 1, got " + std::to_string(tail_bound));
  }
}

RingElement::RingElement(const RingParams& params)
    : params_(params), coeffs_(params.n, 0) {}

RingElement::RingElement(const RingParams& params, std::vector<int64_t> coeffs)
    : params_(params), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != params_.n) {
    throw ParamError("coefficient count " + std::to_string(coeffs_.size()) +
                     " does not match ring degree " + std::to_string(params_.n));
  }
  const int64_t half = params_.half_q();
  for (int64_t c : coeffs_) {
    if (c < -half || c > half) {
      throw ParamError("coefficient " + std::to_string(c) +
                       " outside the centered range for q = " +
                       std::to_string(params_.q));
    }
  }
}

std::string RingElement::to_json() const {
  std::ostringstream out;
  out << '[';
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    if (i) out << ',';
    out << coeffs_[i];
  }
  out << ']';
  return out.str();
}

int64_t reduce_centered(int64_t a, int64_t q) {
  if (q <= 2 || q % 2 == 0) {
    throw ParamError("reduce_centered: q must be odd and > 2, got " + std::to_string(q));
  }
  return center_mod(a, q);
}

int64_t center_mod(int64_t a, int64_t m) {
  int64_t r = a % m;
  if (r > m / 2) {
    r -= m;
  } else if (r < -((m - 1) / 2)) {
    r += m;
  }
  return r;
}

int64_t center_mod_wide(__int128 a, int64_t m) {
  int64_t r = static_cast<int64_t>(a % m);
  if (r > m / 2) {
    r -= m;
  } else if (r < -((m - 1) / 2)) {
    r += m;
  }
  return r;
}

RingElement add(const RingElement& a, const RingElement& b) {
  require_same_params(a, b);
  RingElement out(a.params_);
  const int64_t q = a.params_.q;
  for (size_t i = 0; i < a.coeffs_.size(); ++i) {
    out.coeffs_[i] = center_mod(a.coeffs_[i] + b.coeffs_[i], q);
  }
  return out;
}

RingElement sub(const RingElement& a, const RingElement& b) {
  require_same_params(a, b);
  RingElement out(a.params_);
  const int64_t q = a.params_.q;
  for (size_t i = 0; i < a.coeffs_.size(); ++i) {
    out.coeffs_[i] = center_mod(a.coeffs_[i] - b.coeffs_[i], q);
  }
  return out;
}

RingElement neg(const RingElement& a) {
  RingElement out(a.params_);
  for (size_t i = 0; i < a.coeffs_.size(); ++i) {
    // Centered representatives are symmetric for odd q.
    out.coeffs_[i] = -a.coeffs_[i];
  }
  return out;
}

RingElement negacyclic_mul(const RingElement& a, const RingElement& b) {
  require_same_params(a, b);
  const RingParams& p = a.params_;
  const uint32_t n = p.n;
  const int64_t q = p.q;
  RingElement out(p);

  if (raw_accumulation_safe(p)) {
    for (uint32_t k = 0; k < n; ++k) {
      __int128 acc = 0;
      // x^(i+j) folds to -x^(i+j-n) past degree n.
      for (uint32_t i = 0; i <= k; ++i) {
        acc += static_cast<__int128>(a.coeffs_[i]) * b.coeffs_[k - i];
      }
      for (uint32_t i = k + 1; i < n; ++i) {
        acc -= static_cast<__int128>(a.coeffs_[i]) * b.coeffs_[n + k - i];
      }
      out.coeffs_[k] = center_mod_wide(acc, q);
    }
  } else {
    // Near-2^63 moduli: reduce each product before accumulating.
    for (uint32_t k = 0; k < n; ++k) {
      __int128 acc = 0;
      for (uint32_t i = 0; i <= k; ++i) {
        acc += center_mod_wide(
            static_cast<__int128>(a.coeffs_[i]) * b.coeffs_[k - i], q);
      }
      for (uint32_t i = k + 1; i < n; ++i) {
        acc -= center_mod_wide(
            static_cast<__int128>(a.coeffs_[i]) * b.coeffs_[n + k - i], q);
      }
      out.coeffs_[k] = center_mod_wide(acc, q);
    }
  }
  return out;
}

RingElement scalar_mul(int64_t k, const RingElement& a) {
  RingElement out(a.params_);
  const int64_t q = a.params_.q;
  for (size_t i = 0; i < a.coeffs_.size(); ++i) {
    out.coeffs_[i] =
        center_mod_wide(static_cast<__int128>(k) * a.coeffs_[i], q);
  }
  return out;
}

RingElement sample_uniform(const RingParams& params, Prng& rng) {
  std::vector<int64_t> coeffs(params.n);
  for (auto& c : coeffs) {
    c = rng.uniform_centered(params.q);
  }
  return RingElement(params, std::move(coeffs));
}

GaussianSampler::GaussianSampler(double sigma, int32_t tail_bound) {
  if (!(sigma > 0.0) || tail_bound < 1) {
    throw ParamError("gaussian sampler needs sigma > 0 and tail_bound >= 1");
  }
  max_value_ = static_cast<int64_t>(tail_bound * sigma);
  const int64_t support = 2 * max_value_ + 1;

  std::vector<double> weights(support);
  double total = 0.0;
  for (int64_t z = -max_value_; z <= max_value_; ++z) {
    double w = std::exp(-static_cast<double>(z) * static_cast<double>(z) /
                        (2.0 * sigma * sigma));
    weights[z + max_value_] = w;
    total += w;
  }

  cdf_.resize(support);
  double cumulative = 0.0;
  const double scale = static_cast<double>(std::numeric_limits<uint64_t>::max());
  for (int64_t i = 0; i < support; ++i) {
    cumulative += weights[i] / total;
    double threshold = std::round(cumulative * scale);
    cdf_[i] = threshold >= scale ? std::numeric_limits<uint64_t>::max()
                                 : static_cast<uint64_t>(threshold);
  }
  cdf_.back() = std::numeric_limits<uint64_t>::max();
}

int64_t GaussianSampler::sample(Prng& rng) const {
  const uint64_t r = rng.next_u64();
  auto it = std::lower_bound(cdf_.begin(), cdf_.end(), r);
  return static_cast<int64_t>(it - cdf_.begin()) - max_value_;
}

RingElement sample_gaussian(const RingParams& params, Prng& rng) {
  // Tables are deterministic given (sigma, tail_bound); cache per shape.
  static std::mutex cache_mutex;
  static std::map<std::pair<double, int32_t>, GaussianSampler> cache;

  const GaussianSampler* sampler;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto key = std::make_pair(params.sigma, params.tail_bound);
    auto it = cache.find(key);
    if (it == cache.end()) {
      it = cache.emplace(key, GaussianSampler(params.sigma, params.tail_bound)).first;
    }
    sampler = &it->second;
  }

  std::vector<int64_t> coeffs(params.n);
  for (auto& c : coeffs) {
    c = sampler->sample(rng);
  }
  return RingElement(params, std::move(coeffs));
}

int64_t inf_norm(const RingElement& a) {
  int64_t best = 0;
  for (int64_t c : a.coeffs()) {
    best = std::max(best, std::abs(c));
  }
  return best;
}

bool is_probable_prime(uint64_t x) {
  if (x < 2) return false;
  for (uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                     29ULL, 31ULL, 37ULL}) {
    if (x == p) return true;
    if (x % p == 0) return false;
  }
  uint64_t d = x - 1;
  int r = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++r;
  }
  // This witness set is exact for every 64-bit integer.
  for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                     29ULL, 31ULL, 37ULL}) {
    uint64_t y = powmod_u64(a, d, x);
    if (y == 1 || y == x - 1) continue;
    bool composite = true;
    for (int i = 0; i < r - 1; ++i) {
      y = mulmod_u64(y, y, x);
      if (y == x - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

}  // namespace beaver::ring
