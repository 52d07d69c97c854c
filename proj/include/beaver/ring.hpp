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

#ifndef BEAVER_RING_HPP_
#define BEAVER_RING_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "beaver/prng.hpp"

namespace beaver::ring {

// Exact arithmetic in R_q = Z_q[x]/(x^n + 1) with centered coefficients.
//
// Coefficients are the unique representatives in (-q/2, q/2]; for odd q this
// is the integer range [-(q-1)/2, (q-1)/2]. Multiplication is negacyclic
// schoolbook convolution with 128-bit accumulation, which is exact for any
// odd q below 2^63. n is small in every shipped configuration, so no
// transform-based acceleration is attempted.

struct RingParams {
  uint32_t n;         // polynomial degree, a power of two
  int64_t q;          // odd coefficient modulus, q > 2
  double sigma;       // std deviation of the error distribution
  int32_t tail_bound; // gaussian support cutoff, in units of sigma

  RingParams(uint32_t n, int64_t q, double sigma = 3.2, int32_t tail_bound = 6);

  // Largest centered representative, (q-1)/2 for odd q.
  int64_t half_q() const { return (q - 1) / 2; }

  // Largest magnitude the gaussian sampler can emit.
  int64_t gaussian_support() const {
    return static_cast<int64_t>(tail_bound * sigma);
  }

  bool operator==(const RingParams& other) const {
    return n == other.n && q == other.q && sigma == other.sigma &&
           tail_bound == other.tail_bound;
  }

  // Arithmetic compatibility: same ring, regardless of sampler config.
  // Deserialized elements carry default sampler settings, so operations
  // check this rather than full equality.
  bool same_ring(const RingParams& other) const {
    return n == other.n && q == other.q;
  }
};

class RingElement {
 public:
  // Zero polynomial.
  explicit RingElement(const RingParams& params);

  // Takes ownership of `coeffs`; must have exactly n entries, each already
  // a centered representative mod q.
  RingElement(const RingParams& params, std::vector<int64_t> coeffs);

  const RingParams& params() const { return params_; }
  uint32_t degree() const { return params_.n; }
  std::span<const int64_t> coeffs() const { return coeffs_; }
  int64_t operator[](size_t i) const { return coeffs_[i]; }

  bool operator==(const RingElement& other) const {
    return params_ == other.params_ && coeffs_ == other.coeffs_;
  }

  // Debug text form: a JSON array of the coefficients.
  std::string to_json() const;

 private:
  RingParams params_;
  std::vector<int64_t> coeffs_;

  friend RingElement add(const RingElement&, const RingElement&);
  friend RingElement sub(const RingElement&, const RingElement&);
  friend RingElement neg(const RingElement&);
  friend RingElement negacyclic_mul(const RingElement&, const RingElement&);
  friend RingElement scalar_mul(int64_t, const RingElement&);
};

// Centered representative of a mod q; rejects even q or q <= 2.
int64_t reduce_centered(int64_t a, int64_t q);

// Centered reduction without the oddness check, for plaintext-modulus
// arithmetic where m may be any modulus >= 2.
int64_t center_mod(int64_t a, int64_t m);

// 128-bit input variant used by the convolution kernel.
int64_t center_mod_wide(__int128 a, int64_t m);

RingElement add(const RingElement& a, const RingElement& b);
RingElement sub(const RingElement& a, const RingElement& b);
RingElement neg(const RingElement& a);

// a * b reduced modulo x^n + 1 and q. Intermediate products are accumulated
// in 128 bits; when n * (q/2)^2 would not fit, each product is reduced
// before accumulation instead.
RingElement negacyclic_mul(const RingElement& a, const RingElement& b);

// Coefficient-wise k * a, centered mod q. k may be any int64.
RingElement scalar_mul(int64_t k, const RingElement& a);

// Uniform element of R_q.
RingElement sample_uniform(const RingParams& params, Prng& rng);

// Element with coefficients drawn independently from the discrete gaussian
// of width sigma, truncated at tail_bound * sigma.
RingElement sample_gaussian(const RingParams& params, Prng& rng);

int64_t inf_norm(const RingElement& a);

// Discrete gaussian over the integers via cumulative-table inversion on the
// truncated support. Build once, sample many.
class GaussianSampler {
 public:
  GaussianSampler(double sigma, int32_t tail_bound);

  int64_t sample(Prng& rng) const;
  int64_t support() const { return max_value_; }

 private:
  int64_t max_value_;
  std::vector<uint64_t> cdf_;  // cdf_[i] covers value i - max_value_
};

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_probable_prime(uint64_t x);

}  // namespace beaver::ring

#endif  // BEAVER_RING_HPP_
