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

#include "beaver/ahe.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "beaver/errors.hpp"
#include "beaver/serialize.hpp"

namespace beaver::ahe {

namespace {

using ring::RingElement;

void require_same_scheme(const Ciphertext& a, const Ciphertext& b) {
  if (!a.c0.params().same_ring(b.c0.params()) || a.t != b.t) {
    throw ParamError("ciphertexts come from different parameter sets");
  }
}

// Message polynomial: value in the constant coefficient, zeros elsewhere.
RingElement embed(const ring::RingParams& rp, int64_t value) {
  std::vector<int64_t> coeffs(rp.n, 0);
  coeffs[0] = value;
  return RingElement(rp, std::move(coeffs));
}

int ceil_log2(uint64_t x) {
  if (x <= 1) return 0;
  return static_cast<int>(std::bit_width(x - 1));
}

int floor_log2(uint64_t x) {
  return static_cast<int>(std::bit_width(x)) - 1;
}

void write_header(serialize::ByteWriter& w, const char tag[5],
                  const ring::RingParams& rp, int64_t t) {
  w.magic(tag);
  w.u32(rp.n);
  w.u64(static_cast<uint64_t>(rp.q));
  w.u64(static_cast<uint64_t>(t));
}

struct Header {
  ring::RingParams ring;
  int64_t t;
};

Header read_header(serialize::ByteReader& r, const char tag[5]) {
  r.expect_magic(tag);
  uint32_t n = r.u32();
  int64_t q = static_cast<int64_t>(r.u64());
  int64_t t = static_cast<int64_t>(r.u64());
  return Header{ring::RingParams(n, q), t};
}

void write_element(serialize::ByteWriter& w, const RingElement& e) {
  for (int64_t c : e.coeffs()) {
    w.i64(c);
  }
}

RingElement read_element(serialize::ByteReader& r, const ring::RingParams& rp) {
  std::vector<int64_t> coeffs(rp.n);
  for (auto& c : coeffs) {
    c = r.i64();
  }
  return RingElement(rp, std::move(coeffs));
}

}  // namespace

AheParams::AheParams(ring::RingParams ring_params, int64_t t_plain)
    : ring(ring_params), t(t_plain) {
  if (t < 2) {
    throw ParamError("plaintext modulus t must be >= 2, got " + std::to_string(t));
  }
  if (t >= ring.q) {
    throw ParamError("constraint violated: t < q (t = " + std::to_string(t) +
                     ", q = " + std::to_string(ring.q) + ")");
  }
  if (std::gcd(t, ring.q) != 1) {
    throw ParamError("constraint violated: gcd(t, q) = 1 (t = " +
                     std::to_string(t) + ", q = " + std::to_string(ring.q) + ")");
  }
  const double bound = fresh_noise_bound();
  const double half_q = static_cast<double>(ring.q) / 2.0;
  if (!(bound < half_q)) {
    throw ParamError("constraint violated: fresh noise bound " +
                     std::to_string(bound) + " must stay below q/2 = " +
                     std::to_string(half_q));
  }
}

AheParams AheParams::defaults() {
  return AheParams(ring::RingParams(16, 140737488356903LL, 3.2, 6), 32843);
}

double AheParams::fresh_noise_bound() const {
  const double ts = static_cast<double>(ring.tail_bound) * ring.sigma;
  const double n = static_cast<double>(ring.n);
  // ||e*u|| and ||e1*s|| each expand by a factor n; e0 contributes once.
  return static_cast<double>(t) * (n * ts * ts + ts + n * ts * ts) +
         static_cast<double>(t) / 2.0;
}

KeyPair keygen(const AheParams& params, Prng& rng) {
  RingElement a = ring::sample_uniform(params.ring, rng);
  RingElement s = ring::sample_gaussian(params.ring, rng);
  RingElement e = ring::sample_gaussian(params.ring, rng);

  // p0 = [-a*s + t*e]_q
  RingElement p0 = ring::add(ring::neg(ring::negacyclic_mul(a, s)),
                             ring::scalar_mul(params.t, e));
  return KeyPair{PublicKey{std::move(p0), std::move(a), params.t},
                 SecretKey{std::move(s), params.t}};
}

Ciphertext encrypt(const PublicKey& pk, Plaintext m, Prng& rng) {
  const AheParams params = pk.params();
  if (m.value < params.min_plain() || m.value > params.max_plain()) {
    throw ParamError("plaintext " + std::to_string(m.value) +
                     " outside centered range for t = " + std::to_string(params.t));
  }
  RingElement u = ring::sample_gaussian(params.ring, rng);
  RingElement e0 = ring::sample_gaussian(params.ring, rng);
  RingElement e1 = ring::sample_gaussian(params.ring, rng);

  RingElement c0 = ring::add(
      ring::add(ring::negacyclic_mul(pk.p0, u), ring::scalar_mul(params.t, e0)),
      embed(params.ring, m.value));
  RingElement c1 =
      ring::add(ring::negacyclic_mul(pk.p1, u), ring::scalar_mul(params.t, e1));
  return Ciphertext{std::move(c0), std::move(c1), params.t, 0};
}

Plaintext decrypt(const SecretKey& sk, const Ciphertext& ct) {
  if (!sk.s.params().same_ring(ct.c0.params()) || sk.t != ct.t) {
    throw ParamError("secret key does not match ciphertext parameters");
  }
  RingElement d = ring::add(ct.c0, ring::negacyclic_mul(ct.c1, sk.s));
  return Plaintext{ring::center_mod(d[0], ct.t)};
}

DecryptDiagnostic decrypt_diagnostic(const SecretKey& sk, const Ciphertext& ct) {
  RingElement d = ring::add(ct.c0, ring::negacyclic_mul(ct.c1, sk.s));
  bool clean = true;
  for (size_t i = 1; i < d.degree(); ++i) {
    if (ring::center_mod(d[i], ct.t) != 0) {
      clean = false;
      break;
    }
  }
  return DecryptDiagnostic{Plaintext{ring::center_mod(d[0], ct.t)}, clean};
}

Ciphertext add_ct(const Ciphertext& a, const Ciphertext& b) {
  require_same_scheme(a, b);
  return Ciphertext{ring::add(a.c0, b.c0), ring::add(a.c1, b.c1), a.t,
                    std::max(a.level, b.level) + 1};
}

Ciphertext scalar_mul_plain(int64_t k, const Ciphertext& ct) {
  const AheParams params = ct.params();
  if (k < params.min_plain() || k > params.max_plain()) {
    throw ParamError("scalar " + std::to_string(k) +
                     " exceeds t/2; reduce mod t first");
  }
  return Ciphertext{ring::scalar_mul(k, ct.c0), ring::scalar_mul(k, ct.c1),
                    ct.t, ct.level + 1};
}

int noise_budget(const SecretKey& sk, const Ciphertext& ct,
                 std::optional<int64_t> claimed_m) {
  if (!sk.s.params().same_ring(ct.c0.params()) || sk.t != ct.t) {
    throw ParamError("secret key does not match ciphertext parameters");
  }
  RingElement d = ring::add(ct.c0, ring::negacyclic_mul(ct.c1, sk.s));
  const int64_t m = claimed_m.value_or(ring::center_mod(d[0], ct.t));

  // v = [c0 + c1*s]_q - m_poly, computed without re-reduction: |d[0]| is at
  // most q/2 and |m| at most t/2, so the difference cannot overflow.
  uint64_t norm = 0;
  for (size_t i = 0; i < d.degree(); ++i) {
    int64_t v = d[i] - (i == 0 ? m : 0);
    uint64_t mag = static_cast<uint64_t>(v < 0 ? -v : v);
    norm = std::max(norm, mag);
  }

  const int q_bits = floor_log2(static_cast<uint64_t>(sk.s.params().q) / 2);
  const int noise_bits = ceil_log2(std::max<uint64_t>(1, norm));
  return q_bits - noise_bits;
}

std::vector<uint8_t> to_bytes(const Ciphertext& ct) {
  serialize::ByteWriter w;
  write_header(w, "AHE1", ct.c0.params(), ct.t);
  write_element(w, ct.c0);
  write_element(w, ct.c1);
  return w.take();
}

std::vector<uint8_t> to_bytes(const PublicKey& pk) {
  serialize::ByteWriter w;
  write_header(w, "APK1", pk.p0.params(), pk.t);
  write_element(w, pk.p0);
  write_element(w, pk.p1);
  return w.take();
}

std::vector<uint8_t> to_bytes(const SecretKey& sk) {
  serialize::ByteWriter w;
  write_header(w, "ASK1", sk.s.params(), sk.t);
  write_element(w, sk.s);
  return w.take();
}

Ciphertext ciphertext_from_bytes(std::span<const uint8_t> data) {
  serialize::ByteReader r(data);
  Header h = read_header(r, "AHE1");
  RingElement c0 = read_element(r, h.ring);
  RingElement c1 = read_element(r, h.ring);
  r.expect_done();
  return Ciphertext{std::move(c0), std::move(c1), h.t, 0};
}

PublicKey public_key_from_bytes(std::span<const uint8_t> data) {
  serialize::ByteReader r(data);
  Header h = read_header(r, "APK1");
  RingElement p0 = read_element(r, h.ring);
  RingElement p1 = read_element(r, h.ring);
  r.expect_done();
  return PublicKey{std::move(p0), std::move(p1), h.t};
}

SecretKey secret_key_from_bytes(std::span<const uint8_t> data) {
  serialize::ByteReader r(data);
  Header h = read_header(r, "ASK1");
  RingElement s = read_element(r, h.ring);
  r.expect_done();
  return SecretKey{std::move(s), h.t};
}

}  // namespace beaver::ahe
