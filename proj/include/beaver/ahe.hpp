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

#ifndef BEAVER_AHE_HPP_
#define BEAVER_AHE_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "beaver/prng.hpp"
#include "beaver/ring.hpp"

namespace beaver::ahe {

// Additive-only homomorphic encryption over R_q with plaintext space the
// centered residues mod t.
//
//   keygen:  a uniform, s, e gaussian; pk = ([-a*s + t*e]_q, a), sk = s
//   encrypt: u, e0, e1 gaussian; ct = ([p0*u + t*e0 + m]_q, [p1*u + t*e1]_q)
//   decrypt: [[c0 + c1*s]_q]_t, constant coefficient
//
// Supported homomorphisms are ciphertext addition and multiplication by a
// public scalar k with |k| <= t/2. Decryption is correct while the
// accumulated value m + t*(e*u + e0 + e1*s) stays below q/2 in infinity
// norm; noise_budget() measures the actual headroom given the secret key.
//
// Messages are scalars embedded in the constant coefficient; the remaining
// coefficients carry no data and stay zero under every supported operation.

struct AheParams {
  ring::RingParams ring;
  int64_t t;  // plaintext modulus, 2 <= t < q, coprime to q

  AheParams(ring::RingParams ring_params, int64_t t_plain);

  // Stock parameter set: n = 16, q = 140737488356903 (48-bit safe prime),
  // t = 32843 (16-bit safe prime), sigma = 3.2, tail_bound = 6.
  static AheParams defaults();

  // Largest / smallest centered plaintext representative.
  int64_t max_plain() const { return t / 2; }
  int64_t min_plain() const { return -((t - 1) / 2); }

  // Conservative bound on |m + t*(e*u + e0 + e1*s)| for a fresh
  // ciphertext, with gaussian coefficients taken at the truncation cutoff.
  double fresh_noise_bound() const;

  bool operator==(const AheParams& other) const {
    return ring == other.ring && t == other.t;
  }

  // Same scheme instance as far as the algebra is concerned.
  bool compatible(const AheParams& other) const {
    return ring.same_ring(other.ring) && t == other.t;
  }
};

struct Plaintext {
  int64_t value = 0;
};

struct PublicKey {
  ring::RingElement p0;  // [-a*s + t*e]_q
  ring::RingElement p1;  // a
  int64_t t;

  AheParams params() const { return AheParams(p0.params(), t); }
};

struct SecretKey {
  ring::RingElement s;
  int64_t t;

  AheParams params() const { return AheParams(s.params(), t); }
};

struct KeyPair {
  PublicKey pk;
  SecretKey sk;
};

struct Ciphertext {
  ring::RingElement c0;
  ring::RingElement c1;
  int64_t t;
  uint32_t level = 0;  // count of homomorphic ops applied; diagnostic only

  AheParams params() const { return AheParams(c0.params(), t); }
};

KeyPair keygen(const AheParams& params, Prng& rng);

// Rejects m outside the centered plaintext range.
Ciphertext encrypt(const PublicKey& pk, Plaintext m, Prng& rng);

Plaintext decrypt(const SecretKey& sk, const Ciphertext& ct);

// decrypt() plus a check that the non-constant coefficients reduce to zero
// mod t, which they do for every well-formed scalar-encoded ciphertext.
struct DecryptDiagnostic {
  Plaintext value;
  bool higher_coeffs_zero;
};
DecryptDiagnostic decrypt_diagnostic(const SecretKey& sk, const Ciphertext& ct);

Ciphertext add_ct(const Ciphertext& a, const Ciphertext& b);

// Scales both components by k; |k| must not exceed t/2 (reduce first).
Ciphertext scalar_mul_plain(int64_t k, const Ciphertext& ct);

// Bits of headroom before decryption fails:
//   floor(log2(q/2)) - ceil(log2(max(1, ||v||)))
// where v = [c0 + c1*s]_q - m_poly and m_poly holds claimed_m (or the
// decrypted value) in its constant coefficient. Negative means the
// ciphertext can no longer be trusted to decrypt correctly.
int noise_budget(const SecretKey& sk, const Ciphertext& ct,
                 std::optional<int64_t> claimed_m = std::nullopt);

// Wire formats. Ciphertext: "AHE1", u32 n, u64 q, u64 t, c0, c1 with
// coefficients as signed 64-bit little-endian. Public key: "APK1", same
// layout with p0, p1. Secret key: "ASK1", header plus s.
std::vector<uint8_t> to_bytes(const Ciphertext& ct);
std::vector<uint8_t> to_bytes(const PublicKey& pk);
std::vector<uint8_t> to_bytes(const SecretKey& sk);
Ciphertext ciphertext_from_bytes(std::span<const uint8_t> data);
PublicKey public_key_from_bytes(std::span<const uint8_t> data);
SecretKey secret_key_from_bytes(std::span<const uint8_t> data);

}  // namespace beaver::ahe

#endif  // BEAVER_AHE_HPP_
