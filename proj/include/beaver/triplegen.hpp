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

#ifndef BEAVER_TRIPLEGEN_HPP_
#define BEAVER_TRIPLEGEN_HPP_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "beaver/ahe.hpp"
#include "beaver/prng.hpp"
#include "beaver/serialize.hpp"
#include "beaver/transport.hpp"

namespace beaver::triplegen {

// Two-party shared scalar product (SSP) and the Beaver triple generator
// built on it.
//
// Alice holds (pk, sk) and input vector x_A; Bob holds pk and x_B.
//   round 1: Alice sends c_A = (Enc(x_A[0]), ..., Enc(x_A[l-1]))
//   round 2: Bob replies c_B = sum_i x_B[i] * c_A[i] + Enc(r_B) for a
//            single uniform mask r_B, and keeps s_B = -r_B
//   round 3: Alice decrypts c_B into s_A = sum_i x_A[i] x_B[i] + r_B
// so s_A + s_B is the inner product mod t. A run with l = 1 and random
// inputs is exactly one Beaver triple: (a, b, c) = (x_A, x_B, x_A x_B)
// with Alice holding (x_A, 0, s_A) and Bob holding (0, x_B, s_B).

enum class Party : uint8_t { alice = 0, bob = 1 };

const char* party_name(Party p);
Party party_from_name(const std::string& name);

struct TripleShare {
  uint64_t triple_id = 0;
  Party party = Party::alice;
  int64_t a_share = 0;
  int64_t b_share = 0;
  int64_t c_share = 0;
  int64_t t = 0;
};

struct Triple {
  int64_t a = 0;
  int64_t b = 0;
  int64_t c = 0;
};

// Centered component-wise sum of all shares of one triple_id. Rejects
// mixed ids, mixed moduli, and duplicate parties.
Triple reconstruct(std::span<const TripleShare> shares);

// Inputs of one SSP run. Validated on construction: equal lengths,
// l >= 1, every coordinate a centered representative mod t.
struct SspInputs {
  std::vector<int64_t> inp_a;
  std::vector<int64_t> inp_b;

  SspInputs(std::vector<int64_t> a, std::vector<int64_t> b, int64_t t);

  size_t length() const { return inp_a.size(); }
};

struct SspResult {
  int64_t s_a = 0;
  int64_t s_b = 0;
};

// Trusted-dealer version of the scalar product: s_A uniform,
// s_B = [sum_i x_i y_i - s_A]_t.
SspResult ideal_ssp(const SspInputs& in, int64_t t, Prng& rng);

// Trusted-dealer triple generator: a, b uniform, c = [ab]_t, each dealt
// additively among `parties` players.
struct IdealTriple {
  int64_t a = 0;
  int64_t b = 0;
  int64_t c = 0;
  // One {a_share, b_share, c_share} row per party.
  std::vector<std::array<int64_t, 3>> shares;
};

IdealTriple ideal_btg(int64_t t, size_t parties, Prng& rng);

// Largest inner-product length a single run supports at these parameters.
// Uses a ten-sigma tail estimate of the aggregated noise rather than the
// absolute worst case, which at the stock parameters would cap l in the
// low tens; longer products are chunked by run_ssp.
size_t max_inner_len(const ahe::AheParams& params);

enum class Phase : uint8_t { round1, round2, round3, done };

const char* phase_name(Phase p);

class AliceSession {
 public:
  // Caller-chosen input vector (the SSP use); x_a must be centered mod t.
  AliceSession(const ahe::AheParams& params, ahe::KeyPair keys,
               std::vector<int64_t> x_a);

  // Random scalar input (the triple-generation use).
  static AliceSession with_random_input(const ahe::AheParams& params,
                                        ahe::KeyPair keys, Prng& rng);

  std::vector<ahe::Ciphertext> round1(Prng& rng);
  int64_t round3(const ahe::Ciphertext& c_b);

  Phase phase() const { return phase_; }
  const ahe::AheParams& params() const { return params_; }
  const std::vector<int64_t>& x_a() const { return x_a_; }
  const ahe::PublicKey& pk() const { return keys_.pk; }
  const ahe::SecretKey& sk() const { return keys_.sk; }
  int64_t s_a() const;

 private:
  ahe::AheParams params_;
  ahe::KeyPair keys_;
  std::vector<int64_t> x_a_;
  Phase phase_ = Phase::round1;
  int64_t s_a_ = 0;
};

struct Round2Result {
  ahe::Ciphertext c_b;
  int64_t s_b;
};

class BobSession {
 public:
  BobSession(const ahe::AheParams& params, ahe::PublicKey pk,
             std::vector<int64_t> x_b);

  static BobSession with_random_input(const ahe::AheParams& params,
                                      ahe::PublicKey pk, Prng& rng);

  Round2Result round2(const std::vector<ahe::Ciphertext>& c_a, Prng& rng);

  // Test seam: same as round2 but with a pinned mask instead of a drawn
  // one. r_b must be centered mod t.
  Round2Result round2_with_mask(const std::vector<ahe::Ciphertext>& c_a,
                                int64_t r_b, Prng& rng);

  Phase phase() const { return phase_; }
  const ahe::AheParams& params() const { return params_; }
  const std::vector<int64_t>& x_b() const { return x_b_; }
  int64_t s_b() const;

 private:
  ahe::AheParams params_;
  ahe::PublicKey pk_;
  std::vector<int64_t> x_b_;
  Phase phase_ = Phase::round2;
  int64_t s_b_ = 0;
};

// Assembles the two TripleShares from a completed l = 1 run. Rejects
// sessions that have not reached `done` or that ran with l != 1.
std::pair<TripleShare, TripleShare> make_triple(const AliceSession& alice,
                                                const BobSession& bob,
                                                uint64_t triple_id);

// Full SSP run in-process, chunking inputs longer than max_inner_len.
// One keypair is generated per call; each chunk is an independent run.
SspResult run_ssp(const ahe::AheParams& params, const SspInputs& in,
                  Prng& rng);

// Round-1 message codec: u32 count, then each ciphertext length-prefixed.
std::vector<uint8_t> encode_round1(const std::vector<ahe::Ciphertext>& cts);
std::vector<ahe::Ciphertext> decode_round1(std::span<const uint8_t> data);

// One triple generated over the bus, messages framed as `ciphertext`
// payloads. A dropped message surfaces as TransportError at the receiver
// and no triple is produced.
std::pair<TripleShare, TripleShare> make_triple_over_bus(
    const ahe::AheParams& params, transport::Bus& bus,
    const std::string& alice_id, const std::string& bob_id,
    uint64_t triple_id, Prng& alice_rng, Prng& bob_rng);

// Binary record layout shared by the BTR1 file format and the batch
// stream digest: u64 triple_id, u8 party, i64 a, i64 b, i64 c, u64 t.
std::vector<uint8_t> encode_triple_record(const TripleShare& share);
TripleShare decode_triple_record(serialize::ByteReader& reader);

// Share files. JSONL, one record per line:
//   {"triple_id":N,"party":"alice","a_share":..,"b_share":..,
//    "c_share":..,"t":..}
// Binary bulk variant: magic "BTR1", u32 version, u64 record count,
// then the records in encode_triple_record layout.
void write_share_jsonl(std::ostream& out, std::span<const TripleShare> shares);
std::vector<TripleShare> read_share_jsonl(std::istream& in);
void write_btr1(std::ostream& out, std::span<const TripleShare> shares);
std::vector<TripleShare> read_btr1(std::istream& in);

// Batch generator. One keypair per generator, one derived randomness
// stream per triple index, so the output stream is a pure function of
// (params, master_seed) regardless of batch sizes.
class TripleGenerator {
 public:
  TripleGenerator(const ahe::AheParams& params, uint64_t master_seed);

  std::pair<TripleShare, TripleShare> next();

  struct Batch {
    std::vector<std::pair<TripleShare, TripleShare>> triples;
    std::string stream_digest_hex;  // SHA-256 over the binary records
    double seconds = 0.0;
  };

  // count >= 1. Digest covers this batch's records in generation order,
  // Alice's record before Bob's for each triple.
  Batch batch(uint64_t count);

  uint64_t generated() const { return next_id_; }
  const ahe::KeyPair& keys() const { return keys_; }

 private:
  std::pair<TripleShare, TripleShare> generate(uint64_t id);

  ahe::AheParams params_;
  Prng master_;
  ahe::KeyPair keys_;
  uint64_t next_id_ = 0;
};

}  // namespace beaver::triplegen

#endif  // BEAVER_TRIPLEGEN_HPP_
