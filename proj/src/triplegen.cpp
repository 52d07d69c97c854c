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

#include "beaver/triplegen.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <iterator>
#include <ostream>
#include <set>

#include <nlohmann/json.hpp>

#include "beaver/errors.hpp"

namespace beaver::triplegen {

namespace {

int64_t mod_t(__int128 v, int64_t t) {
  return ring::center_mod_wide(v, t);
}

void require_centered(int64_t v, int64_t t, const char* what) {
  if (v > t / 2 || v < -((t - 1) / 2)) {
    throw ParamError(std::string(what) + " " + std::to_string(v) +
                     " is not a centered representative mod " +
                     std::to_string(t));
  }
}

void require_phase(Phase have, Phase want, const char* who) {
  if (have != want) {
    throw ProtocolError(std::string(who) + " is in phase " +
                        phase_name(have) + ", expected " + phase_name(want));
  }
}

}  // namespace

const char* party_name(Party p) {
  return p == Party::alice ? "alice" : "bob";
}

Party party_from_name(const std::string& name) {
  if (name == "alice") return Party::alice;
  if (name == "bob") return Party::bob;
  throw ParamError("unknown party name: " + name);
}

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::round1: return "round1";
    case Phase::round2: return "round2";
    case Phase::round3: return "round3";
    case Phase::done: return "done";
  }
  return "unknown";
}

Triple reconstruct(std::span<const TripleShare> shares) {
  if (shares.empty()) {
    throw ProtocolError("reconstruct needs at least one share");
  }
  const uint64_t id = shares.front().triple_id;
  const int64_t t = shares.front().t;
  std::set<Party> seen;
  __int128 a = 0, b = 0, c = 0;
  for (const auto& sh : shares) {
    if (sh.triple_id != id) {
      throw ProtocolError("mixed triple ids in reconstruction: " +
                          std::to_string(id) + " vs " +
                          std::to_string(sh.triple_id));
    }
    if (sh.t != t) {
      throw ProtocolError("mixed plaintext moduli in reconstruction");
    }
    if (!seen.insert(sh.party).second) {
      throw ProtocolError(std::string("duplicate share from ") +
                          party_name(sh.party));
    }
    a += sh.a_share;
    b += sh.b_share;
    c += sh.c_share;
  }
  return Triple{mod_t(a, t), mod_t(b, t), mod_t(c, t)};
}

SspInputs::SspInputs(std::vector<int64_t> a, std::vector<int64_t> b, int64_t t)
    : inp_a(std::move(a)), inp_b(std::move(b)) {
  if (inp_a.size() != inp_b.size()) {
    throw ParamError("input vectors differ in length: " +
                     std::to_string(inp_a.size()) + " vs " +
                     std::to_string(inp_b.size()));
  }
  if (inp_a.empty()) {
    throw ParamError("input vectors must have length >= 1");
  }
  for (int64_t v : inp_a) require_centered(v, t, "inp_a element");
  for (int64_t v : inp_b) require_centered(v, t, "inp_b element");
}

SspResult ideal_ssp(const SspInputs& in, int64_t t, Prng& rng) {
  __int128 dot = 0;
  for (size_t i = 0; i < in.length(); ++i) {
    dot += static_cast<__int128>(in.inp_a[i]) * in.inp_b[i];
  }
  int64_t s_a = rng.uniform_centered(t);
  int64_t s_b = mod_t(dot - s_a, t);
  return SspResult{s_a, s_b};
}

IdealTriple ideal_btg(int64_t t, size_t parties, Prng& rng) {
  if (parties < 2) {
    throw ParamError("ideal_btg needs at least two parties");
  }
  IdealTriple out;
  out.a = rng.uniform_centered(t);
  out.b = rng.uniform_centered(t);
  out.c = mod_t(static_cast<__int128>(out.a) * out.b, t);
  const int64_t vals[3] = {out.a, out.b, out.c};
  out.shares.assign(parties, {0, 0, 0});
  for (int comp = 0; comp < 3; ++comp) {
    __int128 sum = 0;
    for (size_t p = 0; p + 1 < parties; ++p) {
      int64_t sh = rng.uniform_centered(t);
      out.shares[p][comp] = sh;
      sum += sh;
    }
    out.shares[parties - 1][comp] = mod_t(vals[comp] - sum, t);
  }
  return out;
}

size_t max_inner_len(const ahe::AheParams& params) {
  // Fresh ciphertext noise w = t(eu + e0 + e1 s) has per-coefficient
  // standard deviation about t * sqrt(2 n sigma^4 + sigma^2). Scaling by
  // x_B and summing l terms (plus the mask encryption) gives
  // sqrt(l + 1) * (t/2) * that; we require the ten-sigma envelope plus
  // the worst-case plaintext magnitude to stay under q/2.
  const double n = static_cast<double>(params.ring.n);
  const double q = static_cast<double>(params.ring.q);
  const double t = static_cast<double>(params.t);
  const double sigma = params.ring.sigma;
  const double s_w =
      t * std::sqrt(2.0 * n * sigma * sigma * sigma * sigma + sigma * sigma);
  const double half_t = std::floor((t - 1) / 2);
  size_t lo = 1, hi = 1;
  auto fits = [&](double l) {
    double noise = 10.0 * std::sqrt(l + 1.0) * half_t * s_w;
    double plain = l * half_t * half_t + half_t + t / 2;
    return noise + plain < q / 2;
  };
  if (!fits(1)) return 1;  // always allow the scalar case
  while (fits(static_cast<double>(hi) * 2) && hi < (size_t{1} << 40)) {
    hi *= 2;
  }
  lo = hi;
  hi *= 2;
  while (lo + 1 < hi) {
    size_t mid = lo + (hi - lo) / 2;
    if (fits(static_cast<double>(mid))) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

AliceSession::AliceSession(const ahe::AheParams& params, ahe::KeyPair keys,
                           std::vector<int64_t> x_a)
    : params_(params), keys_(std::move(keys)), x_a_(std::move(x_a)) {
  if (x_a_.empty()) {
    throw ParamError("alice input must have length >= 1");
  }
  if (x_a_.size() > max_inner_len(params)) {
    throw ParamError("inner product length " + std::to_string(x_a_.size()) +
                     " exceeds the supported maximum " +
                     std::to_string(max_inner_len(params)) +
                     " at these parameters");
  }
  for (int64_t v : x_a_) require_centered(v, params_.t, "x_A element");
  if (!keys_.pk.params().compatible(params_) ||
      !keys_.sk.params().compatible(params_)) {
    throw ParamError("key pair was generated under different parameters");
  }
}

AliceSession AliceSession::with_random_input(const ahe::AheParams& params,
                                             ahe::KeyPair keys, Prng& rng) {
  return AliceSession(params, std::move(keys),
                      {rng.uniform_centered(params.t)});
}

std::vector<ahe::Ciphertext> AliceSession::round1(Prng& rng) {
  require_phase(phase_, Phase::round1, "alice");
  std::vector<ahe::Ciphertext> out;
  out.reserve(x_a_.size());
  for (int64_t v : x_a_) {
    out.push_back(ahe::encrypt(keys_.pk, ahe::Plaintext{v}, rng));
  }
  phase_ = Phase::round3;
  return out;
}

int64_t AliceSession::round3(const ahe::Ciphertext& c_b) {
  require_phase(phase_, Phase::round3, "alice");
  if (!c_b.params().compatible(params_)) {
    throw ProtocolError("c_B was formed under different parameters");
  }
  s_a_ = ahe::decrypt(keys_.sk, c_b).value;
  phase_ = Phase::done;
  return s_a_;
}

int64_t AliceSession::s_a() const {
  if (phase_ != Phase::done) {
    throw ProtocolError("alice has no output before the run completes");
  }
  return s_a_;
}

BobSession::BobSession(const ahe::AheParams& params, ahe::PublicKey pk,
                       std::vector<int64_t> x_b)
    : params_(params), pk_(std::move(pk)), x_b_(std::move(x_b)) {
  if (x_b_.empty()) {
    throw ParamError("bob input must have length >= 1");
  }
  if (x_b_.size() > max_inner_len(params)) {
    throw ParamError("inner product length " + std::to_string(x_b_.size()) +
                     " exceeds the supported maximum " +
                     std::to_string(max_inner_len(params)) +
                     " at these parameters");
  }
  for (int64_t v : x_b_) require_centered(v, params_.t, "x_B element");
  if (!pk_.params().compatible(params_)) {
    throw ParamError("public key was generated under different parameters");
  }
}

BobSession BobSession::with_random_input(const ahe::AheParams& params,
                                         ahe::PublicKey pk, Prng& rng) {
  return BobSession(params, std::move(pk), {rng.uniform_centered(params.t)});
}

Round2Result BobSession::round2(const std::vector<ahe::Ciphertext>& c_a,
                                Prng& rng) {
  return round2_with_mask(c_a, rng.uniform_centered(params_.t), rng);
}

Round2Result BobSession::round2_with_mask(
    const std::vector<ahe::Ciphertext>& c_a, int64_t r_b, Prng& rng) {
  require_phase(phase_, Phase::round2, "bob");
  require_centered(r_b, params_.t, "r_B");
  if (c_a.size() != x_b_.size()) {
    throw ProtocolError("c_A has length " + std::to_string(c_a.size()) +
                        ", expected " + std::to_string(x_b_.size()));
  }
  for (const auto& ct : c_a) {
    if (!ct.params().compatible(params_)) {
      throw ProtocolError("c_A element was formed under different parameters");
    }
  }
  ahe::Ciphertext acc = ahe::encrypt(pk_, ahe::Plaintext{r_b}, rng);
  for (size_t i = 0; i < x_b_.size(); ++i) {
    acc = ahe::add_ct(acc, ahe::scalar_mul_plain(x_b_[i], c_a[i]));
  }
  s_b_ = -r_b;
  phase_ = Phase::done;
  return Round2Result{std::move(acc), s_b_};
}

int64_t BobSession::s_b() const {
  if (phase_ != Phase::done) {
    throw ProtocolError("bob has no output before the run completes");
  }
  return s_b_;
}

std::pair<TripleShare, TripleShare> make_triple(const AliceSession& alice,
                                                const BobSession& bob,
                                                uint64_t triple_id) {
  if (alice.phase() != Phase::done || bob.phase() != Phase::done) {
    throw ProtocolError("cannot assemble a triple from an incomplete run");
  }
  if (alice.x_a().size() != 1 || bob.x_b().size() != 1) {
    throw ProtocolError("triples come from scalar (l = 1) runs only");
  }
  if (alice.params().t != bob.params().t) {
    throw ProtocolError("sessions ran under different plaintext moduli");
  }
  const int64_t t = alice.params().t;
  TripleShare a{triple_id, Party::alice, alice.x_a()[0], 0, alice.s_a(), t};
  TripleShare b{triple_id, Party::bob, 0, bob.x_b()[0], bob.s_b(), t};
  return {a, b};
}

SspResult run_ssp(const ahe::AheParams& params, const SspInputs& in,
                  Prng& rng) {
  const size_t chunk = max_inner_len(params);
  ahe::KeyPair keys = ahe::keygen(params, rng);
  __int128 s_a_total = 0, s_b_total = 0;
  for (size_t off = 0; off < in.length(); off += chunk) {
    size_t len = std::min(chunk, in.length() - off);
    std::vector<int64_t> xa(in.inp_a.begin() + off,
                            in.inp_a.begin() + off + len);
    std::vector<int64_t> xb(in.inp_b.begin() + off,
                            in.inp_b.begin() + off + len);
    AliceSession alice(params, keys, std::move(xa));
    BobSession bob(params, keys.pk, std::move(xb));
    auto c_a = alice.round1(rng);
    auto r2 = bob.round2(c_a, rng);
    s_a_total += alice.round3(r2.c_b);
    s_b_total += r2.s_b;
  }
  return SspResult{mod_t(s_a_total, params.t), mod_t(s_b_total, params.t)};
}

std::vector<uint8_t> encode_round1(const std::vector<ahe::Ciphertext>& cts) {
  serialize::ByteWriter w;
  w.u32(static_cast<uint32_t>(cts.size()));
  for (const auto& ct : cts) {
    auto bytes = ahe::to_bytes(ct);
    w.u32(static_cast<uint32_t>(bytes.size()));
    w.bytes(bytes);
  }
  return w.take();
}

std::vector<ahe::Ciphertext> decode_round1(std::span<const uint8_t> data) {
  serialize::ByteReader r(data);
  uint32_t count = r.u32();
  if (count == 0) {
    throw IoError("round-1 message contains no ciphertexts");
  }
  std::vector<ahe::Ciphertext> out;
  out.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    uint32_t len = r.u32();
    out.push_back(ahe::ciphertext_from_bytes(r.bytes(len)));
  }
  r.expect_done();
  return out;
}

std::pair<TripleShare, TripleShare> make_triple_over_bus(
    const ahe::AheParams& params, transport::Bus& bus,
    const std::string& alice_id, const std::string& bob_id,
    uint64_t triple_id, Prng& alice_rng, Prng& bob_rng) {
  ahe::KeyPair keys = ahe::keygen(params, alice_rng);
  AliceSession alice =
      AliceSession::with_random_input(params, keys, alice_rng);
  BobSession bob =
      BobSession::with_random_input(params, keys.pk, bob_rng);

  bus.send(alice_id, bob_id, transport::PayloadKind::ciphertext,
           encode_round1(alice.round1(alice_rng)));

  auto env1 = bus.recv(alice_id, bob_id);
  auto r2 = bob.round2(decode_round1(env1.payload), bob_rng);
  bus.send(bob_id, alice_id, transport::PayloadKind::ciphertext,
           ahe::to_bytes(r2.c_b));

  auto env2 = bus.recv(bob_id, alice_id);
  alice.round3(ahe::ciphertext_from_bytes(env2.payload));

  return make_triple(alice, bob, triple_id);
}

std::vector<uint8_t> encode_triple_record(const TripleShare& share) {
  serialize::ByteWriter w;
  w.u64(share.triple_id);
  w.u8(static_cast<uint8_t>(share.party));
  w.i64(share.a_share);
  w.i64(share.b_share);
  w.i64(share.c_share);
  w.u64(static_cast<uint64_t>(share.t));
  return w.take();
}

TripleShare decode_triple_record(serialize::ByteReader& reader) {
  TripleShare share;
  share.triple_id = reader.u64();
  uint8_t p = reader.u8();
  if (p > 1) {
    throw IoError("bad party tag in triple record: " + std::to_string(p));
  }
  share.party = static_cast<Party>(p);
  share.a_share = reader.i64();
  share.b_share = reader.i64();
  share.c_share = reader.i64();
  share.t = static_cast<int64_t>(reader.u64());
  return share;
}

void write_share_jsonl(std::ostream& out,
                       std::span<const TripleShare> shares) {
  for (const auto& sh : shares) {
    nlohmann::json rec{{"triple_id", sh.triple_id},
                       {"party", party_name(sh.party)},
                       {"a_share", sh.a_share},
                       {"b_share", sh.b_share},
                       {"c_share", sh.c_share},
                       {"t", sh.t}};
    out << rec.dump() << "\n";
  }
}

std::vector<TripleShare> read_share_jsonl(std::istream& in) {
  std::vector<TripleShare> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
      TripleShare sh;
      sh.triple_id = rec.at("triple_id").get<uint64_t>();
      sh.party = party_from_name(rec.at("party").get<std::string>());
      sh.a_share = rec.at("a_share").get<int64_t>();
      sh.b_share = rec.at("b_share").get<int64_t>();
      sh.c_share = rec.at("c_share").get<int64_t>();
      sh.t = rec.at("t").get<int64_t>();
      out.push_back(sh);
    } catch (const nlohmann::json::exception& e) {
      throw IoError(std::string("bad share record: ") + e.what());
    } catch (const ParamError& e) {
      throw IoError(std::string("bad share record: ") + e.what());
    }
  }
  return out;
}

void write_btr1(std::ostream& out, std::span<const TripleShare> shares) {
  serialize::ByteWriter w;
  w.magic("BTR1");
  w.u32(1);
  w.u64(shares.size());
  for (const auto& sh : shares) {
    auto rec = encode_triple_record(sh);
    w.bytes(rec);
  }
  auto bytes = w.take();
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw IoError("short write while saving triples");
  }
}

std::vector<TripleShare> read_btr1(std::istream& in) {
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  serialize::ByteReader r(bytes);
  r.expect_magic("BTR1");
  uint32_t version = r.u32();
  if (version != 1) {
    throw IoError("unsupported triple file version " +
                  std::to_string(version));
  }
  uint64_t count = r.u64();
  std::vector<TripleShare> out;
  out.reserve(count);
  for (uint64_t i = 0; i < count; ++i) {
    out.push_back(decode_triple_record(r));
  }
  r.expect_done();
  return out;
}

namespace {

ahe::KeyPair derive_keys(const ahe::AheParams& params, const Prng& master) {
  Prng key_rng = master.derive("keygen");
  return ahe::keygen(params, key_rng);
}

}  // namespace

TripleGenerator::TripleGenerator(const ahe::AheParams& params,
                                 uint64_t master_seed)
    : params_(params),
      master_(Prng(master_seed).derive("triplegen")),
      keys_(derive_keys(params_, master_)) {}

std::pair<TripleShare, TripleShare> TripleGenerator::generate(uint64_t id) {
  Prng run = master_.derive(id);
  Prng alice_rng = run.derive("alice");
  Prng bob_rng = run.derive("bob");
  AliceSession alice =
      AliceSession::with_random_input(params_, keys_, alice_rng);
  BobSession bob =
      BobSession::with_random_input(params_, keys_.pk, bob_rng);
  auto c_a = alice.round1(alice_rng);
  auto r2 = bob.round2(c_a, bob_rng);
  alice.round3(r2.c_b);
  return make_triple(alice, bob, id);
}

std::pair<TripleShare, TripleShare> TripleGenerator::next() {
  return generate(next_id_++);
}

TripleGenerator::Batch TripleGenerator::batch(uint64_t count) {
  if (count < 1) {
    throw ParamError("batch count must be >= 1");
  }
  Batch out;
  out.triples.reserve(count);
  auto start = std::chrono::steady_clock::now();
  std::vector<uint8_t> stream;
  for (uint64_t i = 0; i < count; ++i) {
    auto pair = next();
    auto rec_a = encode_triple_record(pair.first);
    auto rec_b = encode_triple_record(pair.second);
    stream.insert(stream.end(), rec_a.begin(), rec_a.end());
    stream.insert(stream.end(), rec_b.begin(), rec_b.end());
    out.triples.push_back(std::move(pair));
  }
  auto end = std::chrono::steady_clock::now();
  out.seconds = std::chrono::duration<double>(end - start).count();
  out.stream_digest_hex = transport::sha256_hex(stream);
  return out;
}

}  // namespace beaver::triplegen
