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

#include <array>
#include <cstdint>
#include <sstream>
#include <vector>

#include "beaver/ahe.hpp"
#include "beaver/errors.hpp"
#include "beaver/prng.hpp"
#include "beaver/transport.hpp"
#include "beaver/triplegen.hpp"
#include "doctest.h"
#include "golden_values.hpp"
#include "oracles.hpp"

using beaver::IoError;
using beaver::ParamError;
using beaver::Prng;
using beaver::ProtocolError;
using beaver::TransportError;
namespace ahe = beaver::ahe;
namespace transport = beaver::transport;
using namespace beaver::triplegen;

namespace {

const ahe::AheParams kParams = ahe::AheParams::defaults();

ahe::KeyPair test_keys(uint64_t seed) {
  Prng kg(seed);
  return ahe::keygen(kParams, kg);
}

int64_t mod_t(oracles::big v) { return oracles::center_i64(v, kParams.t); }

std::vector<int64_t> random_vec(size_t l, Prng& rng) {
  std::vector<int64_t> v(l);
  for (auto& x : v) {
    x = rng.uniform_centered(kParams.t);
  }
  return v;
}

}  // namespace

TEST_SUITE("triplegen") {

TEST_CASE("party names round-trip") {
  CHECK(std::string(party_name(Party::alice)) == "alice");
  CHECK(std::string(party_name(Party::bob)) == "bob");
  CHECK(party_from_name("alice") == Party::alice);
  CHECK(party_from_name("bob") == Party::bob);
  CHECK_THROWS_AS(party_from_name("carol"), ParamError);
}

TEST_CASE("ssp inputs are validated") {
  CHECK_NOTHROW(SspInputs({1, 2}, {3, 4}, kParams.t));
  CHECK_THROWS_AS(SspInputs({1, 2}, {3}, kParams.t), ParamError);
  CHECK_THROWS_AS(SspInputs({}, {}, kParams.t), ParamError);
  CHECK_THROWS_AS(SspInputs({kParams.t}, {0}, kParams.t), ParamError);
  CHECK_THROWS_AS(SspInputs({0}, {-kParams.t}, kParams.t), ParamError);
}

TEST_CASE("ideal ssp splits the inner product") {
  Prng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const size_t l = 1 + rng.uniform_below(6);
    const auto a = random_vec(l, rng);
    const auto b = random_vec(l, rng);
    const auto r = ideal_ssp(SspInputs(a, b, kParams.t), kParams.t, rng);
    oracles::big want = 0;
    for (size_t j = 0; j < l; ++j) {
      want += oracles::big(a[j]) * b[j];
    }
    CHECK(mod_t(oracles::big(r.s_a) + r.s_b) == mod_t(want));
  }
}

TEST_CASE("ideal btg deals valid triples to any party count") {
  Prng rng(2);
  for (size_t parties : {size_t{2}, size_t{3}, size_t{5}}) {
    for (int i = 0; i < 3000; ++i) {
      const auto tri = ideal_btg(kParams.t, parties, rng);
      CHECK(tri.shares.size() == parties);
      oracles::big a = 0;
      oracles::big b = 0;
      oracles::big c = 0;
      for (const auto& row : tri.shares) {
        a += row[0];
        b += row[1];
        c += row[2];
      }
      CHECK(mod_t(a) == tri.a);
      CHECK(mod_t(b) == tri.b);
      CHECK(mod_t(c) == tri.c);
      CHECK(tri.c == mod_t(oracles::big(tri.a) * tri.b));
    }
  }
  CHECK_THROWS_AS(ideal_btg(kParams.t, 1, rng), ParamError);
}

TEST_CASE("ideal btg marginals are uniform") {
  Prng rng(3);
  std::vector<uint64_t> ca(16, 0);
  std::vector<uint64_t> cb(16, 0);
  const uint64_t total = 100000;
  for (uint64_t i = 0; i < total; ++i) {
    const auto tri = ideal_btg(kParams.t, 2, rng);
    ca[oracles::bucket_of(tri.a, kParams.t, 16)]++;
    cb[oracles::bucket_of(tri.b, kParams.t, 16)]++;
  }
  CHECK(oracles::chi_square_uniform(ca, total) < oracles::kChi2Crit15);
  CHECK(oracles::chi_square_uniform(cb, total) < oracles::kChi2Crit15);
}

TEST_CASE("pinned run: x_A=3, x_B=5, mask 7") {
  const auto keys = test_keys(4);
  AliceSession alice(kParams, keys, {3});
  BobSession bob(kParams, keys.pk, {5});
  Prng ar(5);
  Prng br(6);
  const auto c_a = alice.round1(ar);
  const auto r2 = bob.round2_with_mask(c_a, 7, br);
  CHECK(ahe::decrypt(keys.sk, r2.c_b).value == 22);  // 3*5 + 7
  CHECK(r2.s_b == -7);
  CHECK(alice.round3(r2.c_b) == 22);
  CHECK(alice.s_a() == 22);
  CHECK(bob.s_b() == -7);
  CHECK(mod_t(oracles::big(alice.s_a()) + bob.s_b()) == 15);
  CHECK(alice.phase() == Phase::done);
  CHECK(bob.phase() == Phase::done);
}

TEST_CASE("phase machine rejects replays and skips") {
  const auto keys = test_keys(7);
  AliceSession alice(kParams, keys, {1});
  BobSession bob(kParams, keys.pk, {2});
  Prng rng(8);
  CHECK(alice.phase() == Phase::round1);
  CHECK(bob.phase() == Phase::round2);
  CHECK(std::string(phase_name(Phase::round1)) == "round1");
  CHECK(std::string(phase_name(Phase::done)) == "done");
  CHECK_THROWS_AS(alice.s_a(), ProtocolError);
  CHECK_THROWS_AS(bob.s_b(), ProtocolError);

  const auto c_a = alice.round1(rng);
  CHECK_THROWS_AS(alice.round1(rng), ProtocolError);
  const auto r2 = bob.round2(c_a, rng);
  CHECK_THROWS_AS(bob.round2(c_a, rng), ProtocolError);
  alice.round3(r2.c_b);
  CHECK_THROWS_AS(alice.round3(r2.c_b), ProtocolError);

  AliceSession skip(kParams, keys, {1});
  CHECK_THROWS_AS(skip.round3(r2.c_b), ProtocolError);
}

TEST_CASE("session construction is validated") {
  const auto keys = test_keys(9);
  CHECK_THROWS_AS(AliceSession(kParams, keys, {}), ParamError);
  CHECK_THROWS_AS(AliceSession(kParams, keys, {kParams.t}), ParamError);
  CHECK_THROWS_AS(BobSession(kParams, keys.pk, {}), ParamError);
  CHECK_THROWS_AS(BobSession(kParams, keys.pk, {-kParams.t}), ParamError);
  const ahe::AheParams other(kParams.ring, 7681);
  CHECK_THROWS_AS(AliceSession(other, keys, {1}), ParamError);
  CHECK_THROWS_AS(BobSession(other, keys.pk, {1}), ParamError);
}

TEST_CASE("random runs split the inner product at l in {1, 8, 64}") {
  const auto keys = test_keys(10);
  Prng rng(11);
  const std::array<size_t, 3> lens = {1, 8, 64};
  const std::array<int, 3> reps = {4000, 3000, 3000};
  for (size_t which = 0; which < lens.size(); ++which) {
    const size_t l = lens[which];
    for (int i = 0; i < reps[which]; ++i) {
      AliceSession alice(kParams, keys, random_vec(l, rng));
      BobSession bob(kParams, keys.pk, random_vec(l, rng));
      const auto c_a = alice.round1(rng);
      const auto r2 = bob.round2(c_a, rng);
      alice.round3(r2.c_b);
      oracles::big want = 0;
      for (size_t j = 0; j < l; ++j) {
        want += oracles::big(alice.x_a()[j]) * bob.x_b()[j];
      }
      CHECK(mod_t(oracles::big(alice.s_a()) + bob.s_b()) == mod_t(want));
    }
  }
}

TEST_CASE("extreme inputs at full length keep a positive budget") {
  const auto keys = test_keys(12);
  const int64_t ext = (kParams.t - 1) / 2;
  const std::vector<int64_t> xs(64, ext);
  AliceSession alice(kParams, keys, xs);
  BobSession bob(kParams, keys.pk, xs);
  Prng rng(13);
  const auto c_a = alice.round1(rng);
  const auto r2 = bob.round2_with_mask(c_a, ext, rng);
  oracles::big want = oracles::big(ext) * ext * 64 + ext;
  CHECK(ahe::noise_budget(keys.sk, r2.c_b, mod_t(want)) > 0);
  CHECK(alice.round3(r2.c_b) == mod_t(want));
}

TEST_CASE("squaring the extreme plaintext hits the pinned value") {
  // ((t-1)/2)^2 = 16421^2 = 8211 mod 32843.
  const auto keys = test_keys(14);
  AliceSession alice(kParams, keys, {16421});
  BobSession bob(kParams, keys.pk, {16421});
  Prng rng(15);
  const auto r2 = bob.round2(alice.round1(rng), rng);
  alice.round3(r2.c_b);
  CHECK(mod_t(oracles::big(16421) * 16421) == 8211);
  CHECK(mod_t(oracles::big(alice.s_a()) + bob.s_b()) == 8211);
}

TEST_CASE("masked responses are uniform for fixed inputs") {
  const auto keys = test_keys(16);
  Prng rng(17);
  std::vector<uint64_t> counts(16, 0);
  const uint64_t total = 20000;
  for (uint64_t i = 0; i < total; ++i) {
    AliceSession alice(kParams, keys, {1234});
    BobSession bob(kParams, keys.pk, {-4321});
    const auto r2 = bob.round2(alice.round1(rng), rng);
    alice.round3(r2.c_b);
    counts[oracles::bucket_of(alice.s_a(), kParams.t, 16)]++;
  }
  CHECK(oracles::chi_square_uniform(counts, total) < oracles::kChi2Crit15);
}

TEST_CASE("make_triple assembles the share convention") {
  const auto keys = test_keys(18);
  Prng rng(19);
  AliceSession alice = AliceSession::with_random_input(kParams, keys, rng);
  BobSession bob = BobSession::with_random_input(kParams, keys.pk, rng);
  CHECK_THROWS_AS(make_triple(alice, bob, 0), ProtocolError);
  const auto r2 = bob.round2(alice.round1(rng), rng);
  alice.round3(r2.c_b);
  const auto [sa, sb] = make_triple(alice, bob, 42);
  CHECK(sa.triple_id == 42);
  CHECK(sb.triple_id == 42);
  CHECK(sa.party == Party::alice);
  CHECK(sb.party == Party::bob);
  CHECK(sa.a_share == alice.x_a()[0]);
  CHECK(sa.b_share == 0);
  CHECK(sa.c_share == alice.s_a());
  CHECK(sb.a_share == 0);
  CHECK(sb.b_share == bob.x_b()[0]);
  CHECK(sb.c_share == bob.s_b());
  CHECK(sa.t == kParams.t);
  const std::array<TripleShare, 2> both = {sa, sb};
  const auto tri = reconstruct(both);
  CHECK(tri.a == sa.a_share);
  CHECK(tri.b == sb.b_share);
  CHECK(tri.c == mod_t(oracles::big(tri.a) * tri.b));
}

TEST_CASE("make_triple rejects vector runs") {
  const auto keys = test_keys(20);
  Prng rng(21);
  AliceSession alice(kParams, keys, {1, 2});
  BobSession bob(kParams, keys.pk, {3, 4});
  const auto r2 = bob.round2(alice.round1(rng), rng);
  alice.round3(r2.c_b);
  CHECK_THROWS_AS(make_triple(alice, bob, 0), ProtocolError);
}

TEST_CASE("reconstruct validates its inputs") {
  const TripleShare a{7, Party::alice, 1, 0, 2, 32843};
  const TripleShare b{7, Party::bob, 0, 3, 4, 32843};
  TripleShare wrong_id = b;
  wrong_id.triple_id = 8;
  TripleShare wrong_t = b;
  wrong_t.t = 7681;
  const std::array<TripleShare, 2> dup = {a, a};
  const std::array<TripleShare, 2> mixed_id = {a, wrong_id};
  const std::array<TripleShare, 2> mixed_t = {a, wrong_t};
  CHECK_THROWS_AS(reconstruct(dup), ProtocolError);
  CHECK_THROWS_AS(reconstruct(mixed_id), ProtocolError);
  CHECK_THROWS_AS(reconstruct(mixed_t), ProtocolError);
  CHECK_THROWS_AS(reconstruct({}), ProtocolError);
}

TEST_CASE("triple marginals are uniform") {
  TripleGenerator gen(kParams, 22);
  std::vector<uint64_t> ca(16, 0);
  std::vector<uint64_t> cb(16, 0);
  const uint64_t total = 10000;
  for (uint64_t i = 0; i < total; ++i) {
    const auto [sa, sb] = gen.next();
    const std::array<TripleShare, 2> both = {sa, sb};
    const auto tri = reconstruct(both);
    CHECK(tri.c == mod_t(oracles::big(tri.a) * tri.b));
    ca[oracles::bucket_of(tri.a, kParams.t, 16)]++;
    cb[oracles::bucket_of(tri.b, kParams.t, 16)]++;
  }
  CHECK(oracles::chi_square_uniform(ca, total) < oracles::kChi2Crit15);
  CHECK(oracles::chi_square_uniform(cb, total) < oracles::kChi2Crit15);
}

TEST_CASE("real and ideal generators satisfy the same relation") {
  Prng rng(23);
  TripleGenerator gen(kParams, 24);
  for (int i = 0; i < 2000; ++i) {
    const auto ideal = ideal_btg(kParams.t, 2, rng);
    CHECK(ideal.c == mod_t(oracles::big(ideal.a) * ideal.b));
    const auto [sa, sb] = gen.next();
    const std::array<TripleShare, 2> both = {sa, sb};
    const auto real = reconstruct(both);
    CHECK(real.c == mod_t(oracles::big(real.a) * real.b));
  }
}

TEST_CASE("run_ssp handles arbitrary lengths including chunked ones") {
  Prng rng(25);
  const size_t cap = max_inner_len(kParams);
  CHECK(cap >= 64);
  for (size_t l : {size_t{1}, size_t{40}, cap + 3}) {
    const auto a = random_vec(l, rng);
    const auto b = random_vec(l, rng);
    const auto r = run_ssp(kParams, SspInputs(a, b, kParams.t), rng);
    oracles::big want = 0;
    for (size_t j = 0; j < l; ++j) {
      want += oracles::big(a[j]) * b[j];
    }
    CHECK(mod_t(oracles::big(r.s_a) + r.s_b) == mod_t(want));
  }
}

TEST_CASE("max_inner_len shrinks as noise grows") {
  const ahe::AheParams noisy(
      beaver::ring::RingParams(16, 140737488356903, 12.8, 6), 32843);
  CHECK(max_inner_len(noisy) < max_inner_len(kParams));
  CHECK(max_inner_len(noisy) >= 1);
}

TEST_CASE("round1 codec round-trips and rejects malformed bytes") {
  const auto keys = test_keys(26);
  Prng rng(27);
  AliceSession alice(kParams, keys, {7, -9, 11});
  const auto cts = alice.round1(rng);
  const auto bytes = encode_round1(cts);
  const auto back = decode_round1(bytes);
  REQUIRE(back.size() == cts.size());
  for (size_t i = 0; i < cts.size(); ++i) {
    CHECK(back[i].c0 == cts[i].c0);
    CHECK(back[i].c1 == cts[i].c1);
  }
  auto truncated = bytes;
  truncated.resize(truncated.size() - 1);
  CHECK_THROWS_AS(decode_round1(truncated), IoError);
  auto trailing = bytes;
  trailing.push_back(0);
  CHECK_THROWS_AS(decode_round1(trailing), IoError);
  CHECK_THROWS_AS(decode_round1(std::vector<uint8_t>{1, 2}), IoError);
}

TEST_CASE("golden round1 message for the pinned seed") {
  Prng kg(2026);
  const auto keys = ahe::keygen(kParams, kg);
  Prng ar(11);
  AliceSession alice = AliceSession::with_random_input(kParams, keys, ar);
  const auto bytes = encode_round1(alice.round1(ar));
  CHECK(bytes.size() == golden::kRound1Bytes);
  CHECK(transport::sha256_hex(bytes) == golden::kRound1Sha256);
}

TEST_CASE("triples over the bus match the share convention") {
  transport::Bus bus(28);
  bus.register_endpoint("alice");
  bus.register_endpoint("bob");
  Prng ar(29);
  Prng br(30);
  const auto [sa, sb] =
      make_triple_over_bus(kParams, bus, "alice", "bob", 5, ar, br);
  const std::array<TripleShare, 2> both = {sa, sb};
  const auto tri = reconstruct(both);
  CHECK(tri.c == mod_t(oracles::big(tri.a) * tri.b));
  CHECK(bus.transcript().message_count() == 2);
  for (const auto& env : bus.transcript().envelopes()) {
    CHECK(env.kind == transport::PayloadKind::ciphertext);
  }
}

TEST_CASE("bus runs replay bit-identically from the same seeds") {
  auto run = [] {
    transport::Bus bus(31);
    bus.register_endpoint("alice");
    bus.register_endpoint("bob");
    Prng ar(32);
    Prng br(33);
    auto pair = make_triple_over_bus(kParams, bus, "alice", "bob", 9, ar, br);
    return std::make_tuple(pair.first, pair.second,
                           bus.transcript().digest_hex());
  };
  const auto [a1, b1, d1] = run();
  const auto [a2, b2, d2] = run();
  CHECK(d1 == d2);
  CHECK(a1.a_share == a2.a_share);
  CHECK(a1.c_share == a2.c_share);
  CHECK(b1.b_share == b2.b_share);
  CHECK(b1.c_share == b2.c_share);
}

TEST_CASE("a dropped message aborts the run with no triple") {
  transport::Bus bus(34);
  bus.register_endpoint("alice");
  bus.register_endpoint("bob");
  bus.drop_next("alice", "bob");
  Prng ar(35);
  Prng br(36);
  CHECK_THROWS_AS(
      make_triple_over_bus(kParams, bus, "alice", "bob", 0, ar, br),
      TransportError);

  transport::Bus bus2(37);
  bus2.register_endpoint("alice");
  bus2.register_endpoint("bob");
  bus2.drop_next("bob", "alice");
  CHECK_THROWS_AS(
      make_triple_over_bus(kParams, bus2, "alice", "bob", 0, ar, br),
      TransportError);
}

TEST_CASE("generator streams are a pure function of the seed") {
  TripleGenerator g1(kParams, 42);
  TripleGenerator g2(kParams, 42);
  TripleGenerator g3(kParams, 43);
  const auto b1 = g1.batch(10);
  const auto b2 = g2.batch(10);
  CHECK(b1.stream_digest_hex == golden::kBatch42Digest);
  CHECK(b1.stream_digest_hex == b2.stream_digest_hex);
  CHECK(g3.batch(10).stream_digest_hex != b1.stream_digest_hex);
  REQUIRE(b1.triples.size() == 10);
  for (size_t i = 0; i < 10; ++i) {
    CHECK(b1.triples[i].first.triple_id == i);
    CHECK(b1.triples[i].first.a_share == b2.triples[i].first.a_share);
    CHECK(b1.triples[i].second.c_share == b2.triples[i].second.c_share);
  }
  CHECK(b1.seconds >= 0.0);
}

TEST_CASE("batching does not change the stream") {
  TripleGenerator split_gen(kParams, 44);
  TripleGenerator whole_gen(kParams, 44);
  auto first = split_gen.batch(3);
  auto second = split_gen.batch(3);
  auto whole = whole_gen.batch(6);
  CHECK(split_gen.generated() == 6);
  CHECK(whole_gen.generated() == 6);
  for (size_t i = 0; i < 6; ++i) {
    const auto& got =
        i < 3 ? first.triples[i] : second.triples[i - 3];
    CHECK(got.first.triple_id == i);
    CHECK(got.first.a_share == whole.triples[i].first.a_share);
    CHECK(got.first.c_share == whole.triples[i].first.c_share);
    CHECK(got.second.b_share == whole.triples[i].second.b_share);
    CHECK(got.second.c_share == whole.triples[i].second.c_share);
  }
  CHECK_THROWS_AS(whole_gen.batch(0), ParamError);
}

TEST_CASE("share files round-trip in both formats") {
  TripleGenerator gen(kParams, 45);
  const auto batch = gen.batch(20);
  std::vector<TripleShare> all;
  for (const auto& [sa, sb] : batch.triples) {
    all.push_back(sa);
    all.push_back(sb);
  }

  std::stringstream jsonl;
  write_share_jsonl(jsonl, all);
  const auto from_json = read_share_jsonl(jsonl);
  REQUIRE(from_json.size() == all.size());

  std::stringstream bin(std::ios::in | std::ios::out | std::ios::binary);
  write_btr1(bin, all);
  const auto from_bin = read_btr1(bin);
  REQUIRE(from_bin.size() == all.size());

  for (size_t i = 0; i < all.size(); ++i) {
    for (const auto* got : {&from_json[i], &from_bin[i]}) {
      CHECK(got->triple_id == all[i].triple_id);
      CHECK(got->party == all[i].party);
      CHECK(got->a_share == all[i].a_share);
      CHECK(got->b_share == all[i].b_share);
      CHECK(got->c_share == all[i].c_share);
      CHECK(got->t == all[i].t);
    }
  }
}

TEST_CASE("share file readers reject malformed input") {
  std::istringstream bad_json("{\"triple_id\":0,\"party\":\"carol\"}\n");
  CHECK_THROWS_AS(read_share_jsonl(bad_json), IoError);
  std::istringstream not_json("not json at all\n");
  CHECK_THROWS_AS(read_share_jsonl(not_json), IoError);

  std::stringstream bin(std::ios::in | std::ios::out | std::ios::binary);
  const TripleShare sh{1, Party::alice, 2, 0, 3, 32843};
  const std::array<TripleShare, 1> one = {sh};
  write_btr1(bin, one);
  auto bytes = bin.str();
  bytes[0] ^= 0x20;
  std::istringstream bad_magic(bytes, std::ios::binary);
  CHECK_THROWS_AS(read_btr1(bad_magic), IoError);
  std::istringstream short_file(bytes.substr(0, bytes.size() - 2),
                                std::ios::binary);
  CHECK_THROWS_AS(read_btr1(short_file), IoError);
}

}  // TEST_SUITE("triplegen")
