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

#include "beaver/spdz.hpp"

#include "beaver/errors.hpp"
#include "beaver/ring.hpp"
#include "beaver/serialize.hpp"

namespace beaver::spdz {

namespace {

int64_t mod_t(__int128 v, int64_t t) {
  return ring::center_mod_wide(v, t);
}

std::vector<std::string> default_ids(size_t parties) {
  std::vector<std::string> ids;
  ids.reserve(parties);
  for (size_t i = 0; i < parties; ++i) {
    ids.push_back("p" + std::to_string(i));
  }
  return ids;
}

}  // namespace

std::vector<uint8_t> encode_share_message(const ValueId& id, int64_t value) {
  serialize::ByteWriter w;
  w.u32(static_cast<uint32_t>(id.size()));
  w.bytes(std::span(reinterpret_cast<const uint8_t*>(id.data()), id.size()));
  w.i64(value);
  return w.take();
}

std::pair<ValueId, int64_t> decode_share_message(
    std::span<const uint8_t> data) {
  serialize::ByteReader r(data);
  uint32_t len = r.u32();
  auto raw = r.bytes(len);
  ValueId id(raw.begin(), raw.end());
  int64_t value = r.i64();
  r.expect_done();
  return {id, value};
}

Session::Session(transport::Bus& bus, std::vector<std::string> party_ids,
                 int64_t t, Prng rng)
    : bus_(bus), party_ids_(std::move(party_ids)), t_(t), rng_(rng) {
  if (party_ids_.size() < 2) {
    throw ParamError("online phase needs at least 2 parties");
  }
  if (t_ < 2) {
    throw ParamError("plaintext modulus must be >= 2");
  }
  std::set<std::string> unique(party_ids_.begin(), party_ids_.end());
  if (unique.size() != party_ids_.size()) {
    throw ParamError("duplicate party id");
  }
  for (const auto& id : party_ids_) {
    if (!bus_.has_endpoint(id)) {
      bus_.register_endpoint(id);
    }
  }
  dicts_.resize(party_ids_.size());
}

Session::Session(transport::Bus& bus, size_t parties, int64_t t, Prng rng)
    : Session(bus, default_ids(parties), t, rng) {}

void Session::share_input(size_t owner, const ValueId& id, int64_t value) {
  if (owner >= party_ids_.size()) {
    throw ParamError("no such party index " + std::to_string(owner));
  }
  if (value > t_ / 2 || value < -((t_ - 1) / 2)) {
    throw ParamError("input " + std::to_string(value) +
                     " is not a centered representative mod " +
                     std::to_string(t_));
  }
  if (dicts_[owner].count(id)) {
    throw ProtocolError("value id " + id + " is already shared");
  }
  const size_t m = party_ids_.size();
  __int128 others = 0;
  std::vector<int64_t> shares(m);
  for (size_t j = 0; j < m; ++j) {
    if (j == owner) continue;
    shares[j] = rng_.uniform_centered(t_);
    others += shares[j];
  }
  shares[owner] = mod_t(value - others, t_);
  for (size_t j = 0; j < m; ++j) {
    if (j == owner) {
      dicts_[owner][id] = shares[owner];
      continue;
    }
    bus_.send(party_ids_[owner], party_ids_[j],
              transport::PayloadKind::share, encode_share_message(id, shares[j]));
  }
  for (size_t j = 0; j < m; ++j) {
    if (j == owner) continue;
    auto env = bus_.recv(party_ids_[owner], party_ids_[j]);
    auto [mid, mval] = decode_share_message(env.payload);
    if (mid != id) {
      throw ProtocolError("share message for " + mid + " while expecting " +
                          id);
    }
    dicts_[j][id] = mval;
  }
  ++rounds_;
}

void Session::require_all_hold(const ValueId& id) const {
  for (size_t i = 0; i < dicts_.size(); ++i) {
    if (!dicts_[i].count(id)) {
      throw ProtocolError("party " + party_ids_[i] + " holds no share of " +
                          id + "; protocol abort");
    }
  }
}

void Session::add_shares(const ValueId& out, const ValueId& x,
                         const ValueId& y) {
  require_all_hold(x);
  require_all_hold(y);
  for (auto& dict : dicts_) {
    dict[out] = mod_t(static_cast<__int128>(dict.at(x)) + dict.at(y), t_);
  }
}

void Session::scalar_mul_shares(const ValueId& out, int64_t k,
                                const ValueId& x) {
  require_all_hold(x);
  const int64_t kc = mod_t(k, t_);
  for (auto& dict : dicts_) {
    dict[out] = mod_t(static_cast<__int128>(kc) * dict.at(x), t_);
  }
}

void Session::add_const(const ValueId& out, const ValueId& x, int64_t c) {
  require_all_hold(x);
  for (size_t i = 0; i < dicts_.size(); ++i) {
    __int128 v = dicts_[i].at(x);
    if (i == 0) v += c;
    dicts_[i][out] = mod_t(v, t_);
  }
}

void Session::constant(const ValueId& id, int64_t c) {
  for (auto& dict : dicts_) {
    dict[id] = 0;
  }
  add_const(id, id, c);
}

int64_t Session::open_shares(const ValueId& wire_id,
                             const std::vector<int64_t>& shares) {
  const size_t m = party_ids_.size();
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      bus_.send(party_ids_[i], party_ids_[j], transport::PayloadKind::opening,
                encode_share_message(wire_id, shares[i]));
    }
  }
  std::vector<int64_t> opened(m);
  for (size_t j = 0; j < m; ++j) {
    __int128 sum = shares[j];
    for (size_t i = 0; i < m; ++i) {
      if (i == j) continue;
      auto env = bus_.recv(party_ids_[i], party_ids_[j]);
      auto [mid, mval] = decode_share_message(env.payload);
      if (mid != wire_id) {
        throw ProtocolError("opening for " + mid + " while expecting " +
                            wire_id);
      }
      sum += mval;
    }
    opened[j] = mod_t(sum, t_);
  }
  for (size_t j = 1; j < m; ++j) {
    if (opened[j] != opened[0]) {
      throw ProtocolError("parties disagree on the opened value of " +
                          wire_id);
    }
  }
  ++rounds_;
  return opened[0];
}

OpenedValue Session::open(const ValueId& id) {
  require_all_hold(id);
  std::vector<int64_t> shares(party_ids_.size());
  for (size_t i = 0; i < party_ids_.size(); ++i) {
    shares[i] = dicts_[i].at(id);
  }
  OpenedValue out;
  out.value_id = id;
  out.value = open_shares(id, shares);
  out.contributors = party_ids_;
  return out;
}

void Session::load_triple(uint64_t triple_id,
                          const std::vector<std::array<int64_t, 3>>& shares,
                          int64_t t) {
  if (t != t_) {
    throw ProtocolError("triple modulus " + std::to_string(t) +
                        " does not match session modulus " +
                        std::to_string(t_));
  }
  if (shares.size() != party_ids_.size()) {
    throw ParamError("triple has " + std::to_string(shares.size()) +
                     " share rows for " + std::to_string(party_ids_.size()) +
                     " parties");
  }
  if (triples_.count(triple_id)) {
    throw ProtocolError("triple " + std::to_string(triple_id) +
                        " already loaded");
  }
  triples_[triple_id] = TripleEntry{shares, false};
}

void Session::load_triple_pair(const triplegen::TripleShare& alice,
                               const triplegen::TripleShare& bob) {
  if (party_ids_.size() != 2) {
    throw ParamError("a generator pair loads into a 2-party session only");
  }
  if (alice.triple_id != bob.triple_id) {
    throw ProtocolError("share pair has mixed triple ids");
  }
  if (alice.t != bob.t) {
    throw ProtocolError("share pair has mixed moduli");
  }
  load_triple(alice.triple_id,
              {{alice.a_share, alice.b_share, alice.c_share},
               {bob.a_share, bob.b_share, bob.c_share}},
              alice.t);
}

void Session::load_from_vaults(const std::vector<dispense::ServerVault>& vaults,
                               uint64_t triple_id) {
  if (vaults.size() != party_ids_.size()) {
    throw ParamError("have " + std::to_string(vaults.size()) +
                     " vaults for " + std::to_string(party_ids_.size()) +
                     " parties");
  }
  std::vector<std::array<int64_t, 3>> shares;
  shares.reserve(vaults.size());
  int64_t t = vaults.front().t();
  for (const auto& vault : vaults) {
    auto entry = vault.entry(triple_id);
    shares.push_back({entry.a, entry.b, entry.c});
  }
  load_triple(triple_id, shares, t);
}

uint64_t Session::take_fresh_triple() {
  for (const auto& [id, entry] : triples_) {
    if (!entry.consumed) return id;
  }
  throw ProtocolError("offline phase depleted: no fresh triples remain");
}

size_t Session::fresh_triples() const {
  size_t n = 0;
  for (const auto& [id, entry] : triples_) {
    if (!entry.consumed) ++n;
  }
  return n;
}

std::string Session::fresh_internal_id(const std::string& stem) {
  return stem + "#" + std::to_string(internal_counter_++);
}

void Session::beaver_mul(const ValueId& out, const ValueId& x,
                         const ValueId& y, uint64_t triple_id) {
  require_all_hold(x);
  require_all_hold(y);
  auto it = triples_.find(triple_id);
  if (it == triples_.end()) {
    throw ProtocolError("no loaded triple with id " +
                        std::to_string(triple_id));
  }
  if (it->second.consumed) {
    throw ProtocolError("triple " + std::to_string(triple_id) +
                        " was already consumed");
  }
  it->second.consumed = true;

  const size_t m = party_ids_.size();
  const auto& trip = it->second.shares;
  std::vector<int64_t> rho_shares(m), eps_shares(m);
  for (size_t i = 0; i < m; ++i) {
    rho_shares[i] = mod_t(
        static_cast<__int128>(dicts_[i].at(x)) - trip[i][0], t_);
    eps_shares[i] = mod_t(
        static_cast<__int128>(dicts_[i].at(y)) - trip[i][1], t_);
  }
  const int64_t rho = open_shares(fresh_internal_id(out + ".rho"), rho_shares);
  const int64_t eps = open_shares(fresh_internal_id(out + ".eps"), eps_shares);

  for (size_t i = 0; i < m; ++i) {
    __int128 v = trip[i][2];
    v += static_cast<__int128>(eps) * trip[i][0];
    v += static_cast<__int128>(rho) * trip[i][1];
    if (i == 0) {
      v += static_cast<__int128>(rho) * eps;
    }
    dicts_[i][out] = mod_t(v, t_);
  }
}

int64_t Session::share_of(size_t party, const ValueId& id) const {
  if (party >= dicts_.size()) {
    throw ParamError("no such party index " + std::to_string(party));
  }
  auto it = dicts_[party].find(id);
  if (it == dicts_[party].end()) {
    throw ProtocolError("party " + party_ids_[party] +
                        " holds no share of " + id);
  }
  return it->second;
}

void Session::drop_share_for_testing(size_t party, const ValueId& id) {
  if (party >= dicts_.size()) {
    throw ParamError("no such party index " + std::to_string(party));
  }
  dicts_[party].erase(id);
}

DotDemoResult dot_product_demo(Session& session,
                               std::span<const int64_t> weights, int64_t bias,
                               std::span<const int64_t> x) {
  if (weights.size() != x.size()) {
    throw ParamError("weights and input differ in length: " +
                     std::to_string(weights.size()) + " vs " +
                     std::to_string(x.size()));
  }
  if (weights.empty()) {
    throw ParamError("dot product needs at least one component");
  }
  const std::string prefix =
      "dot#" + std::to_string(session.rounds()) + ".";
  const size_t rounds_before = session.rounds();

  session.share_input(0, prefix + "bias", bias);
  session.constant(prefix + "one", 1);
  for (size_t i = 0; i < weights.size(); ++i) {
    session.share_input(0, prefix + "w" + std::to_string(i), weights[i]);
    session.share_input(1, prefix + "x" + std::to_string(i), x[i]);
  }

  size_t consumed = 0;
  session.beaver_mul(prefix + "acc", prefix + "bias", prefix + "one",
                     session.take_fresh_triple());
  ++consumed;
  for (size_t i = 0; i < weights.size(); ++i) {
    const std::string term = prefix + "term" + std::to_string(i);
    session.beaver_mul(term, prefix + "w" + std::to_string(i),
                       prefix + "x" + std::to_string(i),
                       session.take_fresh_triple());
    ++consumed;
    session.add_shares(prefix + "acc", prefix + "acc", term);
  }

  DotDemoResult result;
  result.value = session.open(prefix + "acc").value;
  result.triples_consumed = consumed;
  result.rounds = session.rounds() - rounds_before;
  return result;
}

}  // namespace beaver::spdz
