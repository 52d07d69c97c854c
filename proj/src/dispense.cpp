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

#include "beaver/dispense.hpp"

#include <openssl/crypto.h>

#include <nlohmann/json.hpp>

#include "beaver/errors.hpp"
#include "beaver/ring.hpp"
#include "beaver/serialize.hpp"

namespace beaver::dispense {

namespace {

using nlohmann::json;

int64_t mod_t(__int128 v, int64_t t) {
  return ring::center_mod_wide(v, t);
}

}  // namespace

std::vector<int64_t> split_additive(int64_t value, size_t l, int64_t t,
                                    Prng& rng) {
  if (l < 2) {
    throw ParamError("split needs at least 2 servers, got " +
                     std::to_string(l));
  }
  if (ring::center_mod(value, t) != value) {
    throw ParamError("value " + std::to_string(value) +
                     " is not a centered representative mod " +
                     std::to_string(t));
  }
  std::vector<int64_t> out(l);
  __int128 sum = 0;
  for (size_t j = 0; j + 1 < l; ++j) {
    out[j] = rng.uniform_centered(t);
    sum += out[j];
  }
  out[l - 1] = mod_t(value - sum, t);
  return out;
}

int64_t reconstruct_value(std::span<const int64_t> sub_shares, int64_t t) {
  __int128 sum = 0;
  for (int64_t v : sub_shares) sum += v;
  return mod_t(sum, t);
}

std::vector<ShareSplit> split_triple(const triplegen::TripleShare& share,
                                     size_t servers, Prng& rng) {
  auto a = split_additive(share.a_share, servers, share.t, rng);
  auto b = split_additive(share.b_share, servers, share.t, rng);
  auto c = split_additive(share.c_share, servers, share.t, rng);
  std::vector<ShareSplit> out(servers);
  for (size_t j = 0; j < servers; ++j) {
    out[j] = ShareSplit{share.triple_id, share.party,
                        static_cast<uint32_t>(j + 1),
                        a[j], b[j], c[j], share.t};
  }
  secure_wipe(a);
  secure_wipe(b);
  secure_wipe(c);
  return out;
}

std::vector<uint8_t> encode_share_split(const ShareSplit& split) {
  serialize::ByteWriter w;
  w.u64(split.triple_id);
  w.u8(static_cast<uint8_t>(split.origin));
  w.u32(split.server_index);
  w.i64(split.a_j);
  w.i64(split.b_j);
  w.i64(split.c_j);
  w.u64(static_cast<uint64_t>(split.t));
  return w.take();
}

ShareSplit decode_share_split(std::span<const uint8_t> data) {
  serialize::ByteReader r(data);
  ShareSplit split;
  split.triple_id = r.u64();
  uint8_t origin = r.u8();
  if (origin > 1) {
    throw IoError("bad origin tag in sub-share: " + std::to_string(origin));
  }
  split.origin = static_cast<triplegen::Party>(origin);
  split.server_index = r.u32();
  split.a_j = r.i64();
  split.b_j = r.i64();
  split.c_j = r.i64();
  split.t = static_cast<int64_t>(r.u64());
  r.expect_done();
  return split;
}

void secure_wipe(std::span<int64_t> values) {
  if (!values.empty()) {
    OPENSSL_cleanse(values.data(), values.size() * sizeof(int64_t));
  }
}

void secure_wipe(std::vector<ShareSplit>& splits) {
  if (!splits.empty()) {
    OPENSSL_cleanse(splits.data(), splits.size() * sizeof(ShareSplit));
  }
  splits.clear();
}

ServerVault::ServerVault(std::string server_id, int64_t t)
    : server_id_(std::move(server_id)), t_(t) {
  if (t_ < 2) {
    throw ParamError("vault modulus must be >= 2");
  }
}

void ServerVault::deliver(const ShareSplit& split) {
  if (split.t != t_) {
    throw ProtocolError("sub-share modulus " + std::to_string(split.t) +
                        " does not match vault modulus " +
                        std::to_string(t_));
  }
  auto& entry = entries_[split.triple_id];
  entry.triple_id = split.triple_id;
  bool& seen = split.origin == triplegen::Party::alice ? entry.have_alice
                                                       : entry.have_bob;
  if (seen) {
    throw ProtocolError("duplicate delivery of triple " +
                        std::to_string(split.triple_id) + " from " +
                        triplegen::party_name(split.origin) + " to " +
                        server_id_);
  }
  seen = true;
  entry.a = mod_t(static_cast<__int128>(entry.a) + split.a_j, t_);
  entry.b = mod_t(static_cast<__int128>(entry.b) + split.b_j, t_);
  entry.c = mod_t(static_cast<__int128>(entry.c) + split.c_j, t_);
  log_.push_back(split);
}

size_t ServerVault::pump(transport::Bus& bus, const std::string& from) {
  size_t processed = 0;
  while (true) {
    transport::Envelope env;
    try {
      env = bus.recv(from, server_id_);
    } catch (const TransportError&) {
      break;  // inbox drained
    }
    if (env.kind != transport::PayloadKind::share) {
      throw ProtocolError(std::string("vault expected a share payload, got ") +
                          transport::kind_name(env.kind));
    }
    ShareSplit split = decode_share_split(env.payload);
    DeliveryReceipt receipt{server_id_, split.triple_id, split.origin,
                            /*ok=*/true, /*retry=*/false};
    try {
      deliver(split);
    } catch (const ProtocolError&) {
      receipt.ok = false;
    }
    bus.send(server_id_, from, transport::PayloadKind::receipt,
             encode_receipt(receipt));
    ++processed;
  }
  return processed;
}

bool ServerVault::has_entry(uint64_t triple_id) const {
  return entries_.count(triple_id) > 0;
}

bool ServerVault::ready(uint64_t triple_id) const {
  auto it = entries_.find(triple_id);
  return it != entries_.end() && it->second.ready();
}

VaultEntry ServerVault::entry(uint64_t triple_id) const {
  auto it = entries_.find(triple_id);
  if (it == entries_.end()) {
    throw ProtocolError("vault " + server_id_ + " holds no entry for triple " +
                        std::to_string(triple_id));
  }
  if (!it->second.ready()) {
    throw ProtocolError("triple " + std::to_string(triple_id) + " at " +
                        server_id_ + " is incomplete: missing " +
                        (it->second.have_alice ? "bob" : "alice"));
  }
  return it->second;
}

std::vector<uint64_t> ServerVault::ready_ids() const {
  std::vector<uint64_t> out;
  for (const auto& [id, entry] : entries_) {
    if (entry.ready()) out.push_back(id);
  }
  return out;
}

void ServerVault::export_jsonl(std::ostream& out) const {
  for (const auto& split : log_) {
    json rec{{"triple_id", split.triple_id},
             {"from", triplegen::party_name(split.origin)},
             {"a_j", split.a_j},
             {"b_j", split.b_j},
             {"c_j", split.c_j},
             {"t", split.t}};
    out << rec.dump() << "\n";
  }
}

size_t ServerVault::import_jsonl(std::istream& in) {
  size_t imported = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw IoError(std::string("bad vault record: ") + e.what());
    }
    ShareSplit split;
    try {
      split.triple_id = rec.at("triple_id").get<uint64_t>();
      split.origin = triplegen::party_from_name(rec.at("from").get<std::string>());
      split.a_j = rec.at("a_j").get<int64_t>();
      split.b_j = rec.at("b_j").get<int64_t>();
      split.c_j = rec.at("c_j").get<int64_t>();
      split.t = rec.at("t").get<int64_t>();
    } catch (const json::exception& e) {
      throw IoError(std::string("bad vault record: ") + e.what());
    }
    deliver(split);
    ++imported;
  }
  return imported;
}

std::vector<uint8_t> encode_receipt(const DeliveryReceipt& receipt) {
  serialize::ByteWriter w;
  w.u64(receipt.triple_id);
  w.u8(static_cast<uint8_t>(receipt.origin));
  w.u8(receipt.ok ? 1 : 0);
  return w.take();
}

DeliveryReceipt decode_receipt(std::span<const uint8_t> data,
                               const std::string& server_id) {
  serialize::ByteReader r(data);
  DeliveryReceipt receipt;
  receipt.server_id = server_id;
  receipt.triple_id = r.u64();
  uint8_t origin = r.u8();
  if (origin > 1) {
    throw IoError("bad origin tag in receipt: " + std::to_string(origin));
  }
  receipt.origin = static_cast<triplegen::Party>(origin);
  receipt.ok = r.u8() != 0;
  r.expect_done();
  return receipt;
}

std::vector<DeliveryReceipt> dispense_triple(
    const triplegen::TripleShare& share, transport::Bus& bus,
    const std::string& origin_id, std::vector<ServerVault>& vaults,
    Prng& rng) {
  if (vaults.size() < 2) {
    throw ParamError("dispensing needs at least 2 servers, got " +
                     std::to_string(vaults.size()));
  }
  std::vector<ShareSplit> splits = split_triple(share, vaults.size(), rng);
  std::vector<DeliveryReceipt> receipts;
  receipts.reserve(vaults.size());
  for (size_t j = 0; j < vaults.size(); ++j) {
    bus.send(origin_id, vaults[j].server_id(), transport::PayloadKind::share,
             encode_share_split(splits[j]));
  }
  secure_wipe(splits);
  for (auto& vault : vaults) {
    vault.pump(bus, origin_id);
  }
  for (auto& vault : vaults) {
    try {
      auto env = bus.recv(vault.server_id(), origin_id);
      if (env.kind != transport::PayloadKind::receipt) {
        throw ProtocolError(
            std::string("origin expected a receipt payload, got ") +
            transport::kind_name(env.kind));
      }
      receipts.push_back(decode_receipt(env.payload, vault.server_id()));
    } catch (const TransportError& e) {
      if (!e.timeout()) throw;
      receipts.push_back(DeliveryReceipt{vault.server_id(), share.triple_id,
                                         share.party, /*ok=*/false,
                                         /*retry=*/true});
    }
  }
  return receipts;
}

triplegen::Triple reconstruct(const std::vector<ServerVault>& vaults,
                              uint64_t triple_id) {
  if (vaults.empty()) {
    throw ParamError("reconstruction needs at least one vault");
  }
  const int64_t t = vaults.front().t();
  __int128 a = 0, b = 0, c = 0;
  for (const auto& vault : vaults) {
    if (vault.t() != t) {
      throw ProtocolError("vaults disagree on the plaintext modulus");
    }
    VaultEntry entry = vault.entry(triple_id);
    a += entry.a;
    b += entry.b;
    c += entry.c;
  }
  return triplegen::Triple{mod_t(a, t), mod_t(b, t), mod_t(c, t)};
}

}  // namespace beaver::dispense
