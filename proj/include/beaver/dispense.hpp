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

#ifndef BEAVER_DISPENSE_HPP_
#define BEAVER_DISPENSE_HPP_

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "beaver/prng.hpp"
#include "beaver/transport.hpp"
#include "beaver/triplegen.hpp"

namespace beaver::dispense {

// Dispensing: each origin party splits its triple share into l additive
// sub-shares and delivers one to each MPC server over the (confidential)
// bus channels. A server's vault entry becomes ready once sub-shares from
// both origins arrived; the l ready entries form an l-party sharing of
// the original triple.

// Splits `value` into l sub-shares: the first l-1 uniform in centered
// Z_t, the last the centered difference. l must be >= 2.
std::vector<int64_t> split_additive(int64_t value, size_t l, int64_t t,
                                    Prng& rng);

// Test-only inverse of split_additive: centered sum mod t.
int64_t reconstruct_value(std::span<const int64_t> sub_shares, int64_t t);

// One origin party's sub-share destined for one server.
struct ShareSplit {
  uint64_t triple_id = 0;
  triplegen::Party origin = triplegen::Party::alice;
  uint32_t server_index = 0;  // 1-based
  int64_t a_j = 0;
  int64_t b_j = 0;
  int64_t c_j = 0;
  int64_t t = 0;
};

// Splits all three components with independent randomness. `servers` >= 2.
std::vector<ShareSplit> split_triple(const triplegen::TripleShare& share,
                                     size_t servers, Prng& rng);

// Wire codec for ShareSplit (payload kind `share`): u64 triple_id,
// u8 origin, u32 server_index, i64 a_j, i64 b_j, i64 c_j, u64 t.
std::vector<uint8_t> encode_share_split(const ShareSplit& split);
ShareSplit decode_share_split(std::span<const uint8_t> data);

// Overwrites the split material with zeros. Dispensing wipes sub-shares
// after they leave the origin so nothing reusable stays behind.
void secure_wipe(std::span<int64_t> values);
void secure_wipe(std::vector<ShareSplit>& splits);

// Accumulated sub-shares for one triple at one server.
struct VaultEntry {
  uint64_t triple_id = 0;
  int64_t a = 0;
  int64_t b = 0;
  int64_t c = 0;
  bool have_alice = false;
  bool have_bob = false;

  bool ready() const { return have_alice && have_bob; }
};

class ServerVault {
 public:
  ServerVault(std::string server_id, int64_t t);

  const std::string& server_id() const { return server_id_; }
  int64_t t() const { return t_; }

  // Applies one delivered sub-share. A second delivery of the same
  // (triple_id, origin) pair is rejected; entries for distinct origins
  // accumulate.
  void deliver(const ShareSplit& split);

  // Drains pending `share` messages from `from`, delivers each, and
  // acknowledges with a `receipt` message back to the sender. A rejected
  // delivery produces a negative receipt instead of throwing. Returns the
  // number of messages processed.
  size_t pump(transport::Bus& bus, const std::string& from);

  bool has_entry(uint64_t triple_id) const;
  bool ready(uint64_t triple_id) const;

  // Ready entry for the online phase. Throws ProtocolError while the
  // entry is missing or still pending one origin.
  VaultEntry entry(uint64_t triple_id) const;

  std::vector<uint64_t> ready_ids() const;
  size_t size() const { return entries_.size(); }

  // Append-only delivery log, one JSON object per line:
  // {triple_id, from, a_j, b_j, c_j, t}. Import replays the log through
  // deliver().
  void export_jsonl(std::ostream& out) const;
  size_t import_jsonl(std::istream& in);

 private:
  std::string server_id_;
  int64_t t_;
  std::map<uint64_t, VaultEntry> entries_;
  std::vector<ShareSplit> log_;
};

struct DeliveryReceipt {
  std::string server_id;
  uint64_t triple_id = 0;
  triplegen::Party origin = triplegen::Party::alice;
  bool ok = false;
  bool retry = false;  // channel timed out; caller may resend
};

// Receipt payload codec (payload kind `receipt`): u64 triple_id,
// u8 origin, u8 ok.
std::vector<uint8_t> encode_receipt(const DeliveryReceipt& receipt);
DeliveryReceipt decode_receipt(std::span<const uint8_t> data,
                               const std::string& server_id);

// Sends one sub-share to every vault's server endpoint, lets each vault
// pump its inbox, and collects receipts. Split material at the origin is
// wiped before returning. A dropped channel yields ok=false, retry=true
// for that server and leaves its vault entry untouched.
std::vector<DeliveryReceipt> dispense_triple(
    const triplegen::TripleShare& share, transport::Bus& bus,
    const std::string& origin_id, std::vector<ServerVault>& vaults,
    Prng& rng);

// Across-server reconstruction of a dispensed triple. Every vault must
// hold a ready entry for triple_id.
triplegen::Triple reconstruct(const std::vector<ServerVault>& vaults,
                              uint64_t triple_id);

}  // namespace beaver::dispense

#endif  // BEAVER_DISPENSE_HPP_
