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

#ifndef BEAVER_SPDZ_HPP_
#define BEAVER_SPDZ_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "beaver/dispense.hpp"
#include "beaver/prng.hpp"
#include "beaver/transport.hpp"
#include "beaver/triplegen.hpp"

namespace beaver::spdz {

// Online phase over additive shares mod t. m parties hold one share each
// per named value; linear operations are local, openings and input
// distribution travel over the bus. Multiplication consumes one Beaver
// triple per invocation:
//
//   rho = open([x] - [a]),  eps = open([y] - [b])
//   [xy] = [c] + eps*[a] + rho*[b] + rho*eps
//
// with the public rho*eps term added by party 0 only.

using ValueId = std::string;

struct OpenedValue {
  ValueId value_id;
  int64_t value = 0;
  std::vector<std::string> contributors;
};

// The simulator drives all m parties in-process. Party state stays
// strictly per-party (one share dictionary each); every share that moves
// between parties moves as a bus message, so the transcript is complete.
class Session {
 public:
  // Registers `party_ids` on the bus (ids already registered are reused).
  Session(transport::Bus& bus, std::vector<std::string> party_ids, int64_t t,
          Prng rng);

  // Convenience: parties named p0..p{m-1}.
  Session(transport::Bus& bus, size_t parties, int64_t t, Prng rng);

  size_t parties() const { return party_ids_.size(); }
  int64_t t() const { return t_; }
  const std::string& party_id(size_t i) const { return party_ids_.at(i); }

  // Owner splits `value` uniformly and distributes one share per party
  // over the bus; the owner's own share completes the sum.
  void share_input(size_t owner, const ValueId& id, int64_t value);

  // Local linear algebra. Every party must hold shares of the operands.
  void add_shares(const ValueId& out, const ValueId& x, const ValueId& y);
  void scalar_mul_shares(const ValueId& out, int64_t k, const ValueId& x);
  // Public constant offset: party 0 adds c, everyone else copies.
  void add_const(const ValueId& out, const ValueId& x, int64_t c);
  // Sharing of a public constant: the all-zeros sharing plus add_const.
  void constant(const ValueId& id, int64_t c);

  // Every party sends its share to every other party; all end up with the
  // same centered value. One simulated round.
  OpenedValue open(const ValueId& id);

  // Offline material. Each row of `shares` is one party's
  // {a_share, b_share, c_share}.
  void load_triple(uint64_t triple_id,
                   const std::vector<std::array<int64_t, 3>>& shares,
                   int64_t t);
  // Two-party session fed directly from a generator run.
  void load_triple_pair(const triplegen::TripleShare& alice,
                        const triplegen::TripleShare& bob);
  // Party j takes vault j's ready entry; needs vaults.size() == parties().
  void load_from_vaults(const std::vector<dispense::ServerVault>& vaults,
                        uint64_t triple_id);

  // Smallest loaded, unconsumed triple id. Throws ProtocolError
  // ("offline phase depleted") when none remain.
  uint64_t take_fresh_triple();

  // [out] = [x]*[y] via the given triple; two opens, then local algebra.
  // The triple is consumed even if a later step fails.
  void beaver_mul(const ValueId& out, const ValueId& x, const ValueId& y,
                  uint64_t triple_id);

  size_t fresh_triples() const;
  size_t rounds() const { return rounds_; }
  transport::Bus& bus() { return bus_; }

  // Test seams.
  int64_t share_of(size_t party, const ValueId& id) const;
  void drop_share_for_testing(size_t party, const ValueId& id);

 private:
  struct TripleEntry {
    std::vector<std::array<int64_t, 3>> shares;  // one row per party
    bool consumed = false;
  };

  void require_all_hold(const ValueId& id) const;
  int64_t open_shares(const ValueId& wire_id,
                      const std::vector<int64_t>& shares);
  std::string fresh_internal_id(const std::string& stem);

  transport::Bus& bus_;
  std::vector<std::string> party_ids_;
  int64_t t_;
  Prng rng_;
  // dicts_[i] is party i's share dictionary.
  std::vector<std::map<ValueId, int64_t>> dicts_;
  std::map<uint64_t, TripleEntry> triples_;
  size_t rounds_ = 0;
  uint64_t internal_counter_ = 0;
};

// Share-message codec (payload kinds `share` and `opening`):
// u32 |id|, id, i64 value.
std::vector<uint8_t> encode_share_message(const ValueId& id, int64_t value);
std::pair<ValueId, int64_t> decode_share_message(
    std::span<const uint8_t> data);

struct DotDemoResult {
  int64_t value = 0;
  size_t triples_consumed = 0;
  size_t rounds = 0;
};

// Secure evaluation of (bias, weights) . (1, x): party 0 holds the
// weights and bias, party 1 holds x. Consumes len(x) + 1 triples; the
// bias term multiplies [bias] by a shared constant one built with
// add_const. Result is opened to everyone.
DotDemoResult dot_product_demo(Session& session,
                               std::span<const int64_t> weights, int64_t bias,
                               std::span<const int64_t> x);

}  // namespace beaver::spdz

#endif  // BEAVER_SPDZ_HPP_
