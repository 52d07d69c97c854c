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

#ifndef BEAVER_TRANSPORT_HPP_
#define BEAVER_TRANSPORT_HPP_

#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace beaver::transport {

// In-process message bus standing in for pairwise secure channels. Channels
// are confidential and authentic by construction (nothing leaves the
// process); delivery order is deterministic given the bus seed, so protocol
// runs replay bit-identically.

enum class PayloadKind : uint8_t {
  ciphertext = 1,
  share = 2,
  opening = 3,
  receipt = 4,
};

const char* kind_name(PayloadKind kind);

// Length-prefixed frame: u32 body length (LE), u8 kind, body.
std::vector<uint8_t> frame(PayloadKind kind, std::span<const uint8_t> body);

struct Frame {
  PayloadKind kind;
  std::vector<uint8_t> body;
};

// Rejects truncated frames, unknown kinds, and trailing bytes.
Frame unframe(std::span<const uint8_t> bytes);

std::array<uint8_t, 32> sha256(std::span<const uint8_t> data);
std::string sha256_hex(std::span<const uint8_t> data);

struct Envelope {
  std::string from;
  std::string to;
  uint64_t seq;  // strictly increasing per (from, to) pair
  PayloadKind kind;
  std::vector<uint8_t> payload;
};

// Ordered log of everything put on the wire. The digest is a running
// SHA-256 over the canonical byte encoding of each envelope
// (u32 |from|, from, u32 |to|, to, u64 seq, u8 kind, u32 |payload|,
// payload), so it is available even when envelope retention is off.
class Transcript {
 public:
  explicit Transcript(uint64_t seed, bool retain_envelopes = true);
  ~Transcript();
  Transcript(const Transcript&) = delete;
  Transcript& operator=(const Transcript&) = delete;

  void append(const Envelope& env);

  uint64_t seed() const { return seed_; }
  size_t message_count() const { return count_; }
  uint64_t byte_count() const { return bytes_; }

  // Retained envelopes; empty when retention is off.
  const std::vector<Envelope>& envelopes() const { return envelopes_; }

  std::string digest_hex() const;

  // One JSON object per line, payloads hex-encoded, preceded by a metadata
  // record with the seed. Requires envelope retention.
  void export_jsonl(std::ostream& out) const;

 private:
  uint64_t seed_;
  bool retain_;
  size_t count_ = 0;
  uint64_t bytes_ = 0;
  std::vector<Envelope> envelopes_;
  struct HashState;
  std::unique_ptr<HashState> hash_;
};

class Bus {
 public:
  explicit Bus(uint64_t seed, bool retain_transcript = true);

  void register_endpoint(const std::string& id);
  bool has_endpoint(const std::string& id) const;
  const std::vector<std::string>& endpoints() const { return endpoints_; }

  // Enqueues a framed message and records it in the transcript. Returns the
  // sequence number assigned on the (from, to) pair.
  uint64_t send(const std::string& from, const std::string& to,
                PayloadKind kind, std::vector<uint8_t> payload);

  // Next message on the (from, to) pair. Throws TransportError with
  // timeout=true when nothing is pending: in this deterministic simulation
  // an empty queue means the message will never arrive.
  Envelope recv(const std::string& from, const std::string& to);

  // Next message addressed to `to` from any sender, scanning senders
  // round-robin from a seeded starting point.
  Envelope recv_any(const std::string& to);

  // Fault injection: swallow the next send on the (from, to) pair. The
  // receiver sees a timeout.
  void drop_next(const std::string& from, const std::string& to);

  const Transcript& transcript() const { return transcript_; }
  uint64_t bytes_sent(const std::string& endpoint) const;
  uint64_t bytes_received(const std::string& endpoint) const;

 private:
  void require_registered(const std::string& id) const;

  uint64_t seed_;
  Transcript transcript_;
  std::vector<std::string> endpoints_;  // registration order
  std::set<std::string> endpoint_set_;
  std::map<std::pair<std::string, std::string>, std::deque<Envelope>> queues_;
  std::map<std::pair<std::string, std::string>, uint64_t> next_seq_;
  std::set<std::pair<std::string, std::string>> drop_next_;
  std::map<std::string, uint64_t> sent_bytes_;
  std::map<std::string, uint64_t> received_bytes_;
  std::map<std::string, size_t> rr_cursor_;
};

}  // namespace beaver::transport

#endif  // BEAVER_TRANSPORT_HPP_
