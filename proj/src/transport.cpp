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

#include "beaver/transport.hpp"

#include <openssl/evp.h>

#include <algorithm>

#include "beaver/errors.hpp"
#include "beaver/serialize.hpp"

namespace beaver::transport {

namespace {

bool known_kind(uint8_t k) {
  return k >= static_cast<uint8_t>(PayloadKind::ciphertext) &&
         k <= static_cast<uint8_t>(PayloadKind::receipt);
}

std::vector<uint8_t> canonical_bytes(const Envelope& env) {
  serialize::ByteWriter w;
  w.u32(static_cast<uint32_t>(env.from.size()));
  w.bytes(std::span(reinterpret_cast<const uint8_t*>(env.from.data()),
                    env.from.size()));
  w.u32(static_cast<uint32_t>(env.to.size()));
  w.bytes(std::span(reinterpret_cast<const uint8_t*>(env.to.data()),
                    env.to.size()));
  w.u64(env.seq);
  w.u8(static_cast<uint8_t>(env.kind));
  w.u32(static_cast<uint32_t>(env.payload.size()));
  w.bytes(env.payload);
  return w.take();
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out.push_back('\\');
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace

const char* kind_name(PayloadKind kind) {
  switch (kind) {
    case PayloadKind::ciphertext: return "ciphertext";
    case PayloadKind::share: return "share";
    case PayloadKind::opening: return "opening";
    case PayloadKind::receipt: return "receipt";
  }
  return "unknown";
}

std::vector<uint8_t> frame(PayloadKind kind, std::span<const uint8_t> body) {
  serialize::ByteWriter w;
  w.u32(static_cast<uint32_t>(body.size()));
  w.u8(static_cast<uint8_t>(kind));
  w.bytes(body);
  return w.take();
}

Frame unframe(std::span<const uint8_t> bytes) {
  if (bytes.size() < 5) {
    throw IoError("truncated frame: " + std::to_string(bytes.size()) +
                  " bytes, need at least 5");
  }
  serialize::ByteReader r(bytes);
  uint32_t len = r.u32();
  uint8_t kind = r.u8();
  if (!known_kind(kind)) {
    throw IoError("unknown payload kind " + std::to_string(kind));
  }
  if (r.remaining() != len) {
    throw IoError("frame length mismatch: header says " +
                  std::to_string(len) + ", body has " +
                  std::to_string(r.remaining()));
  }
  return Frame{static_cast<PayloadKind>(kind), r.bytes(len)};
}

std::array<uint8_t, 32> sha256(std::span<const uint8_t> data) {
  std::array<uint8_t, 32> out{};
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr);
  return out;
}

std::string sha256_hex(std::span<const uint8_t> data) {
  auto d = sha256(data);
  return serialize::to_hex(d);
}

struct Transcript::HashState {
  EVP_MD_CTX* ctx;
  HashState() : ctx(EVP_MD_CTX_new()) {
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  }
  ~HashState() { EVP_MD_CTX_free(ctx); }
};

Transcript::Transcript(uint64_t seed, bool retain_envelopes)
    : seed_(seed), retain_(retain_envelopes),
      hash_(std::make_unique<HashState>()) {}

Transcript::~Transcript() = default;

void Transcript::append(const Envelope& env) {
  auto bytes = canonical_bytes(env);
  EVP_DigestUpdate(hash_->ctx, bytes.data(), bytes.size());
  bytes_ += bytes.size();
  ++count_;
  if (retain_) {
    envelopes_.push_back(env);
  }
}

std::string Transcript::digest_hex() const {
  // Finalize a copy so the running state can keep accumulating.
  EVP_MD_CTX* copy = EVP_MD_CTX_new();
  EVP_MD_CTX_copy_ex(copy, hash_->ctx);
  std::array<uint8_t, 32> out{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(copy, out.data(), &len);
  EVP_MD_CTX_free(copy);
  return serialize::to_hex(out);
}

void Transcript::export_jsonl(std::ostream& out) const {
  if (!retain_ && count_ > 0) {
    throw IoError("transcript was captured digest-only; envelopes not retained");
  }
  out << "{\"seed\":\"0x" << std::hex << seed_ << std::dec
      << "\",\"messages\":" << count_ << "}\n";
  for (const auto& env : envelopes_) {
    out << "{\"from\":\"" << json_escape(env.from) << "\",\"to\":\""
        << json_escape(env.to) << "\",\"seq\":" << env.seq << ",\"kind\":\""
        << kind_name(env.kind) << "\",\"payload\":\""
        << serialize::to_hex(env.payload) << "\"}\n";
  }
}

Bus::Bus(uint64_t seed, bool retain_transcript)
    : seed_(seed), transcript_(seed, retain_transcript) {}

void Bus::register_endpoint(const std::string& id) {
  if (endpoint_set_.count(id)) {
    throw TransportError("endpoint already registered: " + id);
  }
  endpoints_.push_back(id);
  endpoint_set_.insert(id);
}

bool Bus::has_endpoint(const std::string& id) const {
  return endpoint_set_.count(id) > 0;
}

void Bus::require_registered(const std::string& id) const {
  if (!endpoint_set_.count(id)) {
    throw TransportError("unregistered endpoint: " + id);
  }
}

uint64_t Bus::send(const std::string& from, const std::string& to,
                   PayloadKind kind, std::vector<uint8_t> payload) {
  require_registered(from);
  require_registered(to);
  auto pair = std::make_pair(from, to);
  uint64_t seq = next_seq_[pair]++;

  if (drop_next_.count(pair)) {
    drop_next_.erase(pair);
    return seq;  // swallowed; never enqueued, never transcripted
  }

  Envelope env{from, to, seq, kind, std::move(payload)};
  sent_bytes_[from] += canonical_bytes(env).size();
  transcript_.append(env);
  queues_[pair].push_back(std::move(env));
  return seq;
}

Envelope Bus::recv(const std::string& from, const std::string& to) {
  require_registered(from);
  require_registered(to);
  auto it = queues_.find(std::make_pair(from, to));
  if (it == queues_.end() || it->second.empty()) {
    throw TransportError("timeout waiting for message " + from + " -> " + to,
                         /*timeout=*/true);
  }
  Envelope env = std::move(it->second.front());
  it->second.pop_front();
  received_bytes_[to] += canonical_bytes(env).size();
  return env;
}

Envelope Bus::recv_any(const std::string& to) {
  require_registered(to);
  // Round-robin over senders, starting at a seed-derived offset that
  // advances with every delivery.
  size_t& cursor = rr_cursor_[to];
  const size_t n = endpoints_.size();
  size_t start = (seed_ + cursor) % n;
  for (size_t i = 0; i < n; ++i) {
    const std::string& from = endpoints_[(start + i) % n];
    auto it = queues_.find(std::make_pair(from, to));
    if (it != queues_.end() && !it->second.empty()) {
      ++cursor;
      Envelope env = std::move(it->second.front());
      it->second.pop_front();
      received_bytes_[to] += canonical_bytes(env).size();
      return env;
    }
  }
  throw TransportError("timeout waiting for any message to " + to,
                       /*timeout=*/true);
}

void Bus::drop_next(const std::string& from, const std::string& to) {
  require_registered(from);
  require_registered(to);
  drop_next_.insert(std::make_pair(from, to));
}

uint64_t Bus::bytes_sent(const std::string& endpoint) const {
  auto it = sent_bytes_.find(endpoint);
  return it == sent_bytes_.end() ? 0 : it->second;
}

uint64_t Bus::bytes_received(const std::string& endpoint) const {
  auto it = received_bytes_.find(endpoint);
  return it == received_bytes_.end() ? 0 : it->second;
}

}  // namespace beaver::transport
