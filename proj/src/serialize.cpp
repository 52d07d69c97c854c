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

#include "beaver/serialize.hpp"

#include "beaver/errors.hpp"

namespace beaver::serialize {

void ByteWriter::u8(uint8_t v) { buf_.push_back(v); }

void ByteWriter::u32(uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
}

void ByteWriter::u64(uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
}

void ByteWriter::i64(int64_t v) { u64(static_cast<uint64_t>(v)); }

void ByteWriter::bytes(std::span<const uint8_t> data) {
  buf_.insert(buf_.end(), data.begin(), data.end());
}

void ByteWriter::magic(const char tag[5]) {
  for (int i = 0; i < 4; ++i) {
    buf_.push_back(static_cast<uint8_t>(tag[i]));
  }
}

void ByteReader::need(size_t count) const {
  if (pos_ + count > data_.size()) {
    throw IoError("truncated input: need " + std::to_string(count) +
                  " bytes, have " + std::to_string(data_.size() - pos_));
  }
}

uint8_t ByteReader::u8() {
  need(1);
  return data_[pos_++];
}

uint32_t ByteReader::u32() {
  need(4);
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<uint32_t>(data_[pos_++]) << (8 * i);
  }
  return v;
}

uint64_t ByteReader::u64() {
  need(8);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<uint64_t>(data_[pos_++]) << (8 * i);
  }
  return v;
}

int64_t ByteReader::i64() { return static_cast<int64_t>(u64()); }

std::vector<uint8_t> ByteReader::bytes(size_t count) {
  need(count);
  std::vector<uint8_t> out(data_.begin() + pos_, data_.begin() + pos_ + count);
  pos_ += count;
  return out;
}

void ByteReader::expect_magic(const char tag[5]) {
  need(4);
  for (int i = 0; i < 4; ++i) {
    if (data_[pos_ + i] != static_cast<uint8_t>(tag[i])) {
      throw IoError(std::string("bad magic, expected \"") + tag + "\"");
    }
  }
  pos_ += 4;
}

void ByteReader::expect_done() const {
  if (!done()) {
    throw IoError("trailing bytes after payload: " +
                  std::to_string(remaining()));
  }
}

std::string to_hex(std::span<const uint8_t> data) {
  static const char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (uint8_t b : data) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

std::vector<uint8_t> from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) {
    throw IoError("hex string has odd length");
  }
  auto nibble = [](char c) -> uint8_t {
    if (c >= '0' && c <= '9') return static_cast<uint8_t>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<uint8_t>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<uint8_t>(c - 'A' + 10);
    throw IoError("invalid hex character");
  };
  std::vector<uint8_t> out;
  out.reserve(hex.size() / 2);
  for (size_t i = 0; i < hex.size(); i += 2) {
    out.push_back(static_cast<uint8_t>((nibble(hex[i]) << 4) | nibble(hex[i + 1])));
  }
  return out;
}

}  // namespace beaver::serialize
