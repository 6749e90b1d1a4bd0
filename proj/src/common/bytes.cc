/*
 * Copyright 2026 The PBFL Lab Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "pbfl/common/bytes.h"

#include <bit>
#include <cstring>

#include "pbfl/common/error.h"

namespace pbfl {

void ByteWriter::PutU16(std::uint16_t v) {
  for (int i = 0; i < 2; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::PutU32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::PutU64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::PutU128(unsigned __int128 v) {
  PutU64(static_cast<std::uint64_t>(v));
  PutU64(static_cast<std::uint64_t>(v >> 64));
}

void ByteWriter::PutF64(double v) { PutU64(std::bit_cast<std::uint64_t>(v)); }

void ByteWriter::PutString(std::string_view s) {
  PutU32(static_cast<std::uint32_t>(s.size()));
  out_.insert(out_.end(), s.begin(), s.end());
}

void ByteWriter::PutBytes(std::span<const std::uint8_t> b) {
  out_.insert(out_.end(), b.begin(), b.end());
}

void ByteWriter::PutBlob(std::span<const std::uint8_t> b) {
  PutU32(static_cast<std::uint32_t>(b.size()));
  PutBytes(b);
}

void ByteReader::Need(std::size_t n) const {
  if (in_.size() - pos_ < n) {
    throw ProtocolError("truncated buffer: need " + std::to_string(n) +
                        " bytes, have " + std::to_string(in_.size() - pos_));
  }
}

std::uint8_t ByteReader::GetU8() {
  Need(1);
  return in_[pos_++];
}

std::uint16_t ByteReader::GetU16() {
  Need(2);
  std::uint16_t v = 0;
  for (int i = 0; i < 2; ++i) v |= static_cast<std::uint16_t>(in_[pos_ + i]) << (8 * i);
  pos_ += 2;
  return v;
}

std::uint32_t ByteReader::GetU32() {
  Need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in_[pos_ + i]) << (8 * i);
  pos_ += 4;
  return v;
}

std::uint64_t ByteReader::GetU64() {
  Need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
  pos_ += 8;
  return v;
}

unsigned __int128 ByteReader::GetU128() {
  unsigned __int128 lo = GetU64();
  unsigned __int128 hi = GetU64();
  return lo | (hi << 64);
}

double ByteReader::GetF64() { return std::bit_cast<double>(GetU64()); }

std::string ByteReader::GetString() {
  std::uint32_t n = GetU32();
  auto b = GetBytes(n);
  return std::string(b.begin(), b.end());
}

std::span<const std::uint8_t> ByteReader::GetBytes(std::size_t n) {
  Need(n);
  auto out = in_.subspan(pos_, n);
  pos_ += n;
  return out;
}

std::span<const std::uint8_t> ByteReader::GetBlob() { return GetBytes(GetU32()); }

std::uint64_t Fnv1a64(std::span<const std::uint8_t> data, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (std::uint8_t b : data) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t Fnv1a64(std::string_view s) {
  return Fnv1a64(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

}  // namespace pbfl
