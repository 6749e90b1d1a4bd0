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

#ifndef PBFL_COMMON_BYTES_H_
#define PBFL_COMMON_BYTES_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pbfl {

using Bytes = std::vector<std::uint8_t>;

// Little-endian append-only writer.
class ByteWriter {
 public:
  void PutU8(std::uint8_t v) { out_.push_back(v); }
  void PutU16(std::uint16_t v);
  void PutU32(std::uint32_t v);
  void PutU64(std::uint64_t v);
  void PutU128(unsigned __int128 v);
  void PutF64(double v);
  void PutString(std::string_view s);  // u32 length prefix
  void PutBytes(std::span<const std::uint8_t> b);
  void PutBlob(std::span<const std::uint8_t> b);  // u32 length prefix

  const Bytes& bytes() const { return out_; }
  Bytes Take() { return std::move(out_); }

 private:
  Bytes out_;
};

// Little-endian reader over a borrowed buffer. Throws pbfl::Error(kProtocol)
// on truncation.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint8_t GetU8();
  std::uint16_t GetU16();
  std::uint32_t GetU32();
  std::uint64_t GetU64();
  unsigned __int128 GetU128();
  double GetF64();
  std::string GetString();
  std::span<const std::uint8_t> GetBytes(std::size_t n);
  std::span<const std::uint8_t> GetBlob();

  std::size_t remaining() const { return in_.size() - pos_; }
  bool done() const { return pos_ == in_.size(); }

 private:
  void Need(std::size_t n) const;

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

// 64-bit FNV-1a; used for stable digests and label hashing.
std::uint64_t Fnv1a64(std::span<const std::uint8_t> data,
                      std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint64_t Fnv1a64(std::string_view s);

}  // namespace pbfl

#endif  // PBFL_COMMON_BYTES_H_
