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

#ifndef PBFL_FHE_SERIALIZE_H_
#define PBFL_FHE_SERIALIZE_H_

#include <cstdint>
#include <span>

#include "pbfl/common/bytes.h"
#include "pbfl/fhe/encrypted_gradient.h"

namespace pbfl::fhe {

// Framed binary format. Every object starts with
//   "PBFL" | version u16 | n u32 | bitlen(element modulus) u16 | kind u8 |
//   basis size u8 | basis prime indices u8...
// followed by kind-specific fields and little-endian coefficient arrays in
// composed (CRT-reconstructed) form: 8 bytes per coefficient when the element
// modulus is below 2^64, 16 bytes otherwise.
inline constexpr std::uint16_t kWireVersion = 1;

enum class ObjectKind : std::uint8_t {
  kRingElement = 1,
  kCiphertext = 2,
  kPublicKey = 3,
  kEvalKey = 4,
  kSecretKeyShare = 5,
  kPartialDecryption = 6,
  kEncryptedGradient = 7,
  kSecretKey = 8,
};

Bytes Serialize(const FheContext& ctx, const RingElement& a);
Bytes Serialize(const FheContext& ctx, const Ciphertext& ct);
Bytes Serialize(const FheContext& ctx, const PublicKey& pk);
Bytes Serialize(const FheContext& ctx, const EvalKey& evk);
Bytes Serialize(const FheContext& ctx, const SecretKey& sk);
Bytes Serialize(const FheContext& ctx, const SecretKeyShare& share);
Bytes Serialize(const FheContext& ctx, const PartialDecryption& pd);
Bytes Serialize(const FheContext& ctx, const EncryptedGradient& g);

RingElement DeserializeRingElement(const FheContext& ctx, std::span<const std::uint8_t> in);
Ciphertext DeserializeCiphertext(const FheContext& ctx, std::span<const std::uint8_t> in);
PublicKey DeserializePublicKey(const FheContext& ctx, std::span<const std::uint8_t> in);
EvalKey DeserializeEvalKey(const FheContext& ctx, std::span<const std::uint8_t> in);
SecretKey DeserializeSecretKey(const FheContext& ctx, std::span<const std::uint8_t> in);
SecretKeyShare DeserializeSecretKeyShare(const FheContext& ctx, std::span<const std::uint8_t> in);
PartialDecryption DeserializePartialDecryption(const FheContext& ctx,
                                               std::span<const std::uint8_t> in);
EncryptedGradient DeserializeEncryptedGradient(const FheContext& ctx,
                                               std::span<const std::uint8_t> in);

// Appends/reads a framed object inside a larger message.
void WriteCiphertext(const FheContext& ctx, ByteWriter& w, const Ciphertext& ct);
Ciphertext ReadCiphertext(const FheContext& ctx, ByteReader& r);
void WritePartialDecryption(const FheContext& ctx, ByteWriter& w, const PartialDecryption& pd);
PartialDecryption ReadPartialDecryption(const FheContext& ctx, ByteReader& r);

}  // namespace pbfl::fhe

#endif  // PBFL_FHE_SERIALIZE_H_
