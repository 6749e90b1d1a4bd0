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

#include "pbfl/fhe/serialize.h"

#include <string>

#include "pbfl/common/error.h"

namespace pbfl::fhe {

namespace {

constexpr char kMagic[4] = {'P', 'B', 'F', 'L'};

void WriteHeader(const FheContext& ctx, ByteWriter& w, ObjectKind kind, const Basis& basis) {
  for (char c : kMagic) w.PutU8(static_cast<std::uint8_t>(c));
  w.PutU16(kWireVersion);
  w.PutU32(static_cast<std::uint32_t>(ctx.params().n));
  w.PutU16(static_cast<std::uint16_t>(BitLength(ctx.ring().BasisModulus(basis))));
  w.PutU8(static_cast<std::uint8_t>(kind));
  w.PutU8(static_cast<std::uint8_t>(basis.size()));
  for (int i : basis) w.PutU8(static_cast<std::uint8_t>(i));
}

Basis ReadHeader(const FheContext& ctx, ByteReader& r, ObjectKind expected) {
  for (char c : kMagic) {
    if (r.GetU8() != static_cast<std::uint8_t>(c)) throw ProtocolError("bad magic");
  }
  const std::uint16_t version = r.GetU16();
  if (version != kWireVersion) throw ProtocolError("unsupported version " + std::to_string(version));
  const std::uint32_t n = r.GetU32();
  if (n != ctx.params().n) throw ProtocolError("ring dimension mismatch");
  const std::uint16_t bits = r.GetU16();
  const auto kind = static_cast<ObjectKind>(r.GetU8());
  if (kind != expected) throw ProtocolError("unexpected object kind");
  const std::size_t count = r.GetU8();
  if (count == 0 || count > 3) throw ProtocolError("bad basis size");
  Basis basis;
  for (std::size_t i = 0; i < count; ++i) {
    const int idx = r.GetU8();
    if (idx > kPrimeSpecial) throw ProtocolError("bad prime index");
    basis.push_back(idx);
  }
  if (bits != BitLength(ctx.ring().BasisModulus(basis))) throw ProtocolError("modulus width mismatch");
  return basis;
}

void WriteCoeffs(const FheContext& ctx, ByteWriter& w, const RingElement& a) {
  const bool wide = BitLength(ctx.ring().BasisModulus(a.basis)) > 64;
  for (u128 c : ctx.ring().Compose(a)) {
    if (wide) {
      w.PutU128(c);
    } else {
      w.PutU64(static_cast<std::uint64_t>(c));
    }
  }
}

RingElement ReadCoeffs(const FheContext& ctx, ByteReader& r, const Basis& basis) {
  const bool wide = BitLength(ctx.ring().BasisModulus(basis)) > 64;
  std::vector<u128> coeffs(ctx.params().n);
  for (auto& c : coeffs) c = wide ? r.GetU128() : r.GetU64();
  try {
    return ctx.ring().FromComposed(coeffs, basis);
  } catch (const Error& e) {
    throw ProtocolError(std::string("malformed coefficients: ") + e.what());
  }
}

void WriteHolder(ByteWriter& w, const std::string& holder, std::uint64_t split_id, ShareSide side) {
  w.PutString(holder);
  w.PutU64(split_id);
  w.PutU8(static_cast<std::uint8_t>(side));
}

void ReadHolder(ByteReader& r, std::string& holder, std::uint64_t& split_id, ShareSide& side) {
  holder = r.GetString();
  split_id = r.GetU64();
  const std::uint8_t s = r.GetU8();
  if (s != 1 && s != 2) throw ProtocolError("bad share side");
  side = static_cast<ShareSide>(s);
}

template <typename T, typename Fn>
T ReadWhole(std::span<const std::uint8_t> in, Fn&& fn) {
  ByteReader r(in);
  T out = fn(r);
  if (!r.done()) throw ProtocolError("trailing bytes after object");
  return out;
}

void WritePair(const FheContext& ctx, ByteWriter& w, ObjectKind kind, const RingElement& a,
               const RingElement& b) {
  if (a.basis != b.basis) throw InvalidArgument("pair halves differ in basis");
  WriteHeader(ctx, w, kind, a.basis);
  WriteCoeffs(ctx, w, a);
  WriteCoeffs(ctx, w, b);
}

}  // namespace

void WriteCiphertext(const FheContext& ctx, ByteWriter& w, const Ciphertext& ct) {
  WriteHeader(ctx, w, ObjectKind::kCiphertext, ct.c0.basis);
  w.PutF64(ct.scale);
  w.PutU8(static_cast<std::uint8_t>(ct.depth_used));
  WriteCoeffs(ctx, w, ct.c0);
  WriteCoeffs(ctx, w, ct.c1);
}

Ciphertext ReadCiphertext(const FheContext& ctx, ByteReader& r) {
  const Basis basis = ReadHeader(ctx, r, ObjectKind::kCiphertext);
  Ciphertext ct;
  ct.scale = r.GetF64();
  ct.depth_used = r.GetU8();
  ct.c0 = ReadCoeffs(ctx, r, basis);
  ct.c1 = ReadCoeffs(ctx, r, basis);
  return ct;
}

void WritePartialDecryption(const FheContext& ctx, ByteWriter& w, const PartialDecryption& pd) {
  WriteHeader(ctx, w, ObjectKind::kPartialDecryption, pd.d.basis);
  WriteHolder(w, pd.holder_id, pd.split_id, pd.side);
  WriteCoeffs(ctx, w, pd.d);
}

PartialDecryption ReadPartialDecryption(const FheContext& ctx, ByteReader& r) {
  const Basis basis = ReadHeader(ctx, r, ObjectKind::kPartialDecryption);
  PartialDecryption pd;
  ReadHolder(r, pd.holder_id, pd.split_id, pd.side);
  pd.d = ReadCoeffs(ctx, r, basis);
  return pd;
}

Bytes Serialize(const FheContext& ctx, const RingElement& a) {
  ByteWriter w;
  WriteHeader(ctx, w, ObjectKind::kRingElement, a.basis);
  WriteCoeffs(ctx, w, a);
  return w.Take();
}

Bytes Serialize(const FheContext& ctx, const Ciphertext& ct) {
  ByteWriter w;
  WriteCiphertext(ctx, w, ct);
  return w.Take();
}

Bytes Serialize(const FheContext& ctx, const PublicKey& pk) {
  ByteWriter w;
  WritePair(ctx, w, ObjectKind::kPublicKey, pk.b, pk.a);
  return w.Take();
}

Bytes Serialize(const FheContext& ctx, const EvalKey& evk) {
  ByteWriter w;
  WritePair(ctx, w, ObjectKind::kEvalKey, evk.b, evk.a);
  return w.Take();
}

Bytes Serialize(const FheContext& ctx, const SecretKey& sk) {
  ByteWriter w;
  WriteHeader(ctx, w, ObjectKind::kSecretKey, sk.s.basis);
  WriteCoeffs(ctx, w, sk.s);
  return w.Take();
}

Bytes Serialize(const FheContext& ctx, const SecretKeyShare& share) {
  ByteWriter w;
  WriteHeader(ctx, w, ObjectKind::kSecretKeyShare, share.share.basis);
  WriteHolder(w, share.holder_id, share.split_id, share.side);
  WriteCoeffs(ctx, w, share.share);
  return w.Take();
}

Bytes Serialize(const FheContext& ctx, const PartialDecryption& pd) {
  ByteWriter w;
  WritePartialDecryption(ctx, w, pd);
  return w.Take();
}

Bytes Serialize(const FheContext& ctx, const EncryptedGradient& g) {
  if (g.chunks.empty()) throw InvalidArgument("empty encrypted gradient");
  ByteWriter w;
  WriteHeader(ctx, w, ObjectKind::kEncryptedGradient, g.chunks[0].c0.basis);
  w.PutU64(g.original_len);
  w.PutU32(static_cast<std::uint32_t>(g.tau()));
  for (const auto& c : g.chunks) WriteCiphertext(ctx, w, c);
  return w.Take();
}

RingElement DeserializeRingElement(const FheContext& ctx, std::span<const std::uint8_t> in) {
  return ReadWhole<RingElement>(in, [&](ByteReader& r) {
    const Basis basis = ReadHeader(ctx, r, ObjectKind::kRingElement);
    return ReadCoeffs(ctx, r, basis);
  });
}

Ciphertext DeserializeCiphertext(const FheContext& ctx, std::span<const std::uint8_t> in) {
  return ReadWhole<Ciphertext>(in, [&](ByteReader& r) { return ReadCiphertext(ctx, r); });
}

PublicKey DeserializePublicKey(const FheContext& ctx, std::span<const std::uint8_t> in) {
  return ReadWhole<PublicKey>(in, [&](ByteReader& r) {
    const Basis basis = ReadHeader(ctx, r, ObjectKind::kPublicKey);
    PublicKey pk;
    pk.b = ReadCoeffs(ctx, r, basis);
    pk.a = ReadCoeffs(ctx, r, basis);
    return pk;
  });
}

EvalKey DeserializeEvalKey(const FheContext& ctx, std::span<const std::uint8_t> in) {
  return ReadWhole<EvalKey>(in, [&](ByteReader& r) {
    const Basis basis = ReadHeader(ctx, r, ObjectKind::kEvalKey);
    EvalKey evk;
    evk.b = ReadCoeffs(ctx, r, basis);
    evk.a = ReadCoeffs(ctx, r, basis);
    return evk;
  });
}

SecretKey DeserializeSecretKey(const FheContext& ctx, std::span<const std::uint8_t> in) {
  return ReadWhole<SecretKey>(in, [&](ByteReader& r) {
    const Basis basis = ReadHeader(ctx, r, ObjectKind::kSecretKey);
    return SecretKey{ReadCoeffs(ctx, r, basis)};
  });
}

SecretKeyShare DeserializeSecretKeyShare(const FheContext& ctx, std::span<const std::uint8_t> in) {
  return ReadWhole<SecretKeyShare>(in, [&](ByteReader& r) {
    const Basis basis = ReadHeader(ctx, r, ObjectKind::kSecretKeyShare);
    SecretKeyShare s;
    ReadHolder(r, s.holder_id, s.split_id, s.side);
    s.share = ReadCoeffs(ctx, r, basis);
    return s;
  });
}

PartialDecryption DeserializePartialDecryption(const FheContext& ctx,
                                               std::span<const std::uint8_t> in) {
  return ReadWhole<PartialDecryption>(in, [&](ByteReader& r) { return ReadPartialDecryption(ctx, r); });
}

EncryptedGradient DeserializeEncryptedGradient(const FheContext& ctx,
                                               std::span<const std::uint8_t> in) {
  return ReadWhole<EncryptedGradient>(in, [&](ByteReader& r) {
    ReadHeader(ctx, r, ObjectKind::kEncryptedGradient);
    EncryptedGradient g;
    g.original_len = r.GetU64();
    const std::uint32_t tau = r.GetU32();
    if (tau == 0 || ChunkCount(g.original_len, ctx.slots()) != tau) {
      throw ProtocolError("chunk count inconsistent with length");
    }
    for (std::uint32_t j = 0; j < tau; ++j) g.chunks.push_back(ReadCiphertext(ctx, r));
    return g;
  });
}

}  // namespace pbfl::fhe
