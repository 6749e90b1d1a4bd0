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

#include "pbfl/protocols/secure_ops.h"

#include <cmath>

#include "pbfl/common/error.h"
#include "pbfl/fhe/serialize.h"

namespace pbfl::protocols {

namespace {

using fhe::i128;
using fhe::u64;

struct MaskedBatch {
  std::vector<fhe::Ciphertext> cts;
  std::vector<fhe::PartialDecryption> partials;
  u64 mask_constant_sum = 0;  // sum of constant coefficients mod the level prime
};

Bytes EncodeBatch(const fhe::FheContext& ctx, const MaskedBatch& batch) {
  ByteWriter w;
  w.PutU32(static_cast<std::uint32_t>(batch.cts.size()));
  for (std::size_t j = 0; j < batch.cts.size(); ++j) {
    fhe::WriteCiphertext(ctx, w, batch.cts[j]);
    fhe::WritePartialDecryption(ctx, w, batch.partials[j]);
  }
  return w.Take();
}

void DecodeBatch(const fhe::FheContext& ctx, std::span<const std::uint8_t> body,
                 std::vector<fhe::Ciphertext>& cts, std::vector<fhe::PartialDecryption>& partials) {
  ByteReader r(body);
  const std::uint32_t count = r.GetU32();
  if (count == 0 || count > 4096) throw ProtocolError("bad chunk count in request");
  for (std::uint32_t j = 0; j < count; ++j) {
    cts.push_back(fhe::ReadCiphertext(ctx, r));
    partials.push_back(fhe::ReadPartialDecryption(ctx, r));
  }
  if (!r.done()) throw ProtocolError("trailing bytes in request");
}

// Adds a fresh mask to `ct`, remembering its constant coefficient.
fhe::Ciphertext MaskCiphertext(ServerS1& s1, const fhe::Ciphertext& ct, u64& constant_sum) {
  if (ct.level() != 0) throw InternalError("masking expects a rescaled ciphertext");
  const fhe::RingElement mask = s1.FreshMask(ct.c0.basis);
  const u64 p = s1.ctx().ring().prime(ct.c0.basis[0]);
  constant_sum = fhe::AddMod(constant_sum, mask.residues[0][0], p);
  return fhe::AddPlain(s1.ctx(), ct, fhe::Plaintext{mask, ct.scale});
}

// One request/reply exchange: S1 ships the batch, S2 replies with the slot
// sum, S1 strips the masks. Returns the unmasked slot sum.
double Exchange(ServerS1& s1, ServerS2& s2, Transport& t, const char* protocol,
                std::uint8_t request_tag, std::uint8_t reply_tag, MaskedBatch& batch) {
  const fhe::FheContext& ctx = s1.ctx();
  const std::uint64_t inv = t.BeginInvocation(protocol);

  const Bytes request = t.Send(inv, Direction::kS1ToS2, request_tag, EncodeBatch(ctx, batch));

  // S2 side.
  std::vector<fhe::Ciphertext> cts;
  std::vector<fhe::PartialDecryption> partials;
  DecodeBatch(s2.ctx(), Transport::Open(request, request_tag), cts, partials);
  const double masked_sum = s2.CompleteAndSum(protocol, inv, cts, partials);
  ByteWriter reply_body;
  reply_body.PutF64(masked_sum);
  const Bytes reply = t.Send(inv, Direction::kS2ToS1, reply_tag, reply_body.Take());

  // S1 side. The slot sum of any polynomial m equals (n/2) * m_0 / scale, so
  // the reply pins down the sum of centered constant coefficients exactly.
  ByteReader r(Transport::Open(reply, reply_tag));
  const double received = r.GetF64();
  if (!r.done() || !std::isfinite(received)) throw ProtocolError("malformed reply");
  const double scale = batch.cts[0].scale;
  const double half_n = static_cast<double>(ctx.params().n) / 2.0;
  const u64 p = ctx.ring().prime(batch.cts[0].c0.basis[0]);
  const i128 masked_constant = static_cast<i128>(std::llround(received * scale / half_n));
  const u64 unmasked = fhe::SubMod(fhe::ReduceSigned(masked_constant, p), batch.mask_constant_sum, p);
  const i128 centered = unmasked > p / 2 ? static_cast<i128>(unmasked) - p : static_cast<i128>(unmasked);
  return static_cast<double>(centered) * half_n / scale;
}

void CheckPair(const fhe::EncryptedGradient& a, const fhe::EncryptedGradient& b) {
  if (a.tau() != b.tau() || a.tau() == 0) throw InvalidArgument("chunk count mismatch");
}

CosineResult InnerExchange(ServerS1& s1, ServerS2& s2, Transport& t, const fhe::EncryptedGradient& a,
                           const fhe::EncryptedGradient& b) {
  const fhe::FheContext& ctx = s1.ctx();
  MaskedBatch batch;
  fhe::Ciphertext total;
  for (std::size_t j = 0; j < a.tau(); ++j) {
    const fhe::Ciphertext prod = fhe::Mult(ctx, s1.eval_key(), a.chunks[j], b.chunks[j]);
    const fhe::Ciphertext masked = MaskCiphertext(s1, prod, batch.mask_constant_sum);
    if (j == 0) {
      total = masked;
    } else {
      fhe::AddInPlace(ctx, total, masked);
    }
  }
  batch.partials.push_back(fhe::PartDec(ctx, s1.key_share(), total, s1.NextSeed("part-dec")));
  batch.cts.push_back(std::move(total));
  CosineResult out;
  out.value = Exchange(s1, s2, t, kCosProtocol, tag::kCosRequest, tag::kCosReply, batch);
  out.chunk_count = a.tau();
  return out;
}

}  // namespace

JudgeVerdict EsecJudge(ServerS1& s1, ServerS2& s2, Transport& t, const fhe::EncryptedGradient& g,
                       double tolerance) {
  if (g.tau() == 0) throw InvalidArgument("empty encrypted gradient");
  const fhe::FheContext& ctx = s1.ctx();
  MaskedBatch batch;
  for (const auto& chunk : g.chunks) {
    const fhe::Ciphertext sq = fhe::Mult(ctx, s1.eval_key(), chunk, chunk);
    fhe::Ciphertext masked = MaskCiphertext(s1, sq, batch.mask_constant_sum);
    batch.partials.push_back(fhe::PartDec(ctx, s1.key_share(), masked, s1.NextSeed("part-dec")));
    batch.cts.push_back(std::move(masked));
  }
  JudgeVerdict v;
  v.tolerance = tolerance;
  v.sum = Exchange(s1, s2, t, kJudgeProtocol, tag::kJudgeRequest, tag::kJudgeReply, batch);
  v.accepted = std::abs(v.sum - 1.0) <= tolerance;
  if (v.accepted) s1.MarkUnitNorm(g);
  return v;
}

CosineResult EsecCos(ServerS1& s1, ServerS2& s2, Transport& t, const fhe::EncryptedGradient& a,
                     const fhe::EncryptedGradient& b) {
  CheckPair(a, b);
  if (!s1.IsUnitNorm(a) || !s1.IsUnitNorm(b)) {
    throw FailedPrecondition("cosine requires inputs that passed the norm check");
  }
  return InnerExchange(s1, s2, t, a, b);
}

CosineResult EsecInner(ServerS1& s1, ServerS2& s2, Transport& t, const fhe::EncryptedGradient& a,
                       const fhe::EncryptedGradient& b) {
  CheckPair(a, b);
  return InnerExchange(s1, s2, t, a, b);
}

}  // namespace pbfl::protocols
