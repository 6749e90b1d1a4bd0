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

#include "pbfl/fhe/scheme.h"

#include <cmath>

#include "pbfl/common/error.h"

namespace pbfl::fhe {

namespace {

void CheckScales(double a, double b) {
  if (std::abs(a - b) > 1e-9 * std::max(std::abs(a), std::abs(b))) {
    throw FailedPrecondition("scale mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

void CheckCompatible(const Ciphertext& a, const Ciphertext& b) {
  if (a.c0.basis != b.c0.basis) throw FailedPrecondition("ciphertext level mismatch");
  CheckScales(a.scale, b.scale);
}

}  // namespace

Plaintext EncodeVector(const FheContext& ctx, std::span<const double> values) {
  return ctx.encoder().Encode(values, ctx.params().delta, ctx.params().max_level());
}

Ciphertext Encrypt(const FheContext& ctx, const PublicKey& pk, const Plaintext& pt,
                   std::uint64_t seed) {
  const Ring& ring = ctx.ring();
  const RingParams& params = ctx.params();
  if (pt.poly.basis != pk.a.basis) throw InvalidArgument("plaintext must be at the top level");
  Prng rng(Prng::DeriveSeed(seed, "encrypt"));
  const Basis& basis = pk.a.basis;
  const RingElement u = ring.SampleTernary(rng, params.secret_weight, basis);
  const RingElement e0 = ring.SampleGaussian(rng, params.sigma_err, basis);
  const RingElement e1 = ring.SampleGaussian(rng, params.sigma_err, basis);
  Ciphertext ct;
  ct.c0 = ring.Add(ring.Add(pt.poly, ring.Mul(u, pk.b)), e0);
  ct.c1 = ring.Add(ring.Mul(u, pk.a), e1);
  ct.scale = pt.scale;
  ct.depth_used = 0;
  return ct;
}

Ciphertext EncryptVector(const FheContext& ctx, const PublicKey& pk,
                         std::span<const double> values, std::uint64_t seed) {
  return Encrypt(ctx, pk, EncodeVector(ctx, values), seed);
}

Ciphertext Add(const FheContext& ctx, const Ciphertext& a, const Ciphertext& b) {
  Ciphertext r = a;
  AddInPlace(ctx, r, b);
  return r;
}

void AddInPlace(const FheContext& ctx, Ciphertext& acc, const Ciphertext& b) {
  CheckCompatible(acc, b);
  ctx.ring().AddInPlace(acc.c0, b.c0);
  ctx.ring().AddInPlace(acc.c1, b.c1);
  acc.depth_used = std::max(acc.depth_used, b.depth_used);
}

Ciphertext AddPlain(const FheContext& ctx, const Ciphertext& a, const Plaintext& pt) {
  if (pt.poly.basis != a.c0.basis) throw FailedPrecondition("plaintext level mismatch");
  CheckScales(a.scale, pt.scale);
  Ciphertext r = a;
  ctx.ring().AddInPlace(r.c0, pt.poly);
  return r;
}

Ciphertext Mult(const FheContext& ctx, const EvalKey& evk, const Ciphertext& a,
                const Ciphertext& b) {
  const Ring& ring = ctx.ring();
  if (a.depth_used != 0 || b.depth_used != 0 || a.level() < 1) {
    throw FailedPrecondition("multiplication depth budget exceeded");
  }
  CheckCompatible(a, b);
  const RingElement d0 = ring.Mul(a.c0, b.c0);
  const RingElement d1 = ring.Add(ring.Mul(a.c0, b.c1), ring.Mul(a.c1, b.c0));
  const RingElement d2 = ring.Mul(a.c1, b.c1);

  // Key switching: lift d2 into the basis carrying P, multiply, divide by P.
  const Basis& ext = evk.a.basis;
  const RingElement d2_ext = ring.Extend(d2, ext);
  const RingElement k0 = ring.DivRoundByLast(ring.Mul(d2_ext, evk.b));
  const RingElement k1 = ring.DivRoundByLast(ring.Mul(d2_ext, evk.a));

  Ciphertext prod;
  prod.c0 = ring.DivRoundByLast(ring.Add(d0, k0));
  prod.c1 = ring.DivRoundByLast(ring.Add(d1, k1));
  const u64 dropped = ring.prime(a.c0.basis.back());
  prod.scale = a.scale * b.scale / static_cast<double>(dropped);
  prod.depth_used = 1;
  return prod;
}

Ciphertext MultPlain(const FheContext& ctx, const Ciphertext& a, double scalar) {
  if (!std::isfinite(scalar)) throw InvalidArgument("non-finite scalar");
  const double k = ctx.params().plain_scale;
  const double modulus = static_cast<double>(ctx.ring().BasisModulus(a.c0.basis));
  if (a.scale * k * 2.0 >= modulus) {
    throw FailedPrecondition("no modulus headroom for plaintext scaling at this level");
  }
  const i64 factor = std::llround(scalar * k);
  Ciphertext r;
  r.c0 = ctx.ring().MulSigned(a.c0, factor);
  r.c1 = ctx.ring().MulSigned(a.c1, factor);
  r.scale = a.scale * k;
  r.depth_used = a.depth_used;
  return r;
}

PartialDecryption PartDec(const FheContext& ctx, const SecretKeyShare& share,
                          const Ciphertext& ct, std::uint64_t seed) {
  const Ring& ring = ctx.ring();
  Prng rng(Prng::DeriveSeed(seed, "part-dec"));
  const RingElement s = ring.Restrict(share.share, ct.c1.basis);
  PartialDecryption pd;
  pd.d = ring.Add(ring.Mul(ct.c1, s), ring.SampleGaussian(rng, ctx.params().sigma_smudge, ct.c1.basis));
  pd.holder_id = share.holder_id;
  pd.split_id = share.split_id;
  pd.side = share.side;
  return pd;
}

Plaintext CombinePartials(const FheContext& ctx, const Ciphertext& ct,
                          const PartialDecryption& d1, const PartialDecryption& d2) {
  if (d1.holder_id == d2.holder_id) {
    throw ProtocolError("both partial decryptions come from holder '" + d1.holder_id + "'");
  }
  if (d1.split_id != d2.split_id || d1.side == d2.side) {
    throw ProtocolError("partial decryptions are not from complementary shares");
  }
  if (d1.d.basis != ct.c0.basis || d2.d.basis != ct.c0.basis) {
    throw ProtocolError("partial decryption level does not match the ciphertext");
  }
  const Ring& ring = ctx.ring();
  Plaintext pt;
  pt.poly = ring.Add(ring.Add(ct.c0, d1.d), d2.d);
  pt.scale = ct.scale;
  return pt;
}

std::vector<double> FullDec(const FheContext& ctx, const Ciphertext& ct,
                            const PartialDecryption& d1, const PartialDecryption& d2) {
  return ctx.encoder().Decode(CombinePartials(ctx, ct, d1, d2));
}

Plaintext DecryptToPlaintext(const FheContext& ctx, const SecretKey& sk, const Ciphertext& ct) {
  const Ring& ring = ctx.ring();
  const RingElement s = ring.Restrict(sk.s, ct.c1.basis);
  return Plaintext{ring.Add(ct.c0, ring.Mul(ct.c1, s)), ct.scale};
}

std::vector<double> Decrypt(const FheContext& ctx, const SecretKey& sk, const Ciphertext& ct) {
  return ctx.encoder().Decode(DecryptToPlaintext(ctx, sk, ct));
}

}  // namespace pbfl::fhe
