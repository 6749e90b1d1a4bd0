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

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "pbfl/common/error.h"
#include "pbfl/common/prng.h"
#include "pbfl/fhe/encrypted_gradient.h"
#include "pbfl/fhe/serialize.h"

namespace pbfl::fhe {
namespace {

std::vector<double> RandomVector(Prng& rng, std::size_t len, double lo = -1, double hi = 1) {
  std::vector<double> v(len);
  for (auto& x : v) x = rng.UniformReal(lo, hi);
  return v;
}

double MaxAbsDiff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

const FheContext& Tiny() {
  static auto ctx = MakeContext("test-tiny");
  return *ctx;
}

const FheContext& Desk() {
  static auto ctx = MakeContext("desk-128bit");
  return *ctx;
}

const KeyMaterial& DeskKeys() {
  static KeyMaterial km = KeyGen(Desk(), 7);
  return km;
}

const KeyMaterial& TinyKeys() {
  static KeyMaterial km = KeyGen(Tiny(), 11);
  return km;
}

// Composed value of `a` modulo q at the top level, as plain u64.
std::vector<u64> ComposedQ(const FheContext& ctx, const RingElement& a) {
  std::vector<u64> out;
  for (u128 c : ctx.ring().Compose(a)) out.push_back(static_cast<u64>(c));
  return out;
}

// Direct evaluation of the canonical embedding: slot j = m(xi^(5^j)) / scale.
std::vector<double> EmbeddingOracle(const std::vector<i128>& coeffs, double scale) {
  const std::size_t n = coeffs.size();
  const std::size_t two_n = 2 * n;
  std::vector<double> out(n / 2);
  std::size_t rot = 1;
  for (std::size_t j = 0; j < n / 2; ++j) {
    std::complex<double> acc = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const double angle = 2 * std::numbers::pi * static_cast<double>((rot * k) % two_n) /
                           static_cast<double>(two_n);
      acc += static_cast<double>(coeffs[k]) * std::polar(1.0, angle);
    }
    out[j] = acc.real() / scale;
    rot = rot * 5 % two_n;
  }
  return out;
}

TEST(Modular, PrimalityAndRoots) {
  EXPECT_TRUE(IsPrime(436051969ULL));
  EXPECT_TRUE(IsPrime(1152921504606830593ULL));
  EXPECT_FALSE(IsPrime(436051969ULL * 3));
  EXPECT_FALSE(IsPrime(1));
  const u64 p = 165236737ULL;
  const u64 psi = MinimalPrimitiveRoot(p, 4096);
  EXPECT_EQ(PowMod(psi, 2048, p), p - 1);
  EXPECT_EQ(PowMod(psi, 4096, p), 1u);
  EXPECT_EQ(MulMod(InvMod(12345, p), 12345, p), 1u);
  EXPECT_THROW(MinimalPrimitiveRoot(p, 1 << 20), Error);
}

TEST(Setup, PresetShapes) {
  const RingParams desk = fhe::Setup("desk-128bit");
  EXPECT_EQ(desk.n, 2048u);
  EXPECT_EQ(desk.q_bits(), 56);
  EXPECT_LT(desk.delta * desk.delta, static_cast<double>(desk.q()));
  const RingParams tiny = fhe::Setup("test-tiny");
  EXPECT_EQ(tiny.n, 16u);
  EXPECT_LT(tiny.delta * tiny.delta, static_cast<double>(tiny.q()));
  for (u64 p : tiny.chain) EXPECT_EQ((p - 1) % 32, 0u);
  EXPECT_GE(desk.sigma_smudge, desk.sigma_err);
  EXPECT_THROW(fhe::Setup("paranoid-256"), Error);
}

TEST(Ring, TransformMatchesSchoolbookAtDeskSize) {
  const Ring& ring = Desk().ring();
  Prng rng(1);
  for (int idx : ring.ExtendedBasis()) {
    const u64 p = ring.prime(idx);
    std::vector<u64> a(ring.n()), b(ring.n()), fast(ring.n()), slow(ring.n());
    for (auto& x : a) x = rng.UniformBelow(p);
    for (auto& x : b) x = rng.UniformBelow(p);
    ring.MulResidues(a, b, fast, idx);
    ring.MulResidues(a, b, slow, idx, /*force_schoolbook=*/true);
    EXPECT_EQ(fast, slow) << "prime index " << idx;
  }
}

TEST(Ring, TinyOpsMatchComposedOracleExactly) {
  const FheContext& ctx = Tiny();
  const Ring& ring = ctx.ring();
  const Basis q_basis = ring.LevelBasis(1);
  const u64 q = static_cast<u64>(ring.BasisModulus(q_basis));
  Prng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const RingElement a = ring.SampleUniform(rng, q_basis);
    const RingElement b = ring.SampleUniform(rng, q_basis);
    const std::vector<u64> ca = ComposedQ(ctx, a), cb = ComposedQ(ctx, b);
    EXPECT_EQ(ComposedQ(ctx, ring.Mul(a, b)), SchoolbookNegacyclic(ca, cb, q));
    std::vector<u64> sum(ring.n()), diff(ring.n()), neg(ring.n());
    for (std::size_t k = 0; k < ring.n(); ++k) {
      sum[k] = static_cast<u64>((static_cast<u128>(ca[k]) + cb[k]) % q);
      diff[k] = static_cast<u64>((static_cast<u128>(ca[k]) + q - cb[k]) % q);
      neg[k] = ca[k] == 0 ? 0 : q - ca[k];
    }
    EXPECT_EQ(ComposedQ(ctx, ring.Add(a, b)), sum);
    EXPECT_EQ(ComposedQ(ctx, ring.Sub(a, b)), diff);
    EXPECT_EQ(ComposedQ(ctx, ring.Neg(a)), neg);
  }
}

TEST(Ring, ComposeExtendAndRoundedDivision) {
  const FheContext& ctx = Tiny();
  const Ring& ring = ctx.ring();
  const Basis ext = ring.ExtendedBasis();
  const u128 big = ring.BasisModulus(ext);
  const u64 p_last = ring.prime(kPrimeSpecial);
  Prng rng(3);
  const RingElement a = ring.SampleUniform(rng, ext);
  const std::vector<u128> composed = ring.Compose(a);
  EXPECT_EQ(ring.FromComposed(composed, ext), a);
  const std::vector<u128> divided = ring.Compose(ring.DivRoundByLast(a));
  const u128 reduced_mod = big / p_last;
  for (std::size_t k = 0; k < ring.n(); ++k) {
    const u128 expect = ((composed[k] + p_last / 2) / p_last) % reduced_mod;
    EXPECT_TRUE(divided[k] == expect) << k;
  }
  std::vector<i64> small = {-5, 4, 0, 1, -1, 7, -3, 2, 9, -9, 0, 0, 1, 1, -2, 3};
  const RingElement s = ring.FromSigned(small, ring.LevelBasis(1));
  const std::vector<i128> back = ring.ComposeCentered(ring.Extend(s, ext));
  for (std::size_t k = 0; k < small.size(); ++k) EXPECT_TRUE(back[k] == small[k]);
}

TEST(Encoder, MatchesDirectEmbeddingAtTiny) {
  const FheContext& ctx = Tiny();
  Prng rng(4);
  const std::vector<double> v = RandomVector(rng, ctx.slots());
  const Plaintext pt = ctx.encoder().Encode(v, ctx.params().delta, 1);
  const std::vector<double> oracle = EmbeddingOracle(ctx.ring().ComposeCentered(pt.poly), pt.scale);
  EXPECT_LT(MaxAbsDiff(ctx.encoder().Decode(pt), oracle), 1e-9);
  EXPECT_LT(MaxAbsDiff(oracle, v), 1e-5);
}

TEST(Encoder, MatchesDirectEmbeddingAtDesk) {
  const FheContext& ctx = Desk();
  Prng rng(5);
  const std::vector<double> v = RandomVector(rng, ctx.slots());
  const Plaintext pt = EncodeVector(ctx, v);
  const std::vector<double> oracle = EmbeddingOracle(ctx.ring().ComposeCentered(pt.poly), pt.scale);
  EXPECT_LT(MaxAbsDiff(ctx.encoder().Decode(pt), oracle), 1e-9);
}

TEST(Encoder, RoundTripAndEdgeCases) {
  const FheContext& ctx = Desk();
  const std::vector<double> zero(ctx.slots(), 0.0);
  EXPECT_EQ(ctx.encoder().Decode(EncodeVector(ctx, zero)), zero);
  const std::vector<double> small = {0.5, -0.25};
  const std::vector<double> back = ctx.encoder().Decode(EncodeVector(ctx, small));
  EXPECT_LT(std::abs(back[0] - 0.5), std::ldexp(1.0, -20));
  EXPECT_LT(std::abs(back[1] + 0.25), std::ldexp(1.0, -20));
  for (std::size_t j = 2; j < back.size(); ++j) EXPECT_LT(std::abs(back[j]), std::ldexp(1.0, -20));
  Prng rng(6);
  for (int t = 0; t < 20; ++t) {
    const std::vector<double> v = RandomVector(rng, ctx.slots());
    EXPECT_LT(MaxAbsDiff(ctx.encoder().Decode(EncodeVector(ctx, v)), v), kEncodeEps);
  }
  std::vector<double> too_long(ctx.slots() + 1, 0.0);
  EXPECT_THROW(EncodeVector(ctx, too_long), Error);
  std::vector<double> bad = {NAN};
  EXPECT_THROW(EncodeVector(ctx, bad), Error);
}

TEST(KeyGen, DeterministicAndRelationsHold) {
  const FheContext& ctx = Desk();
  const Ring& ring = ctx.ring();
  const KeyMaterial& km = DeskKeys();
  const KeyMaterial again = KeyGen(ctx, 7);
  EXPECT_EQ(Serialize(ctx, km.pk), Serialize(ctx, again.pk));
  EXPECT_EQ(Serialize(ctx, km.evk), Serialize(ctx, again.evk));
  EXPECT_EQ(Serialize(ctx, km.sk), Serialize(ctx, again.sk));

  const double bound = 10 * ctx.params().sigma_err;
  const RingElement s_q = ring.Restrict(km.sk.s, km.pk.a.basis);
  for (i128 c : ring.ComposeCentered(ring.Add(km.pk.b, ring.Mul(km.pk.a, s_q)))) {
    EXPECT_LE(static_cast<double>(c < 0 ? -c : c), bound);
  }
  // evk0 + evk1*s - P*s^2 must be small over P*q.
  RingElement residual = ring.Add(km.evk.b, ring.Mul(km.evk.a, km.sk.s));
  std::vector<i128> s2 = ring.ComposeCentered(ring.Mul(km.sk.s, km.sk.s));
  std::vector<i128> r = ring.ComposeCentered(residual);
  for (std::size_t k = 0; k < ring.n(); ++k) {
    const i128 e = r[k] - static_cast<i128>(ctx.params().special_prime) * s2[k];
    EXPECT_LE(static_cast<double>(e < 0 ? -e : e), bound);
  }
}

TEST(KeySplit, SharesReassembleAndDifferAcrossSeeds) {
  const FheContext& ctx = Desk();
  const Ring& ring = ctx.ring();
  const KeyMaterial& km = DeskKeys();
  const RingElement sk_q = ring.Restrict(km.sk.s, ring.LevelBasis(1));
  auto [a1, a2] = KeySplit(ctx, km.sk, 1, "S1", "S2");
  auto [b1, b2] = KeySplit(ctx, km.sk, 2, "S1", "S2");
  EXPECT_EQ(CombineShares(ctx, a1, a2), sk_q);
  EXPECT_EQ(CombineShares(ctx, b1, b2), sk_q);
  EXPECT_NE(a1.share, b1.share);
  EXPECT_NE(a1.split_id, b1.split_id);

  const FheContext& tiny = Tiny();
  SecretKey zero{tiny.ring().Zero(tiny.ring().ExtendedBasis())};
  auto [z1, z2] = KeySplit(tiny, zero, 3, "x", "y");
  EXPECT_EQ(tiny.ring().Add(z1.share, z2.share), tiny.ring().Zero(tiny.ring().LevelBasis(1)));
  EXPECT_EQ(z2.share, tiny.ring().Neg(z1.share));
}

class DeskScheme : public ::testing::Test {
 protected:
  void SetUp() override {
    auto [s1, s2] = KeySplit(Desk(), DeskKeys().sk, 99, "S1", "S2");
    first_ = s1;
    second_ = s2;
  }

  std::vector<double> Threshold(const Ciphertext& ct, std::uint64_t seed) const {
    const auto d1 = PartDec(Desk(), first_, ct, seed);
    const auto d2 = PartDec(Desk(), second_, ct, seed + 1);
    return FullDec(Desk(), ct, d1, d2);
  }

  SecretKeyShare first_, second_;
};

TEST_F(DeskScheme, EncryptDecryptAndAdd) {
  const FheContext& ctx = Desk();
  const PublicKey& pk = DeskKeys().pk;
  Prng rng(8);
  const std::vector<double> v = RandomVector(rng, ctx.slots());
  const std::vector<double> w = RandomVector(rng, ctx.slots());
  const Ciphertext cv = EncryptVector(ctx, pk, v, 1);
  const Ciphertext cv2 = EncryptVector(ctx, pk, v, 2);
  EXPECT_NE(Serialize(ctx, cv), Serialize(ctx, cv2));
  EXPECT_LT(MaxAbsDiff(Threshold(cv, 10), v), kDecEps);
  EXPECT_LT(MaxAbsDiff(Threshold(cv2, 12), v), kDecEps);
  EXPECT_LT(MaxAbsDiff(Decrypt(ctx, DeskKeys().sk, cv), v), kDecEps);

  const Ciphertext cw = EncryptVector(ctx, pk, w, 3);
  std::vector<double> sum(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sum[i] = v[i] + w[i];
  EXPECT_LT(MaxAbsDiff(Threshold(Add(ctx, cv, cw), 14), sum), 2 * kDecEps);
  const std::vector<double> zero(ctx.slots(), 0.0);
  const Ciphertext cz = EncryptVector(ctx, pk, zero, 4);
  EXPECT_LT(MaxAbsDiff(Threshold(cz, 16), zero), kDecEps);
  EXPECT_LT(MaxAbsDiff(Threshold(Add(ctx, cv, cz), 18), v), 2 * kDecEps);

  const std::vector<double> ones(ctx.slots(), 1.0);
  Ciphertext acc = EncryptVector(ctx, pk, ones, 20);
  for (int j = 1; j < 4; ++j) AddInPlace(ctx, acc, EncryptVector(ctx, pk, ones, 20 + j));
  const std::vector<double> fours(ctx.slots(), 4.0);
  EXPECT_LT(MaxAbsDiff(Threshold(acc, 30), fours), 4 * kDecEps);
}

TEST_F(DeskScheme, MultiplicationAndDepth) {
  const FheContext& ctx = Desk();
  const KeyMaterial& km = DeskKeys();
  Prng rng(9);
  const std::vector<double> v = RandomVector(rng, ctx.slots());
  const std::vector<double> ones(ctx.slots(), 1.0);
  const Ciphertext cv = EncryptVector(ctx, km.pk, v, 1);
  const Ciphertext prod_one = Mult(ctx, km.evk, cv, EncryptVector(ctx, km.pk, ones, 2));
  EXPECT_EQ(prod_one.depth_used, 1);
  EXPECT_NEAR(prod_one.scale, ctx.params().delta, 1e-6);
  EXPECT_LT(MaxAbsDiff(Threshold(prod_one, 3), v), kMultEps);

  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = v[i] * v[i];
  EXPECT_LT(MaxAbsDiff(Threshold(Mult(ctx, km.evk, cv, cv), 5), sq), kMultEps);

  std::vector<double> e1(ctx.slots(), 0.0), e2(ctx.slots(), 0.0);
  e1[0] = 1;
  e2[1] = 1;
  const Ciphertext orth = Mult(ctx, km.evk, EncryptVector(ctx, km.pk, e1, 6),
                               EncryptVector(ctx, km.pk, e2, 7));
  EXPECT_LT(MaxAbsDiff(Threshold(orth, 8), std::vector<double>(ctx.slots(), 0.0)), kMultEps);

  EXPECT_THROW(Mult(ctx, km.evk, prod_one, prod_one), Error);
}

TEST_F(DeskScheme, PlainScalarMultiplication) {
  const FheContext& ctx = Desk();
  const KeyMaterial& km = DeskKeys();
  Prng rng(10);
  const std::vector<double> v = RandomVector(rng, ctx.slots());
  const Ciphertext cv = EncryptVector(ctx, km.pk, v, 1);
  EXPECT_LT(MaxAbsDiff(Threshold(MultPlain(ctx, cv, 1.0), 2), v), kDecEps);
  EXPECT_LT(MaxAbsDiff(Threshold(MultPlain(ctx, cv, 0.0), 3), std::vector<double>(v.size(), 0.0)),
            kDecEps);
  std::vector<double> scaled(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) scaled[i] = 0.3 * v[i];
  EXPECT_LT(MaxAbsDiff(Threshold(MultPlain(ctx, cv, 0.3), 4), scaled), kMultEps);
  EXPECT_THROW(MultPlain(ctx, cv, std::nan("")), Error);
  const Ciphertext low = Mult(ctx, km.evk, cv, cv);
  EXPECT_THROW(MultPlain(ctx, low, 0.5), Error);
  EXPECT_THROW(Add(ctx, cv, MultPlain(ctx, cv, 0.5)), Error);
}

TEST_F(DeskScheme, PartialDecryptionContracts) {
  const FheContext& ctx = Desk();
  const KeyMaterial& km = DeskKeys();
  Prng rng(11);
  const std::vector<double> v = RandomVector(rng, ctx.slots());
  const std::vector<double> w = RandomVector(rng, ctx.slots());
  const Ciphertext cv = EncryptVector(ctx, km.pk, v, 1);
  const Ciphertext cw = EncryptVector(ctx, km.pk, w, 2);
  const auto d1 = PartDec(ctx, first_, cv, 5);
  EXPECT_EQ(d1.d, PartDec(ctx, first_, cv, 5).d);
  EXPECT_THROW(FullDec(ctx, cv, d1, PartDec(ctx, first_, cv, 6)), Error);
  // Shares are key-scoped: the same pair decrypts any ciphertext.
  EXPECT_LT(MaxAbsDiff(Threshold(cw, 40), w), kDecEps);
  auto [other1, other2] = KeySplit(ctx, km.sk, 1234, "S1", "U");
  EXPECT_THROW(FullDec(ctx, cv, d1, PartDec(ctx, other2, cv, 7)), Error);
  EXPECT_LT(MaxAbsDiff(FullDec(ctx, cv, PartDec(ctx, other1, cv, 8), PartDec(ctx, other2, cv, 9)), v),
            kDecEps);
}

TEST(Threshold, SingleShareDecryptionIsFarFromPlaintext) {
  const FheContext& ctx = Tiny();
  const KeyMaterial& km = TinyKeys();
  Prng rng(12);
  const std::vector<double> v = RandomVector(rng, ctx.slots());
  const Ciphertext ct = EncryptVector(ctx, km.pk, v, 1);
  int far = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto [s1, s2] = KeySplit(ctx, km.sk, 500 + trial, "S1", "S2");
    const auto d1 = PartDec(ctx, s1, ct, trial);
    const Plaintext partial{ctx.ring().Add(ct.c0, d1.d), ct.scale};
    if (MaxAbsDiff(ctx.encoder().Decode(partial), v) > 100 * kDecEps) ++far;
  }
  EXPECT_GE(far, 198);
}

TEST(Serialize, RoundTripsAndRejectsMalformed) {
  const FheContext& ctx = Desk();
  const KeyMaterial& km = DeskKeys();
  Prng rng(13);
  const std::vector<double> v = RandomVector(rng, 3000);
  const EncryptedGradient g = NormalizeChunkEncrypt(ctx, km.pk, v, 5);
  EXPECT_EQ(g.tau(), 3u);
  const Bytes blob = Serialize(ctx, g);
  const EncryptedGradient back = DeserializeEncryptedGradient(ctx, blob);
  EXPECT_EQ(Serialize(ctx, back), blob);
  EXPECT_EQ(back.original_len, 3000u);

  const Bytes ct_blob = Serialize(ctx, g.chunks[0]);
  EXPECT_EQ(ct_blob.size(), 4 + 2 + 4 + 2 + 1 + 1 + 2 + 8 + 1 + 2 * 2048 * 8u);
  EXPECT_EQ(ct_blob[10], 56);  // bitlen(q) low byte
  const Bytes evk_blob = Serialize(ctx, km.evk);
  EXPECT_EQ(DeserializeEvalKey(ctx, evk_blob).a, km.evk.a);

  Bytes truncated(ct_blob.begin(), ct_blob.end() - 3);
  EXPECT_THROW(DeserializeCiphertext(ctx, truncated), Error);
  Bytes bad_magic = ct_blob;
  bad_magic[0] = 'X';
  EXPECT_THROW(DeserializeCiphertext(ctx, bad_magic), Error);
  EXPECT_THROW(DeserializePublicKey(ctx, ct_blob), Error);
  EXPECT_THROW(DeserializeCiphertext(Tiny(), ct_blob), Error);

  const std::vector<double> dec = DecryptGradient(ctx, km.sk, back);
  const std::vector<double> unit = Normalized(v);
  EXPECT_LT(MaxAbsDiff(dec, unit), kDecEps);
  EXPECT_NEAR(L2Norm(unit), 1.0, 1e-12);
  EXPECT_LT(MaxAbsDiff(Normalized(unit), unit), 1e-12);
  EXPECT_THROW(NormalizeChunkEncrypt(ctx, km.pk, std::vector<double>(10, 0.0), 1), Error);
}

TEST(EncryptedGradient, ChunkCountAndPadding) {
  EXPECT_EQ(ChunkCount(3000, 1024), 3u);
  EXPECT_EQ(ChunkCount(4096, 1024), 4u);
  EXPECT_EQ(ChunkCount(7850, 1024), 8u);
  EXPECT_EQ(ChunkCount(1, 1024), 1u);
  const FheContext& ctx = Desk();
  Prng rng(14);
  const std::vector<double> v = RandomVector(rng, 3000);
  const EncryptedGradient g = ChunkEncrypt(ctx, DeskKeys().pk, v, 3);
  const std::vector<double> last = Decrypt(ctx, DeskKeys().sk, g.chunks[2]);
  for (std::size_t j = 3000 - 2048; j < ctx.slots(); ++j) EXPECT_LT(std::abs(last[j]), kDecEps);
}

}  // namespace
}  // namespace pbfl::fhe
