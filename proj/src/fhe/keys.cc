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

#include "pbfl/fhe/keys.h"

#include "pbfl/common/error.h"

namespace pbfl::fhe {

std::shared_ptr<const FheContext> MakeContext(const std::string& preset) {
  return std::make_shared<const FheContext>(Setup(preset));
}

KeyMaterial KeyGen(const FheContext& ctx, std::uint64_t seed) {
  const Ring& ring = ctx.ring();
  const RingParams& params = ctx.params();
  Prng rng(Prng::DeriveSeed(seed, "keygen"));
  const Basis q_basis = ring.LevelBasis(params.max_level());
  const Basis ext = ring.ExtendedBasis();

  KeyMaterial km;
  km.sk.s = ring.SampleTernary(rng, params.secret_weight, ext);
  const RingElement s_q = ring.Restrict(km.sk.s, q_basis);

  km.pk.a = ring.SampleUniform(rng, q_basis);
  const RingElement e = ring.SampleGaussian(rng, params.sigma_err, q_basis);
  km.pk.b = ring.Add(ring.Neg(ring.Mul(km.pk.a, s_q)), e);

  km.evk.a = ring.SampleUniform(rng, ext);
  const RingElement e_prime = ring.SampleGaussian(rng, params.sigma_err, ext);
  RingElement p_s2 = ring.Mul(km.sk.s, km.sk.s);
  // Multiply by P: zero modulo P itself, P mod q_i elsewhere.
  for (std::size_t b = 0; b < ext.size(); ++b) {
    const u64 p = ring.prime(ext[b]);
    const u64 factor = params.special_prime % p;
    for (auto& c : p_s2.residues[b]) c = MulMod(c, factor, p);
  }
  km.evk.b = ring.Add(ring.Add(ring.Neg(ring.Mul(km.evk.a, km.sk.s)), e_prime), p_s2);
  return km;
}

std::pair<SecretKeyShare, SecretKeyShare> KeySplit(const FheContext& ctx, const SecretKey& sk,
                                                   std::uint64_t seed,
                                                   const std::string& first_holder,
                                                   const std::string& second_holder) {
  const Ring& ring = ctx.ring();
  const Basis q_basis = ring.LevelBasis(ctx.params().max_level());
  Prng rng(Prng::DeriveSeed(seed, "key-split"));
  SecretKeyShare first, second;
  first.share = ring.SampleUniform(rng, q_basis);
  second.share = ring.Sub(ring.Restrict(sk.s, q_basis), first.share);
  first.holder_id = first_holder;
  second.holder_id = second_holder;
  first.split_id = second.split_id = Prng::DeriveSeed(seed, "split-id");
  first.side = ShareSide::kFirst;
  second.side = ShareSide::kSecond;
  return {std::move(first), std::move(second)};
}

RingElement CombineShares(const FheContext& ctx, const SecretKeyShare& a, const SecretKeyShare& b) {
  return ctx.ring().Add(a.share, b.share);
}

}  // namespace pbfl::fhe
