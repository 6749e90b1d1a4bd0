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

#include "pbfl/protocols/endpoints.h"

#include <cstring>

#include "pbfl/common/bytes.h"
#include "pbfl/common/error.h"
#include "pbfl/common/prng.h"

namespace pbfl::protocols {

namespace {

std::uint64_t HashRing(const fhe::RingElement& a, std::uint64_t h) {
  for (const auto& res : a.residues) {
    h = Fnv1a64(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(res.data()),
                                              res.size() * sizeof(fhe::u64)),
                h);
  }
  return h;
}

}  // namespace

std::uint64_t GradientDigest(const fhe::EncryptedGradient& g) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ g.original_len;
  for (const auto& c : g.chunks) {
    h = HashRing(c.c0, h);
    h = HashRing(c.c1, h);
  }
  return h;
}

ServerEndpoint::ServerEndpoint(Role role, std::shared_ptr<const fhe::FheContext> ctx,
                               fhe::SecretKeyShare share, std::uint64_t seed)
    : role_(role), ctx_(std::move(ctx)), share_(std::move(share)), seed_(seed) {}

std::uint64_t ServerEndpoint::NextSeed(const std::string& label) {
  return Prng::DeriveSeed(seed_, label, counters_[label]++);
}

ServerS1::ServerS1(std::shared_ptr<const fhe::FheContext> ctx, fhe::SecretKeyShare share,
                   fhe::EvalKey evk, std::uint64_t seed)
    : ServerEndpoint(Role::kS1, std::move(ctx), std::move(share), seed), evk_(std::move(evk)) {}

void ServerS1::AddClientShare(std::size_t client, fhe::SecretKeyShare share) {
  client_shares_[client] = std::move(share);
}

const fhe::SecretKeyShare& ServerS1::client_share(std::size_t client) const {
  auto it = client_shares_.find(client);
  if (it == client_shares_.end()) throw InvalidArgument("no key share for client " + std::to_string(client));
  return it->second;
}

fhe::RingElement ServerS1::FreshMask(const fhe::Basis& basis) {
  Prng rng(NextSeed("mask"));
  fhe::RingElement mask = ctx().ring().SampleUniform(rng, basis);
  const std::uint64_t digest = HashRing(mask, 0xcbf29ce484222325ULL);
  mask_digests_.push_back(digest);
  if (!unique_masks_.insert(digest).second) throw InternalError("mask reuse detected");
  return mask;
}

void ServerS1::MarkUnitNorm(const fhe::EncryptedGradient& g) { unit_norm_.insert(GradientDigest(g)); }

bool ServerS1::IsUnitNorm(const fhe::EncryptedGradient& g) const {
  return unit_norm_.count(GradientDigest(g)) > 0;
}

ServerS2::ServerS2(std::shared_ptr<const fhe::FheContext> ctx, fhe::SecretKeyShare share,
                   std::uint64_t seed)
    : ServerEndpoint(Role::kS2, std::move(ctx), std::move(share), seed) {}

double ServerS2::CompleteAndSum(const std::string& protocol, std::uint64_t invocation_id,
                                const std::vector<fhe::Ciphertext>& cts,
                                const std::vector<fhe::PartialDecryption>& partials) {
  if (cts.size() != partials.size() || cts.empty()) {
    throw ProtocolError("ciphertext and partial decryption counts differ");
  }
  S2Observation obs;
  obs.protocol = protocol;
  obs.invocation_id = invocation_id;
  double total = 0;
  for (std::size_t j = 0; j < cts.size(); ++j) {
    const fhe::PartialDecryption own = fhe::PartDec(ctx(), share_, cts[j], NextSeed("part-dec"));
    const fhe::Plaintext pt = fhe::CombinePartials(ctx(), cts[j], partials[j], own);
    std::vector<double> slots = ctx().encoder().Decode(pt);
    for (double v : slots) total += v;
    if (observer_) {
      std::vector<fhe::u64> raw;
      for (fhe::u128 c : ctx().ring().Compose(pt.poly)) raw.push_back(static_cast<fhe::u64>(c));
      obs.raw_coeffs.push_back(std::move(raw));
      obs.slots.push_back(std::move(slots));
    }
  }
  obs.reply = total;
  if (observer_) observer_(obs);
  return total;
}

}  // namespace pbfl::protocols
