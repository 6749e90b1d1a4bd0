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

#include "pbfl/sim/setup.h"

#include "pbfl/common/error.h"
#include "pbfl/common/prng.h"

namespace pbfl::sim {

Deployment SystemSetup(std::size_t clients, const std::string& preset, std::uint64_t seed) {
  if (clients < 2) throw InvalidArgument("setup needs at least two clients");
  Deployment d;
  d.ctx = fhe::MakeContext(preset);
  fhe::KeyMaterial keys = fhe::KeyGen(*d.ctx, Prng::DeriveSeed(seed, "keygen"));
  d.pk = keys.pk;
  auto [sk1, sk2] = fhe::KeySplit(*d.ctx, keys.sk, Prng::DeriveSeed(seed, "split-servers"), "S1", "S2");
  ++d.split_count;
  d.s1 = std::make_unique<protocols::ServerS1>(d.ctx, std::move(sk1), keys.evk, Prng::DeriveSeed(seed, "s1"));
  d.s2 = std::make_unique<protocols::ServerS2>(d.ctx, std::move(sk2), Prng::DeriveSeed(seed, "s2"));
  for (std::size_t i = 0; i < clients; ++i) {
    auto [s_share, u_share] = fhe::KeySplit(*d.ctx, keys.sk, Prng::DeriveSeed(seed, "split-client", i), "S1",
                                            "client-" + std::to_string(i));
    ++d.split_count;
    d.s1->AddClientShare(i, std::move(s_share));
    d.client_shares.push_back(std::move(u_share));
  }
  return d;
}

std::vector<double> ClientDecrypt(Deployment& d, std::size_t client, const fhe::EncryptedGradient& g,
                                  std::uint64_t seed) {
  const fhe::FheContext& ctx = *d.ctx;
  const fhe::SecretKeyShare& server_half = d.s1->client_share(client);
  const fhe::SecretKeyShare& own = d.client_shares.at(client);
  std::vector<double> out;
  out.reserve(g.tau() * ctx.slots());
  for (std::size_t j = 0; j < g.tau(); ++j) {
    const auto from_s1 = fhe::PartDec(ctx, server_half, g.chunks[j], Prng::DeriveSeed(seed, "s1-part", j));
    const auto from_client = fhe::PartDec(ctx, own, g.chunks[j], Prng::DeriveSeed(seed, "client-part", j));
    const auto slots = fhe::FullDec(ctx, g.chunks[j], from_s1, from_client);
    out.insert(out.end(), slots.begin(), slots.end());
  }
  out.resize(g.original_len);
  return out;
}

}  // namespace pbfl::sim
