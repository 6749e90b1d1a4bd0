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

#include "pbfl/defense/secure_defense.h"

#include <cmath>

#include "pbfl/common/error.h"

namespace pbfl::defense {

SecureDefenseBackend::SecureDefenseBackend(
    protocols::ServerS1& s1, protocols::ServerS2& s2, protocols::Transport& t,
    const std::vector<std::optional<fhe::EncryptedGradient>>& updates,
    const std::optional<fhe::EncryptedGradient>& reference)
    : s1_(s1), s2_(s2), t_(t), updates_(updates), reference_(reference) {}

const fhe::EncryptedGradient& SecureDefenseBackend::Update(ClientId i) const {
  const auto& u = updates_.at(i);
  if (!u.has_value()) throw InvalidArgument("client " + std::to_string(i) + " has no update");
  return *u;
}

double SecureDefenseBackend::NormSquared(ClientId i) {
  return protocols::EsecJudge(s1_, s2_, t_, Update(i)).sum;
}

std::vector<double> SecureDefenseBackend::ReferenceCosines(const std::vector<ClientId>& trusted) {
  if (trusted.empty()) throw InvalidArgument("empty trusted set");
  std::vector<double> out;
  if (reference_.has_value()) {
    if (!protocols::EsecJudge(s1_, s2_, t_, *reference_).accepted) {
      throw ProtocolError("reference gradient failed the norm check");
    }
    for (ClientId i : trusted) out.push_back(protocols::EsecCos(s1_, s2_, t_, Update(i), *reference_).value);
    return out;
  }
  // First round: cosine to the trusted sum, i.e. <g_i, S> / ||S||.
  fhe::EncryptedGradient sum = Update(trusted[0]);
  for (std::size_t k = 1; k < trusted.size(); ++k) sum = fhe::AddGradients(s1_.ctx(), sum, Update(trusted[k]));
  const double norm_sq = protocols::EsecJudge(s1_, s2_, t_, sum).sum;
  if (!(norm_sq > 0)) throw ProtocolError("trusted sum has no positive norm");
  const double norm = std::sqrt(norm_sq);
  for (ClientId i : trusted) out.push_back(protocols::EsecInner(s1_, s2_, t_, Update(i), sum).value / norm);
  return out;
}

double SecureDefenseBackend::Cosine(ClientId a, ClientId b) {
  return protocols::EsecCos(s1_, s2_, t_, Update(a), Update(b)).value;
}

void SecureDefenseBackend::Aggregate(const ClientMap& weights) {
  aggregate_ = AggregateEncrypted(s1_.ctx(), updates_, weights);
}

fhe::EncryptedGradient AggregateEncrypted(const fhe::FheContext& ctx,
                                          const std::vector<std::optional<fhe::EncryptedGradient>>& updates,
                                          const ClientMap& weights) {
  if (weights.empty()) throw InvalidArgument("aggregation over an empty selection");
  std::optional<fhe::EncryptedGradient> acc;
  for (const auto& [i, wi] : weights) {
    const auto& u = updates.at(i);
    if (!u.has_value()) throw InvalidArgument("selected client has no update");
    fhe::EncryptedGradient term = fhe::ScaleGradient(ctx, *u, wi);
    acc = acc.has_value() ? fhe::AddGradients(ctx, *acc, term) : std::move(term);
  }
  return *acc;
}

}  // namespace pbfl::defense
