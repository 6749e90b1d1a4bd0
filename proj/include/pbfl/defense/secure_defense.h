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

#ifndef PBFL_DEFENSE_SECURE_DEFENSE_H_
#define PBFL_DEFENSE_SECURE_DEFENSE_H_

#include <optional>
#include <vector>

#include "pbfl/defense/pipeline.h"
#include "pbfl/protocols/secure_ops.h"

namespace pbfl::defense {

// The defense over ciphertexts: every norm and similarity goes through the
// two-server protocols; aggregation is homomorphic.
class SecureDefenseBackend : public DefenseBackend {
 public:
  // `reference`, when set, is a fresh encryption of the normalized previous
  // global gradient.
  SecureDefenseBackend(protocols::ServerS1& s1, protocols::ServerS2& s2, protocols::Transport& t,
                       const std::vector<std::optional<fhe::EncryptedGradient>>& updates,
                       const std::optional<fhe::EncryptedGradient>& reference);

  std::size_t clients() const override { return updates_.size(); }
  bool submitted(ClientId i) const override { return updates_.at(i).has_value(); }
  double NormSquared(ClientId i) override;
  bool has_reference() const override { return reference_.has_value(); }
  std::vector<double> ReferenceCosines(const std::vector<ClientId>& trusted) override;
  double Cosine(ClientId a, ClientId b) override;
  void Aggregate(const ClientMap& weights) override;

  const std::optional<fhe::EncryptedGradient>& aggregate() const { return aggregate_; }

 private:
  const fhe::EncryptedGradient& Update(ClientId i) const;

  protocols::ServerS1& s1_;
  protocols::ServerS2& s2_;
  protocols::Transport& t_;
  const std::vector<std::optional<fhe::EncryptedGradient>>& updates_;
  const std::optional<fhe::EncryptedGradient>& reference_;
  std::optional<fhe::EncryptedGradient> aggregate_;
};

// Weighted homomorphic sum: sum_i weights[i] * updates[i].
fhe::EncryptedGradient AggregateEncrypted(const fhe::FheContext& ctx,
                                          const std::vector<std::optional<fhe::EncryptedGradient>>& updates,
                                          const ClientMap& weights);

}  // namespace pbfl::defense

#endif  // PBFL_DEFENSE_SECURE_DEFENSE_H_
