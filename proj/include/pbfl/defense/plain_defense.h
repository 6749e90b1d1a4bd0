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

#ifndef PBFL_DEFENSE_PLAIN_DEFENSE_H_
#define PBFL_DEFENSE_PLAIN_DEFENSE_H_

#include <optional>
#include <vector>

#include "pbfl/defense/pipeline.h"

namespace pbfl::defense {

using Vector = std::vector<double>;

// The same defense on plaintext vectors with exact double arithmetic. Serves
// as the oracle for the encrypted pipeline.
class PlainDefenseBackend : public DefenseBackend {
 public:
  // `reference`, when set, is the normalized previous global gradient.
  PlainDefenseBackend(const std::vector<std::optional<Vector>>& updates, const std::optional<Vector>& reference);

  std::size_t clients() const override { return updates_.size(); }
  bool submitted(ClientId i) const override { return updates_.at(i).has_value(); }
  double NormSquared(ClientId i) override;
  bool has_reference() const override { return reference_.has_value(); }
  std::vector<double> ReferenceCosines(const std::vector<ClientId>& trusted) override;
  double Cosine(ClientId a, ClientId b) override;
  void Aggregate(const ClientMap& weights) override;

  const std::optional<Vector>& aggregate() const { return aggregate_; }

 private:
  const Vector& Update(ClientId i) const;

  const std::vector<std::optional<Vector>>& updates_;
  const std::optional<Vector>& reference_;
  std::optional<Vector> aggregate_;
};

double Dot(const Vector& a, const Vector& b);

}  // namespace pbfl::defense

#endif  // PBFL_DEFENSE_PLAIN_DEFENSE_H_
