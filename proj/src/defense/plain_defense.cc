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

#include "pbfl/defense/plain_defense.h"

#include <cmath>

#include "pbfl/common/error.h"

namespace pbfl::defense {

double Dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw InvalidArgument("vector length mismatch");
  double s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

PlainDefenseBackend::PlainDefenseBackend(const std::vector<std::optional<Vector>>& updates,
                                         const std::optional<Vector>& reference)
    : updates_(updates), reference_(reference) {}

const Vector& PlainDefenseBackend::Update(ClientId i) const {
  const auto& u = updates_.at(i);
  if (!u.has_value()) throw InvalidArgument("client " + std::to_string(i) + " has no update");
  return *u;
}

double PlainDefenseBackend::NormSquared(ClientId i) {
  const Vector& g = Update(i);
  return Dot(g, g);
}

std::vector<double> PlainDefenseBackend::ReferenceCosines(const std::vector<ClientId>& trusted) {
  if (trusted.empty()) throw InvalidArgument("empty trusted set");
  std::vector<double> out;
  if (reference_.has_value()) {
    for (ClientId i : trusted) out.push_back(Dot(Update(i), *reference_));
    return out;
  }
  Vector sum(Update(trusted[0]).size(), 0.0);
  for (ClientId i : trusted) {
    const Vector& g = Update(i);
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += g[k];
  }
  const double norm = std::sqrt(Dot(sum, sum));
  if (!(norm > 0)) throw InvalidArgument("trusted sum has no positive norm");
  for (ClientId i : trusted) out.push_back(Dot(Update(i), sum) / norm);
  return out;
}

double PlainDefenseBackend::Cosine(ClientId a, ClientId b) { return Dot(Update(a), Update(b)); }

void PlainDefenseBackend::Aggregate(const ClientMap& weights) {
  if (weights.empty()) throw InvalidArgument("aggregation over an empty selection");
  Vector acc;
  for (const auto& [i, wi] : weights) {
    const Vector& g = Update(i);
    if (acc.empty()) acc.assign(g.size(), 0.0);
    for (std::size_t k = 0; k < g.size(); ++k) acc[k] += wi * g[k];
  }
  aggregate_ = std::move(acc);
}

}  // namespace pbfl::defense
