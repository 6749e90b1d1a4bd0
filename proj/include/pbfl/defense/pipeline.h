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

#ifndef PBFL_DEFENSE_PIPELINE_H_
#define PBFL_DEFENSE_PIPELINE_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pbfl/defense/scoring.h"
#include "pbfl/protocols/transport.h"

namespace pbfl::defense {

// Values within this distance of the lowest reference similarity are tied;
// matches the precision of the secure cosine.
inline constexpr double kBaselineTieEps = 1e-3;

inline constexpr const char* kReferenceTrustedSum = "trusted-sum";
inline constexpr const char* kReferencePreviousGlobal = "previous-global";

struct DefenseReport {
  int round = 0;
  std::vector<ClientId> absent;  // submitted nothing this round
  std::vector<ClientId> trusted;
  std::vector<ClientId> rejected_norm;
  std::string reference;
  std::optional<ClientId> baseline;
  // Aligned with `trusted`.
  std::vector<double> norm_squared;
  std::vector<double> cos_sigma;
  std::vector<double> cos_star;
  std::vector<double> co;
  std::vector<double> w;
  ClientMap cs;  // every client, after update and penalties
  double lambda = 1;
  std::vector<ClientId> selected;
  std::vector<ClientId> dropped_by_threshold;
  std::vector<ClientId> dropped_by_gap;
  ClientMap final_weights;  // what aggregation used
  bool fallback_uniform = false;
  bool aggregated = false;
  std::map<std::string, protocols::ProtocolCounters> traffic;
  std::vector<std::string> diagnostics;

  nlohmann::ordered_json ToJson() const;
};

// What differs between the encrypted pipeline and its plaintext mirror.
class DefenseBackend {
 public:
  virtual ~DefenseBackend() = default;
  virtual std::size_t clients() const = 0;
  virtual bool submitted(ClientId i) const = 0;
  // Squared norm as recovered by the norm check. May throw; the client is
  // then rejected.
  virtual double NormSquared(ClientId i) = 0;
  virtual bool has_reference() const = 0;
  // Similarity of every trusted update to the reference: the previous global
  // gradient when present, otherwise the sum of the trusted updates.
  virtual std::vector<double> ReferenceCosines(const std::vector<ClientId>& trusted) = 0;
  virtual double Cosine(ClientId a, ClientId b) = 0;
  virtual void Aggregate(const ClientMap& weights) = 0;
};

// One round of the defense. `cfg` must be resolved; `round` is 1-based.
DefenseReport RunDefenseRound(DefenseBackend& backend, CreditLedger& ledger, const DefenseConfig& cfg,
                              int round, double judge_tol);

}  // namespace pbfl::defense

#endif  // PBFL_DEFENSE_PIPELINE_H_
