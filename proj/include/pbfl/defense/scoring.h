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

#ifndef PBFL_DEFENSE_SCORING_H_
#define PBFL_DEFENSE_SCORING_H_

#include <cstddef>
#include <map>
#include <vector>

namespace pbfl::defense {

using ClientId = std::size_t;
using ClientMap = std::map<ClientId, double>;

struct DefenseConfig {
  double alpha_credit = 0.9;
  double theta = 0.05;
  double delta = -1;  // negative: 1/(2n)
  double gamma1 = 0.7;
  double gamma2 = 1.3;
  int t_warmup = 5;
  int t_total = -1;  // negative: max(rounds, t_warmup + 1)

  // Fills delta and t_total. Throws InvalidArgument naming the field.
  DefenseConfig Resolved(std::size_t clients, int rounds) const;
  void Validate() const;
};

struct TrustSet {
  std::vector<ClientId> trusted;
  std::vector<ClientId> rejected_norm;
};

// Stabilized softmax over the negated similarities to the baseline.
ClientMap Confidence(const ClientMap& cos_star);

class CreditLedger {
 public:
  CreditLedger() = default;
  // Every client starts at 1.
  explicit CreditLedger(std::size_t clients);

  double at(ClientId i) const;
  const ClientMap& scores() const { return cs_; }
  const std::vector<ClientMap>& history() const { return history_; }

  // cs_i <- alpha*cs_i + (1-alpha)*co_i for every i in co.
  void Update(const ClientMap& co, double alpha);
  // Multiplies cs_i by gamma1 for norm-rejected and gamma2 for gap-dropped
  // clients; the two sets must be disjoint.
  void ApplyPenalties(const std::vector<ClientId>& rejected_norm,
                      const std::vector<ClientId>& dropped_by_gap, double gamma1, double gamma2);
  // Records the current scores as one round's snapshot.
  void Snapshot() { history_.push_back(cs_); }

 private:
  ClientMap cs_;
  std::vector<ClientMap> history_;
};

// w_i = cs_i*co_i / sum_j cs_j*co_j over the clients of co.
ClientMap ComputeWeights(const CreditLedger& ledger, const ClientMap& co);

struct FilterOutcome {
  double lambda = 1;
  ClientMap w_tilde;
  std::vector<ClientId> selected;
  std::vector<ClientId> dropped_by_threshold;
  std::vector<ClientId> dropped_by_gap;
};

// Mixing coefficient for round t (1-based), clamped to [0, 1].
double MixingCoefficient(int t, int t_warmup, int t_total);

// Threshold stage on the mixed weights, then the sharp-drop stage on the raw
// weights of the survivors. `cfg` must be resolved.
FilterOutcome AdaptiveFilter(const ClientMap& w, int t, const DefenseConfig& cfg);

// Index of the smallest value; values within `tie_eps` of the minimum count
// as tied and the lowest index wins.
std::size_t ArgminWithTies(const std::vector<double>& values, double tie_eps);

}  // namespace pbfl::defense

#endif  // PBFL_DEFENSE_SCORING_H_
