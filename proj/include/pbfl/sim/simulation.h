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

#ifndef PBFL_SIM_SIMULATION_H_
#define PBFL_SIM_SIMULATION_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pbfl/defense/pipeline.h"
#include "pbfl/defense/scoring.h"
#include "pbfl/sim/attacks.h"
#include "pbfl/sim/dataset.h"
#include "pbfl/sim/model.h"
#include "pbfl/sim/partition.h"
#include "pbfl/sim/setup.h"

namespace pbfl::sim {

enum class PipelineMode { kEncrypted, kPlain };
enum class Aggregation { kDefense, kUniform };

const char* PipelineModeName(PipelineMode mode);
PipelineMode ParsePipelineMode(const std::string& name);
const char* AggregationName(Aggregation agg);
Aggregation ParseAggregation(const std::string& name);

struct SimConfig {
  std::string preset = "desk-128bit";
  std::size_t clients = 10;
  int rounds = 30;
  double eta = 0.1;
  double eta_decay = 0;  // eta_t = eta / (1 + eta_decay * (t - 1))
  std::size_t batch_size = 64;
  ModelKind model = ModelKind::kLogistic;
  std::size_t hidden = 32;
  AttackSpec attack;
  defense::DefenseConfig defense;
  double alpha_dirichlet = 0.5;
  double test_fraction = 0.2;
  std::uint64_t seed = 42;
  PipelineMode mode = PipelineMode::kEncrypted;
  Aggregation aggregation = Aggregation::kDefense;
  bool emulate_shieldfl = true;
  // Encrypted defense rounds also run the plaintext mirror on the same inputs
  // and ledger snapshot, recording whether the decisions agree.
  bool mirror_check = false;
  std::size_t workers = 0;  // 0: hardware concurrency
};

struct RoundRecord {
  int round = 0;
  double eta = 0;
  Evaluation eval;
  defense::DefenseReport defense;
  std::vector<double> client_weights;  // aggregation weight per client, 0 if unused
  double update_l2 = 0;                // ||g_sigma||
  double update_sum = 0;               // sum of g_sigma entries
  double max_input_norm_error = 0;     // max | ||g_i|| - 1 | over normalized submissions
  double decrypt_spread = 0;           // max disagreement between clients' decryptions
  std::optional<bool> mirror_agrees;   // set when mirror_check ran
  double wall_ms = 0;
};

class Simulation {
 public:
  // `train` is partitioned across clients; `test` is the held-out split.
  Simulation(const SimConfig& cfg, const Dataset& train, const Dataset& test);

  RoundRecord RunRound();

  int round() const { return round_; }
  const SimConfig& config() const { return cfg_; }
  const Model& model() const { return model_; }
  const std::vector<std::size_t>& attackers() const { return attackers_; }
  bool is_attacker(std::size_t i) const;
  const Shards& shards() const { return shards_; }
  const protocols::Transport& transport() const { return transport_; }
  const protocols::Transport& shieldfl_transport() const { return shieldfl_transport_; }
  const defense::CreditLedger& ledger() const { return ledger_; }
  const std::optional<Deployment>& deployment() const { return deployment_; }
  Evaluation Evaluate() const { return model_.Evaluate(test_); }

 private:
  std::vector<std::optional<std::vector<double>>> ComputeSubmissions(RoundRecord& rec);
  std::optional<std::vector<double>> Aggregate(const std::vector<std::optional<std::vector<double>>>& submissions,
                                               RoundRecord& rec);

  SimConfig cfg_;
  defense::DefenseConfig defense_cfg_;
  Dataset test_;
  std::vector<Dataset> client_data_;
  Shards shards_;
  std::vector<std::size_t> attackers_;
  Model model_;
  std::optional<Deployment> deployment_;
  protocols::Transport transport_;
  protocols::Transport shieldfl_transport_;
  defense::CreditLedger ledger_;
  std::optional<std::vector<double>> prev_global_unit_;  // normalized g_sigma of the last round
  int round_ = 0;
};

}  // namespace pbfl::sim

#endif  // PBFL_SIM_SIMULATION_H_
