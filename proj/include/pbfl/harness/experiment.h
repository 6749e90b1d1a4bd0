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

#ifndef PBFL_HARNESS_EXPERIMENT_H_
#define PBFL_HARNESS_EXPERIMENT_H_

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pbfl/harness/config.h"
#include "pbfl/sim/simulation.h"

namespace pbfl::harness {

struct ExperimentResult {
  int status = 0;  // 0 on success
  std::string error;
  std::vector<sim::RoundRecord> rounds;
  nlohmann::ordered_json summary;
};

// Runs the configured experiment and writes into cfg.output_dir:
//   config.json             normalized config
//   metrics.jsonl           one record per round
//   metrics.csv             one row per round
//   rounds.jsonl            full per-round defense reports
//   summary.json            final accuracy, weight comparison, traffic checks
//   final_model.bin         u64 length then little-endian doubles
//   transport.jsonl         enhanced-protocol message log
//   shieldfl_transport.jsonl
// On failure the status is nonzero and whatever was written stays.
ExperimentResult RunExperiment(const ExperimentConfig& cfg);

// Mean of the last round's aggregation weights over attackers and over
// benign clients, plus the comparison flag.
nlohmann::ordered_json FinalWeightComparison(const std::vector<double>& weights,
                                             const std::vector<std::size_t>& attackers);

nlohmann::ordered_json RoundToJson(const sim::RoundRecord& rec);

}  // namespace pbfl::harness

#endif  // PBFL_HARNESS_EXPERIMENT_H_
