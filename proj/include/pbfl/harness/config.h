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

#ifndef PBFL_HARNESS_CONFIG_H_
#define PBFL_HARNESS_CONFIG_H_

#include <cstddef>
#include <string>

#include <nlohmann/json.hpp>

#include "pbfl/sim/dataset.h"
#include "pbfl/sim/simulation.h"

namespace pbfl::harness {

enum class DatasetKind { kCsv, kSynthetic };

struct DatasetSpec {
  DatasetKind kind = DatasetKind::kCsv;
  // Empty selects the bundled MNIST subset. Relative paths resolve against
  // the directory of the config file they came from.
  std::string path;
  double feature_scale = 1.0 / 255.0;
  // Synthetic two-blob data.
  std::size_t examples = 1000;
  std::size_t features = 32;
  double separation = 3.0;
};

struct ExperimentConfig {
  sim::SimConfig sim;  // defense.delta and defense.t_total are resolved
  DatasetSpec dataset;
  std::string output_dir = "runs/latest";
};

// Strict parse: unknown keys and wrong types are rejected, and every error
// names the offending field path (e.g. "defense.theta"). `base_dir` anchors
// relative dataset paths.
ExperimentConfig ParseConfig(const nlohmann::json& j, const std::string& base_dir = "");
ExperimentConfig LoadConfig(const std::string& path);

// Every field, defaults included. ParseConfig(ConfigToJson(c)) == c.
nlohmann::ordered_json ConfigToJson(const ExperimentConfig& cfg);

// Range checks across all nested settings; throws InvalidArgument with the
// field path.
void ValidateConfig(const ExperimentConfig& cfg);

std::string DefaultDatasetPath();

sim::Dataset LoadDataset(const DatasetSpec& spec, std::uint64_t seed);

}  // namespace pbfl::harness

#endif  // PBFL_HARNESS_CONFIG_H_
