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

#ifndef PBFL_SIM_ATTACKS_H_
#define PBFL_SIM_ATTACKS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pbfl/sim/dataset.h"

namespace pbfl::sim {

enum class AttackKind { kNone, kLabelFlip, kSignFlip, kAgrTailored };

const char* AttackKindName(AttackKind kind);
AttackKind ParseAttackKind(const std::string& name);

struct AttackSpec {
  AttackKind kind = AttackKind::kNone;
  double ratio = 0;
  double magnitude = 1;
  // Adversary sees the benign gradients (agr-tailored); otherwise it
  // estimates the benign statistics from its own honest gradients.
  bool omniscient = true;
  // Attackers normalize their submissions so they pass the norm check.
  bool normalize = true;
};

// floor(ratio * n) distinct clients, chosen by the seed, sorted.
std::vector<std::size_t> ChooseAttackers(std::size_t clients, double ratio, std::uint64_t seed);

// Cyclic relabeling y -> (y + 1) mod classes.
void FlipLabels(Dataset& shard);

// Benign statistics available to the adversary.
struct AttackContext {
  std::vector<double> own;
  std::optional<std::vector<double>> benign_mean;
  std::optional<std::vector<double>> benign_std;
};

// Coordinate-wise mean and standard deviation of a set of vectors.
void MeanAndStd(const std::vector<std::vector<double>>& vectors, std::vector<double>& mean,
                std::vector<double>& stddev);

// sign-flip: -magnitude * own. agr-tailored: normalize(mean + magnitude *
// dev) with dev the negated unit direction of the benign std. label-flip
// and none: own unchanged (label flipping happens on the shard).
std::vector<double> Poison(const AttackContext& context, const AttackSpec& spec);

}  // namespace pbfl::sim

#endif  // PBFL_SIM_ATTACKS_H_
