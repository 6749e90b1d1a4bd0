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

#ifndef PBFL_HARNESS_ATTACK_DEMO_H_
#define PBFL_HARNESS_ATTACK_DEMO_H_

#include <cstddef>
#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

namespace pbfl::harness {

struct AttackDemoOptions {
  std::size_t clients = 10;
  std::size_t length = 64;
  std::uint64_t seed = 42;
  double noise_range = 256.0;
  // Enhanced-protocol contrast: trials and the preset they run at.
  std::size_t contrast_trials = 20;
  std::string contrast_preset = "test-tiny";
};

struct ContrastOutcome {
  double max_abs_error = 0;
  double gradient_scale = 0;  // largest |entry| of the true gradients
};

// Runs the difference-and-anchor reconstruction against what S2 actually
// observes in norm checks of the enhanced protocol: each client's unit
// gradient once, and the reference gradient once per client. The anchor is
// client 0's true gradient, as in the original attack.
ContrastOutcome EnhancedContrastTrial(std::size_t clients, std::size_t length, const std::string& preset,
                                      std::uint64_t seed);

// Before/after table: reconstruction error on the original protocol's view
// (both anchors) and on the enhanced protocol's transcripts.
nlohmann::ordered_json RunAttackDemo(const AttackDemoOptions& options);

}  // namespace pbfl::harness

#endif  // PBFL_HARNESS_ATTACK_DEMO_H_
