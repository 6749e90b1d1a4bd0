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

#include "pbfl/harness/attack_demo.h"

#include <algorithm>
#include <vector>

#include "pbfl/common/error.h"
#include "pbfl/common/prng.h"
#include "pbfl/fhe/encrypted_gradient.h"
#include "pbfl/protocols/secure_ops.h"
#include "pbfl/shieldfl/leakage.h"
#include "pbfl/sim/setup.h"

namespace pbfl::harness {

namespace {

using shieldfl::Matrix;

std::vector<double> RandomUnit(Prng& rng, std::size_t len) {
  std::vector<double> v(len);
  for (double& x : v) x = rng.UniformReal(-1.0, 1.0);
  return fhe::Normalized(v);
}

// Slot values of every chunk S2 decrypted in one norm check, concatenated.
std::vector<double> JudgeObservation(sim::Deployment& d, protocols::Transport& t,
                                     const fhe::EncryptedGradient& g) {
  std::vector<double> seen;
  d.s2->set_observer([&seen](const protocols::S2Observation& obs) {
    seen.clear();
    for (const auto& chunk : obs.slots) seen.insert(seen.end(), chunk.begin(), chunk.end());
  });
  protocols::EsecJudge(*d.s1, *d.s2, t, g);
  d.s2->set_observer(nullptr);
  return seen;
}

nlohmann::ordered_json Row(const std::string& protocol, const std::string& anchor, double error, double scale) {
  return {{"protocol", protocol},
          {"anchor", anchor},
          {"max_abs_error", error},
          {"gradient_scale", scale},
          {"error_over_scale", scale > 0 ? error / scale : 0.0},
          {"recovered", error < 1e-12}};
}

}  // namespace

ContrastOutcome EnhancedContrastTrial(std::size_t clients, std::size_t length, const std::string& preset,
                                      std::uint64_t seed) {
  if (clients < 2 || length == 0) throw InvalidArgument("contrast needs >= 2 clients and a non-empty gradient");
  sim::Deployment d = sim::SystemSetup(clients, preset, Prng::DeriveSeed(seed, "contrast-setup"));
  Prng rng(Prng::DeriveSeed(seed, "contrast-gradients"));
  Matrix truth;
  for (std::size_t i = 0; i < clients; ++i) truth.push_back(RandomUnit(rng, length));
  const std::vector<double> reference = RandomUnit(rng, length);

  protocols::Transport t;
  const fhe::EncryptedGradient ref_ct =
      fhe::ChunkEncrypt(*d.ctx, d.pk, reference, Prng::DeriveSeed(seed, "contrast-encrypt", clients));
  Matrix client_slots, reference_slots;
  for (std::size_t i = 0; i < clients; ++i) {
    const auto ct = fhe::ChunkEncrypt(*d.ctx, d.pk, truth[i], Prng::DeriveSeed(seed, "contrast-encrypt", i));
    client_slots.push_back(JudgeObservation(d, t, ct));
  }
  for (std::size_t i = 0; i < clients; ++i) reference_slots.push_back(JudgeObservation(d, t, ref_ct));

  const auto view = shieldfl::ViewFromObservations(client_slots, reference_slots, length);
  auto result = shieldfl::ReconstructGradients(shieldfl::DeriveDifferences(view),
                                               shieldfl::AnchorKind::kKnownClient, 0, truth[0]);
  ContrastOutcome out;
  out.max_abs_error = shieldfl::ScoreAgainst(result, truth);
  out.gradient_scale = shieldfl::MaxAbs(truth);
  return out;
}

nlohmann::ordered_json RunAttackDemo(const AttackDemoOptions& options) {
  Prng rng(Prng::DeriveSeed(options.seed, "attack-demo-gradients"));
  Matrix gradients(options.clients, std::vector<double>(options.length));
  for (auto& row : gradients) {
    for (double& x : row) x = rng.UniformReal(-1.0, 1.0);
  }
  std::vector<double> prev_global(options.length);
  for (double& x : prev_global) x = rng.UniformReal(-1.0, 1.0);
  const double scale = shieldfl::MaxAbs(gradients);

  shieldfl::ViewOptions view_options;
  view_options.noise_range = options.noise_range;
  const auto view = shieldfl::SimulateShieldFlView(gradients, prev_global,
                                                   Prng::DeriveSeed(options.seed, "attack-demo-noise"), view_options);
  const auto diffs = shieldfl::DeriveDifferences(view);

  auto by_client = shieldfl::ReconstructGradients(diffs, shieldfl::AnchorKind::kKnownClient, 0, gradients[0]);
  const double client_error = shieldfl::ScoreAgainst(by_client, gradients);
  auto by_global = shieldfl::ReconstructGradients(diffs, shieldfl::AnchorKind::kKnownGlobal, 0, prev_global);
  const double global_error = shieldfl::ScoreAgainst(by_global, gradients);

  double worst_ratio = -1;
  std::size_t failed = 0;
  nlohmann::ordered_json trials = nlohmann::ordered_json::array();
  ContrastOutcome worst;
  for (std::size_t k = 0; k < options.contrast_trials; ++k) {
    const ContrastOutcome c = EnhancedContrastTrial(options.clients, options.length, options.contrast_preset,
                                                    Prng::DeriveSeed(options.seed, "attack-demo-contrast", k));
    const double ratio = c.max_abs_error / c.gradient_scale;
    failed += ratio > 1e3;
    if (worst_ratio < 0 || ratio < worst_ratio) {
      worst_ratio = ratio;
      worst = c;
    }
  }

  nlohmann::ordered_json j;
  j["clients"] = options.clients;
  j["length"] = options.length;
  j["seed"] = options.seed;
  j["shieldfl_report"] = shieldfl::AttackReportJson(by_client);
  nlohmann::ordered_json table = nlohmann::ordered_json::array();
  table.push_back(Row("shieldfl_seccos", shieldfl::AnchorKindName(shieldfl::AnchorKind::kKnownClient),
                      client_error, scale));
  table.push_back(Row("shieldfl_seccos", shieldfl::AnchorKindName(shieldfl::AnchorKind::kKnownGlobal),
                      global_error, scale));
  if (options.contrast_trials > 0) {
    nlohmann::ordered_json row = Row(std::string(protocols::kJudgeProtocol) + " (" + options.contrast_preset + ")",
                                     shieldfl::AnchorKindName(shieldfl::AnchorKind::kKnownClient),
                                     worst.max_abs_error, worst.gradient_scale);
    row["trials"] = options.contrast_trials;
    row["trials_error_over_1e3_scale"] = failed;
    table.push_back(row);
  }
  j["privacy_table"] = table;
  j["shieldfl_max_abs_error"] = std::max(client_error, global_error);
  return j;
}

}  // namespace pbfl::harness
