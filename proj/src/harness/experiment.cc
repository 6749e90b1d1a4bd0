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

#include "pbfl/harness/experiment.h"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <memory>

#include <spdlog/spdlog.h>

#include "pbfl/common/error.h"
#include "pbfl/common/prng.h"
#include "pbfl/harness/metrics.h"

namespace pbfl::harness {

nlohmann::ordered_json FinalWeightComparison(const std::vector<double>& weights,
                                             const std::vector<std::size_t>& attackers) {
  double attack_sum = 0, benign_sum = 0;
  std::size_t attack_count = 0, benign_count = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (std::binary_search(attackers.begin(), attackers.end(), i)) {
      attack_sum += weights[i];
      ++attack_count;
    } else {
      benign_sum += weights[i];
      ++benign_count;
    }
  }
  nlohmann::ordered_json j;
  j["attackers"] = attackers;
  if (attack_count == 0 || benign_count == 0) {
    j["attackers_mean_final_weight"] = nullptr;
    j["benign_mean_final_weight"] =
        benign_count ? nlohmann::ordered_json(benign_sum / static_cast<double>(benign_count)) : nlohmann::ordered_json();
    j["attackers_below_benign"] = nullptr;
    return j;
  }
  const double a = attack_sum / static_cast<double>(attack_count);
  const double b = benign_sum / static_cast<double>(benign_count);
  j["attackers_mean_final_weight"] = a;
  j["benign_mean_final_weight"] = b;
  j["attackers_below_benign"] = a < b;
  return j;
}

nlohmann::ordered_json RoundToJson(const sim::RoundRecord& rec) {
  nlohmann::ordered_json j;
  j["round"] = rec.round;
  j["eta"] = rec.eta;
  j["accuracy"] = rec.eval.accuracy;
  j["loss"] = rec.eval.loss;
  j["client_weights"] = rec.client_weights;
  j["update_l2"] = rec.update_l2;
  j["update_sum"] = rec.update_sum;
  j["max_input_norm_error"] = rec.max_input_norm_error;
  j["decrypt_spread"] = rec.decrypt_spread;
  if (rec.mirror_agrees.has_value()) j["mirror_agrees"] = *rec.mirror_agrees;
  j["defense"] = rec.defense.ToJson();
  j[kTimingField] = rec.wall_ms;
  return j;
}

ExperimentResult RunExperiment(const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  using Clock = std::chrono::steady_clock;
  const auto started = Clock::now();
  ExperimentResult result;
  const std::string dir = cfg.output_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());

  WriteFile(dir + "/config.json", ConfigToJson(cfg).dump(2) + "\n");
  MetricsWriter metrics(dir, cfg.sim.clients);
  std::ofstream rounds_out(dir + "/rounds.jsonl", std::ios::binary | std::ios::trunc);
  if (!rounds_out) throw IoError("cannot open " + dir + "/rounds.jsonl");

  std::unique_ptr<sim::Simulation> simulation;
  try {
    const sim::Dataset data = LoadDataset(cfg.dataset, Prng::DeriveSeed(cfg.sim.seed, "synthetic-data"));
    auto [train, test] = sim::TrainTestSplit(data, cfg.sim.test_fraction,
                                             Prng::DeriveSeed(cfg.sim.seed, "train-test-split"));
    if (train.size() < cfg.sim.clients) throw InvalidArgument("dataset: fewer training rows than clients");
    simulation = std::make_unique<sim::Simulation>(cfg.sim, train, test);
    spdlog::info("experiment: {} clients, {} rounds, preset {}, attackers {}", cfg.sim.clients, cfg.sim.rounds,
                 cfg.sim.preset, simulation->attackers().size());

    std::uint64_t sf_bytes = 0, sf_messages = 0;
    for (int t = 0; t < cfg.sim.rounds; ++t) {
      sim::RoundRecord rec = simulation->RunRound();
      const auto& sf = simulation->shieldfl_transport();
      const std::uint64_t bytes_now = sf.bytes(), messages_now = sf.messages();
      metrics.Append(MakeMetricsRecord(rec, bytes_now - sf_bytes, messages_now - sf_messages));
      sf_bytes = bytes_now;
      sf_messages = messages_now;
      rounds_out << RoundToJson(rec).dump() << '\n';
      rounds_out.flush();
      result.rounds.push_back(std::move(rec));
    }
    sim::SaveWeights(dir + "/final_model.bin", simulation->model().weights());
  } catch (const std::exception& e) {
    result.status = 1;
    result.error = e.what();
    spdlog::error("experiment failed: {}", e.what());
  }
  metrics.Close();
  rounds_out.close();

  nlohmann::ordered_json& s = result.summary;
  s["status"] = result.status == 0 ? "ok" : "failed";
  if (result.status != 0) s["error"] = result.error;
  s["rounds_completed"] = result.rounds.size();
  if (!result.rounds.empty()) {
    s["final_accuracy"] = result.rounds.back().eval.accuracy;
    s["final_loss"] = result.rounds.back().eval.loss;
  } else {
    s["final_accuracy"] = nullptr;
    s["final_loss"] = nullptr;
  }
  if (simulation) {
    const std::vector<double> last =
        result.rounds.empty() ? std::vector<double>(cfg.sim.clients, 0.0) : result.rounds.back().client_weights;
    s["final_weights"] = FinalWeightComparison(last, simulation->attackers());
    s["traffic"] = {{"enhanced", TrafficSummary(simulation->transport(), 2)},
                    {"shieldfl_emulation", TrafficSummary(simulation->shieldfl_transport(), 4)}};
    try {
      simulation->transport().WriteJsonl(dir + "/transport.jsonl");
      simulation->shieldfl_transport().WriteJsonl(dir + "/shieldfl_transport.jsonl");
    } catch (const std::exception& e) {
      spdlog::error("{}", e.what());
      result.status = 1;
    }
  }
  s["config"] = ConfigToJson(cfg);
  s[kTimingField] = std::chrono::duration<double, std::milli>(Clock::now() - started).count();
  WriteFile(dir + "/summary.json", s.dump(2) + "\n");
  return result;
}

}  // namespace pbfl::harness
