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

// Command-line entry point: run, attack-demo, bench-crypto, verify.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "pbfl/common/error.h"
#include "pbfl/common/log.h"
#include "pbfl/harness/attack_demo.h"
#include "pbfl/harness/bench.h"
#include "pbfl/harness/config.h"
#include "pbfl/harness/experiment.h"
#include "pbfl/harness/metrics.h"
#include "pbfl/harness/verify.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct RunFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> attack;
  std::optional<double> attack_ratio;
  std::optional<std::size_t> clients;
  std::optional<int> rounds;
  std::optional<double> alpha_dirichlet;
  std::optional<std::string> preset;
};

// Flags patch the raw config object before the strict parse, so derived
// defaults (delta, t_total) follow the overridden values.
pbfl::harness::ExperimentConfig BuildConfig(const RunFlags& f) {
  nlohmann::json j = nlohmann::json::object();
  std::string base_dir;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw pbfl::IoError("cannot open config " + f.config);
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw pbfl::InvalidArgument(f.config + ": " + e.what());
    }
    if (!j.is_object()) throw pbfl::InvalidArgument(f.config + ": expected a JSON object");
    base_dir = std::filesystem::path(f.config).parent_path().string();
  }
  if (f.seed) j["seed"] = *f.seed;
  if (f.out) j["output_dir"] = *f.out;
  if (f.clients) j["clients"] = *f.clients;
  if (f.rounds) j["rounds"] = *f.rounds;
  if (f.alpha_dirichlet) j["alpha_dirichlet"] = *f.alpha_dirichlet;
  if (f.preset) j["preset"] = *f.preset;
  if (f.attack || f.attack_ratio) {
    if (!j.contains("attack")) j["attack"] = nlohmann::json::object();
    if (f.attack) j["attack"]["kind"] = *f.attack;
    if (f.attack_ratio) j["attack"]["ratio"] = *f.attack_ratio;
  }
  return pbfl::harness::ParseConfig(j, base_dir);
}

void WriteJson(const std::optional<std::string>& dir, const std::string& name, const nlohmann::ordered_json& j) {
  if (!dir) return;
  std::filesystem::create_directories(*dir);
  pbfl::harness::WriteFile(*dir + "/" + name, j.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  pbfl::InitLoggingFromEnv();
  CLI::App app{"Privacy-preserving Byzantine-robust federated learning toolkit"};
  app.require_subcommand(1);

  RunFlags run;
  auto* run_cmd = app.add_subcommand("run", "Run a federated training experiment");
  run_cmd->add_option("--config", run.config, "Experiment config (JSON)")->check(CLI::ExistingFile);
  run_cmd->add_option("--seed", run.seed, "Master seed");
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_option("--attack", run.attack, "none|label-flip|sign-flip|agr-tailored");
  run_cmd->add_option("--attack-ratio", run.attack_ratio, "Fraction of malicious clients");
  run_cmd->add_option("--clients", run.clients, "Number of clients");
  run_cmd->add_option("--rounds", run.rounds, "Training rounds");
  run_cmd->add_option("--alpha-dirichlet", run.alpha_dirichlet, "Dirichlet concentration of the partition");
  run_cmd->add_option("--preset", run.preset, "Crypto preset")->check(CLI::IsMember({"test-tiny", "desk-128bit"}));

  pbfl::harness::AttackDemoOptions demo;
  std::optional<std::string> demo_out;
  auto* demo_cmd = app.add_subcommand("attack-demo", "Reconstruct gradients from the original cosine protocol");
  demo_cmd->add_option("--seed", demo.seed, "Seed");
  demo_cmd->add_option("--clients", demo.clients, "Clients")->check(CLI::Range(2, 1000));
  demo_cmd->add_option("--length", demo.length, "Gradient length")->check(CLI::Range(1, 1 << 16));
  demo_cmd->add_option("--trials", demo.contrast_trials, "Enhanced-protocol contrast trials");
  demo_cmd->add_option("--preset", demo.contrast_preset, "Preset for the contrast")
      ->check(CLI::IsMember({"test-tiny", "desk-128bit"}));
  demo_cmd->add_option("--out", demo_out, "Directory for attack_demo.json");

  std::string bench_preset = "desk-128bit";
  std::size_t bench_iterations = 5;
  std::uint64_t bench_seed = 42;
  std::optional<std::string> bench_out;
  auto* bench_cmd = app.add_subcommand("bench-crypto", "Per-operation crypto microbenchmarks");
  bench_cmd->add_option("--preset", bench_preset, "Crypto preset")->check(CLI::IsMember({"test-tiny", "desk-128bit"}));
  bench_cmd->add_option("--iterations", bench_iterations, "Iterations per operation")->check(CLI::Range(1, 100000));
  bench_cmd->add_option("--seed", bench_seed, "Seed");
  bench_cmd->add_option("--out", bench_out, "Directory for bench.json");

  std::uint64_t verify_seed = 42;
  std::optional<std::string> verify_out;
  auto* verify_cmd = app.add_subcommand("verify", "Run the oracle suites");
  verify_cmd->add_option("--seed", verify_seed, "Seed");
  verify_cmd->add_option("--out", verify_out, "Directory for verify.json");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const auto cfg = BuildConfig(run);
      const auto result = pbfl::harness::RunExperiment(cfg);
      const auto& s = result.summary;
      std::cout << "status: " << s["status"].get<std::string>() << "\n"
                << "rounds: " << s["rounds_completed"].get<std::size_t>() << "\n";
      if (!s["final_accuracy"].is_null()) std::cout << "final accuracy: " << s["final_accuracy"].get<double>() << "\n";
      if (s.contains("final_weights")) std::cout << "final weights: " << s["final_weights"].dump() << "\n";
      std::cout << "artifacts: " << cfg.output_dir << "\n";
      if (result.status != 0) std::cerr << "error: " << result.error << "\n";
      return result.status == 0 ? 0 : kExitFailure;
    }
    if (*demo_cmd) {
      const auto report = pbfl::harness::RunAttackDemo(demo);
      std::cout << report.dump(2) << "\n";
      WriteJson(demo_out, "attack_demo.json", report);
      return report["shieldfl_max_abs_error"].get<double>() < 1e-12 ? 0 : kExitFailure;
    }
    if (*bench_cmd) {
      const auto report = pbfl::harness::RunCryptoBench(bench_preset, bench_iterations, bench_seed);
      std::cout << report.dump(2) << "\n";
      WriteJson(bench_out, "bench.json", report);
      return 0;
    }
    if (*verify_cmd) {
      const auto checks = pbfl::harness::RunVerifySuites(verify_seed);
      bool all = true;
      for (const auto& c : checks) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << "  " << c.detail << "\n";
        all &= c.passed;
      }
      WriteJson(verify_out, "verify.json", pbfl::harness::VerifyReportJson(checks));
      return all ? 0 : kExitFailure;
    }
  } catch (const pbfl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == pbfl::ErrorCode::kInvalidArgument ? kExitUsage : kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return 0;
}
