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

#include "pbfl/sim/simulation.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include <spdlog/spdlog.h>

#include "pbfl/common/error.h"
#include "pbfl/common/parallel.h"
#include "pbfl/common/prng.h"
#include "pbfl/defense/plain_defense.h"
#include "pbfl/defense/secure_defense.h"
#include "pbfl/shieldfl/seccos_emulation.h"

namespace pbfl::sim {

namespace {

using Vector = std::vector<double>;
using Counters = std::map<std::string, protocols::ProtocolCounters>;

Counters Diff(const Counters& after, const Counters& before) {
  Counters out;
  for (const auto& [name, a] : after) {
    protocols::ProtocolCounters d = a;
    if (auto it = before.find(name); it != before.end()) {
      d.invocations -= it->second.invocations;
      d.messages -= it->second.messages;
      d.bytes -= it->second.bytes;
      d.round_trips -= it->second.round_trips;
    }
    if (d.invocations > 0 || d.messages > 0) out[name] = d;
  }
  return out;
}

double Norm(const Vector& v) { return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0)); }

}  // namespace

const char* PipelineModeName(PipelineMode mode) { return mode == PipelineMode::kEncrypted ? "encrypted" : "plain"; }

PipelineMode ParsePipelineMode(const std::string& name) {
  if (name == "encrypted") return PipelineMode::kEncrypted;
  if (name == "plain") return PipelineMode::kPlain;
  throw InvalidArgument("unknown pipeline mode '" + name + "'");
}

const char* AggregationName(Aggregation agg) { return agg == Aggregation::kDefense ? "defense" : "uniform"; }

Aggregation ParseAggregation(const std::string& name) {
  if (name == "defense") return Aggregation::kDefense;
  if (name == "uniform") return Aggregation::kUniform;
  throw InvalidArgument("unknown aggregation '" + name + "'");
}

Simulation::Simulation(const SimConfig& cfg, const Dataset& train, const Dataset& test)
    : cfg_(cfg),
      defense_cfg_(cfg.defense.Resolved(cfg.clients, cfg.rounds)),
      test_(test),
      model_(Model::Random(cfg.model, train.features, train.classes, cfg.hidden,
                           Prng::DeriveSeed(cfg.seed, "model-init"))),
      ledger_(cfg.clients) {
  if (cfg.clients < 2) throw InvalidArgument("clients: need at least two");
  if (cfg.rounds < 0) throw InvalidArgument("rounds: must be non-negative");
  shards_ = DirichletPartition(train.labels, cfg.clients, cfg.alpha_dirichlet, Prng::DeriveSeed(cfg.seed, "partition"));
  attackers_ = cfg.attack.kind == AttackKind::kNone
                   ? std::vector<std::size_t>{}
                   : ChooseAttackers(cfg.clients, cfg.attack.ratio, Prng::DeriveSeed(cfg.seed, "attackers"));
  for (std::size_t i = 0; i < cfg.clients; ++i) {
    client_data_.push_back(train.Subset(shards_[i]));
    if (cfg.attack.kind == AttackKind::kLabelFlip && is_attacker(i)) FlipLabels(client_data_.back());
  }
  if (cfg.mode == PipelineMode::kEncrypted) {
    deployment_ = SystemSetup(cfg.clients, cfg.preset, Prng::DeriveSeed(cfg.seed, "setup"));
  }
}

bool Simulation::is_attacker(std::size_t i) const {
  return std::binary_search(attackers_.begin(), attackers_.end(), i);
}

std::vector<std::optional<Vector>> Simulation::ComputeSubmissions(RoundRecord& rec) {
  const std::size_t n = cfg_.clients;
  std::vector<Vector> honest(n);
  ParallelFor(n, cfg_.workers, [&](std::size_t i) {
    const std::uint64_t seed = Prng::DeriveSeed(cfg_.seed, "local-train", static_cast<std::uint64_t>(round_) * n + i);
    honest[i] = LocalTrain(model_, client_data_[i], cfg_.batch_size, seed);
  });

  // What the adversary knows about benign behaviour this round.
  std::optional<Vector> mean, sd;
  if (cfg_.attack.kind == AttackKind::kAgrTailored && !attackers_.empty()) {
    std::vector<Vector> pool;
    for (std::size_t i = 0; i < n; ++i) {
      if (is_attacker(i) != cfg_.attack.omniscient && Norm(honest[i]) > 0) pool.push_back(fhe::Normalized(honest[i]));
    }
    if (!pool.empty()) {
      mean.emplace();
      sd.emplace();
      MeanAndStd(pool, *mean, *sd);
    }
  }

  std::vector<std::optional<Vector>> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vector g = honest[i];
    bool normalize = true;
    if (is_attacker(i)) {
      AttackContext ctx{g, mean, sd};
      try {
        g = Poison(ctx, cfg_.attack);
      } catch (const Error& e) {
        rec.defense.diagnostics.push_back("attacker " + std::to_string(i) + ": " + e.what());
      }
      normalize = cfg_.attack.normalize;
    }
    if (!(Norm(g) > 0) || !std::isfinite(Norm(g))) {
      rec.defense.diagnostics.push_back("client " + std::to_string(i) + " skipped: degenerate gradient");
      continue;
    }
    if (normalize) {
      g = fhe::Normalized(g);
      rec.max_input_norm_error = std::max(rec.max_input_norm_error, std::abs(Norm(g) - 1.0));
    }
    out[i] = std::move(g);
  }
  return out;
}

std::optional<Vector> Simulation::Aggregate(const std::vector<std::optional<Vector>>& submissions,
                                            RoundRecord& rec) {
  const std::size_t n = cfg_.clients;
  auto uniform_report = [&](defense::DefenseReport& r) {
    r.round = round_;
    for (std::size_t i = 0; i < n; ++i) {
      if (submissions[i].has_value()) {
        r.trusted.push_back(i);
      } else {
        r.absent.push_back(i);
      }
    }
    r.selected = r.trusted;
    for (std::size_t i : r.trusted) r.final_weights[i] = 1.0 / static_cast<double>(r.trusted.size());
    r.lambda = defense::MixingCoefficient(round_, defense_cfg_.t_warmup, defense_cfg_.t_total);
    r.cs = ledger_.scores();
  };
  std::vector<std::string> pending = std::move(rec.defense.diagnostics);

  if (cfg_.mode == PipelineMode::kPlain) {
    if (cfg_.aggregation == Aggregation::kUniform) {
      uniform_report(rec.defense);
      if (rec.defense.trusted.empty()) return std::nullopt;
      defense::PlainDefenseBackend backend(submissions, prev_global_unit_);
      backend.Aggregate(rec.defense.final_weights);
      rec.defense.aggregated = true;
      rec.defense.diagnostics = std::move(pending);
      return backend.aggregate();
    }
    defense::PlainDefenseBackend backend(submissions, prev_global_unit_);
    rec.defense = defense::RunDefenseRound(backend, ledger_, defense_cfg_, round_, protocols::kJudgeTol);
    rec.defense.diagnostics.insert(rec.defense.diagnostics.begin(), pending.begin(), pending.end());
    return backend.aggregate();
  }

  // Encrypted path: clients encrypt in parallel.
  Deployment& d = *deployment_;
  std::vector<std::optional<fhe::EncryptedGradient>> enc(n);
  ParallelFor(n, cfg_.workers, [&](std::size_t i) {
    if (!submissions[i].has_value()) return;
    const std::uint64_t seed = Prng::DeriveSeed(cfg_.seed, "encrypt", static_cast<std::uint64_t>(round_) * n + i);
    enc[i] = fhe::ChunkEncrypt(*d.ctx, d.pk, *submissions[i], seed);
  });
  std::optional<fhe::EncryptedGradient> reference;
  if (prev_global_unit_.has_value()) {
    // Client 0 re-encrypts the normalized previous global gradient it decrypted.
    reference = fhe::ChunkEncrypt(*d.ctx, d.pk, *prev_global_unit_,
                                  Prng::DeriveSeed(cfg_.seed, "reference", static_cast<std::uint64_t>(round_)));
  }

  const Counters before = transport_.per_protocol();
  std::optional<fhe::EncryptedGradient> aggregate;
  if (cfg_.aggregation == Aggregation::kUniform) {
    uniform_report(rec.defense);
    if (!rec.defense.trusted.empty()) {
      aggregate = defense::AggregateEncrypted(*d.ctx, enc, rec.defense.final_weights);
      rec.defense.aggregated = true;
    }
    rec.defense.diagnostics = std::move(pending);
  } else {
    std::optional<defense::DefenseReport> mirror;
    if (cfg_.mirror_check) {
      defense::CreditLedger shadow = ledger_;
      defense::PlainDefenseBackend plain(submissions, prev_global_unit_);
      mirror = defense::RunDefenseRound(plain, shadow, defense_cfg_, round_, protocols::kJudgeTol);
    }
    defense::SecureDefenseBackend backend(*d.s1, *d.s2, transport_, enc, reference);
    rec.defense = defense::RunDefenseRound(backend, ledger_, defense_cfg_, round_, protocols::kJudgeTol);
    if (mirror.has_value()) {
      rec.mirror_agrees = mirror->trusted == rec.defense.trusted && mirror->baseline == rec.defense.baseline &&
                          mirror->selected == rec.defense.selected;
      if (!*rec.mirror_agrees) rec.defense.diagnostics.push_back("plaintext mirror disagrees");
    }
    rec.defense.diagnostics.insert(rec.defense.diagnostics.begin(), pending.begin(), pending.end());
    aggregate = backend.aggregate();
  }
  rec.defense.traffic = Diff(transport_.per_protocol(), before);
  if (!aggregate.has_value()) return std::nullopt;

  // Model update: every client decrypts with S1's help; they agree to within
  // the decryption noise and the shared model follows client 0.
  std::vector<Vector> decrypted(n);
  ParallelFor(n, cfg_.workers, [&](std::size_t i) {
    decrypted[i] = ClientDecrypt(d, i, *aggregate,
                                 Prng::DeriveSeed(cfg_.seed, "decrypt", static_cast<std::uint64_t>(round_) * n + i));
  });
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t k = 0; k < decrypted[0].size(); ++k) {
      rec.decrypt_spread = std::max(rec.decrypt_spread, std::abs(decrypted[i][k] - decrypted[0][k]));
    }
  }
  return decrypted[0];
}

RoundRecord Simulation::RunRound() {
  if (round_ >= cfg_.rounds) throw FailedPrecondition("round budget exhausted");
  const auto start = std::chrono::steady_clock::now();
  ++round_;
  RoundRecord rec;
  rec.round = round_;
  rec.eta = cfg_.eta / (1.0 + cfg_.eta_decay * (round_ - 1));

  const auto submissions = ComputeSubmissions(rec);
  std::optional<Vector> global;
  try {
    global = Aggregate(submissions, rec);
  } catch (const Error& e) {
    rec.defense.diagnostics.push_back(std::string("round aborted: ") + e.what());
    spdlog::warn("round {} aborted: {}", round_, e.what());
  }
  rec.defense.round = round_;

  if (cfg_.emulate_shieldfl) {
    std::vector<Vector> rows;
    for (const auto& s : submissions) {
      if (s.has_value()) rows.push_back(*s);
    }
    if (rows.size() >= 2) {
      Vector ref;
      if (prev_global_unit_.has_value()) {
        ref = *prev_global_unit_;
      } else {
        Vector sd;
        MeanAndStd(rows, ref, sd);
      }
      shieldfl::EmulateSecCosBaseline(rows, ref, shieldfl_transport_,
                                      Prng::DeriveSeed(cfg_.seed, "shieldfl", static_cast<std::uint64_t>(round_)));
    }
  }

  rec.client_weights.assign(cfg_.clients, 0.0);
  if (global.has_value()) {
    for (const auto& [i, w] : rec.defense.final_weights) rec.client_weights[i] = w;
    rec.update_l2 = Norm(*global);
    rec.update_sum = std::accumulate(global->begin(), global->end(), 0.0);
    ModelUpdate(model_.mutable_weights(), *global, rec.eta);
    if (rec.update_l2 > 0) {
      prev_global_unit_ = fhe::Normalized(*global);
    }
  }
  rec.eval = model_.Evaluate(test_);
  rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  spdlog::info("round {}: accuracy {:.4f} loss {:.4f} selected {} ({:.0f} ms)", round_, rec.eval.accuracy,
               rec.eval.loss, rec.defense.selected.size(), rec.wall_ms);
  return rec;
}

}  // namespace pbfl::sim
