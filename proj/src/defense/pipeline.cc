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

#include "pbfl/defense/pipeline.h"

#include <cmath>

#include "pbfl/common/error.h"

namespace pbfl::defense {

namespace {

nlohmann::ordered_json TrafficJson(const std::map<std::string, protocols::ProtocolCounters>& traffic) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [name, c] : traffic) {
    j[name] = {{"invocations", c.invocations},
               {"messages", c.messages},
               {"bytes", c.bytes},
               {"round_trips", c.round_trips}};
  }
  return j;
}

}  // namespace

nlohmann::ordered_json DefenseReport::ToJson() const {
  nlohmann::ordered_json j;
  j["round"] = round;
  j["trusted"] = trusted;
  j["rejected_norm"] = rejected_norm;
  j["absent"] = absent;
  j["reference"] = reference;
  j["baseline"] = baseline.has_value() ? nlohmann::ordered_json(*baseline) : nlohmann::ordered_json();
  j["cos_sigma"] = cos_sigma;
  j["cos_star"] = cos_star;
  j["co"] = co;
  std::vector<double> cs_list;
  for (const auto& [i, v] : cs) cs_list.push_back(v);
  j["cs"] = cs_list;
  j["w"] = w;
  j["lambda"] = lambda;
  j["selected"] = selected;
  j["dropped_by_threshold"] = dropped_by_threshold;
  j["dropped_by_gap"] = dropped_by_gap;
  nlohmann::ordered_json fw = nlohmann::ordered_json::object();
  for (const auto& [i, v] : final_weights) fw[std::to_string(i)] = v;
  j["final_weights"] = fw;
  j["fallback_uniform"] = fallback_uniform;
  j["aggregated"] = aggregated;
  j["traffic"] = TrafficJson(traffic);
  j["diagnostics"] = diagnostics;
  return j;
}

DefenseReport RunDefenseRound(DefenseBackend& backend, CreditLedger& ledger, const DefenseConfig& cfg,
                              int round, double judge_tol) {
  DefenseReport r;
  r.round = round;

  // Normalization judgment.
  for (ClientId i = 0; i < backend.clients(); ++i) {
    if (!backend.submitted(i)) {
      r.absent.push_back(i);
      continue;
    }
    double sum = NAN;
    try {
      sum = backend.NormSquared(i);
    } catch (const Error& e) {
      r.diagnostics.push_back("client " + std::to_string(i) + " norm check failed: " + e.what());
    }
    if (std::isfinite(sum) && std::abs(sum - 1.0) <= judge_tol) {
      r.trusted.push_back(i);
      r.norm_squared.push_back(sum);
    } else {
      r.rejected_norm.push_back(i);
    }
  }

  ClientMap w;
  if (r.trusted.empty()) {
    r.diagnostics.push_back("no trusted clients; nothing aggregated");
  } else if (r.trusted.size() == 1) {
    r.diagnostics.push_back("single trusted client; baseline stage skipped");
    r.co = {1.0};
    ledger.Update({{r.trusted[0], 1.0}}, cfg.alpha_credit);
    w = ComputeWeights(ledger, {{r.trusted[0], 1.0}});
  } else {
    // Poisonous baseline: least similar to the reference.
    r.reference = backend.has_reference() ? kReferencePreviousGlobal : kReferenceTrustedSum;
    r.cos_sigma = backend.ReferenceCosines(r.trusted);
    const ClientId baseline = r.trusted[ArgminWithTies(r.cos_sigma, kBaselineTieEps)];
    r.baseline = baseline;

    ClientMap cos_star;
    for (ClientId i : r.trusted) {
      const double c = -backend.Cosine(i, baseline);
      cos_star[i] = c;
      r.cos_star.push_back(c);
    }
    const ClientMap co = Confidence(cos_star);
    for (ClientId i : r.trusted) r.co.push_back(co.at(i));
    ledger.Update(co, cfg.alpha_credit);
    w = ComputeWeights(ledger, co);
  }
  for (ClientId i : r.trusted) r.w.push_back(w.at(i));

  FilterOutcome outcome;
  if (!w.empty()) {
    outcome = AdaptiveFilter(w, round, cfg);
  } else {
    outcome.lambda = MixingCoefficient(round, cfg.t_warmup, cfg.t_total);
  }
  r.lambda = outcome.lambda;
  r.selected = outcome.selected;
  r.dropped_by_threshold = outcome.dropped_by_threshold;
  r.dropped_by_gap = outcome.dropped_by_gap;
  ledger.ApplyPenalties(r.rejected_norm, r.dropped_by_gap, cfg.gamma1, cfg.gamma2);
  ledger.Snapshot();
  r.cs = ledger.scores();

  if (!r.trusted.empty()) {
    if (r.selected.empty()) {
      r.fallback_uniform = true;
      r.diagnostics.push_back("filtering emptied the selection; uniform over trusted");
      for (ClientId i : r.trusted) r.final_weights[i] = 1.0 / static_cast<double>(r.trusted.size());
    } else {
      double total = 0;
      for (ClientId i : r.selected) total += w.at(i);
      for (ClientId i : r.selected) r.final_weights[i] = w.at(i) / total;
    }
    backend.Aggregate(r.final_weights);
    r.aggregated = true;
  }
  return r;
}

}  // namespace pbfl::defense
