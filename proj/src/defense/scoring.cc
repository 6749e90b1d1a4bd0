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

#include "pbfl/defense/scoring.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "pbfl/common/error.h"

namespace pbfl::defense {

DefenseConfig DefenseConfig::Resolved(std::size_t clients, int rounds) const {
  if (clients == 0) throw InvalidArgument("defense: client count must be positive");
  DefenseConfig out = *this;
  if (out.delta < 0) out.delta = 1.0 / (2.0 * static_cast<double>(clients));
  // Runs shorter than the warmup keep lambda at 1 throughout.
  if (out.t_total < 0) out.t_total = std::max(rounds, out.t_warmup + 1);
  out.Validate();
  return out;
}

void DefenseConfig::Validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw InvalidArgument("defense." + field + ": " + why);
  };
  if (!(alpha_credit >= 0 && alpha_credit <= 1)) fail("alpha_credit", "must lie in [0, 1]");
  if (!(theta >= 0 && theta < 1)) fail("theta", "must lie in [0, 1)");
  if (!(delta > 0)) fail("delta", "must be positive");
  if (!(gamma1 >= 0 && gamma1 <= 1)) fail("gamma1", "must lie in [0, 1]");
  if (!(gamma2 > 1)) fail("gamma2", "must exceed 1");
  if (t_warmup < 0) fail("t_warmup", "must be non-negative");
  if (t_total <= t_warmup) fail("t_total", "must exceed t_warmup");
}

ClientMap Confidence(const ClientMap& cos_star) {
  if (cos_star.empty()) throw InvalidArgument("confidence of an empty set");
  double top = -INFINITY;
  for (const auto& [i, v] : cos_star) {
    if (!std::isfinite(v)) throw InvalidArgument("non-finite similarity");
    top = std::max(top, v);
  }
  ClientMap co;
  double total = 0;
  for (const auto& [i, v] : cos_star) total += (co[i] = std::exp(v - top));
  for (auto& [i, v] : co) v /= total;
  return co;
}

CreditLedger::CreditLedger(std::size_t clients) {
  for (ClientId i = 0; i < clients; ++i) cs_[i] = 1.0;
}

double CreditLedger::at(ClientId i) const {
  auto it = cs_.find(i);
  if (it == cs_.end()) throw InvalidArgument("no credit entry for client " + std::to_string(i));
  return it->second;
}

void CreditLedger::Update(const ClientMap& co, double alpha) {
  if (!(alpha >= 0 && alpha <= 1)) throw InvalidArgument("alpha_credit outside [0, 1]");
  for (const auto& [i, c] : co) {
    double& cs = cs_.at(i);
    cs = alpha * cs + (1 - alpha) * c;
  }
}

void CreditLedger::ApplyPenalties(const std::vector<ClientId>& rejected_norm,
                                  const std::vector<ClientId>& dropped_by_gap, double gamma1,
                                  double gamma2) {
  const std::set<ClientId> rejected(rejected_norm.begin(), rejected_norm.end());
  for (ClientId i : dropped_by_gap) {
    if (rejected.count(i)) throw InvalidArgument("penalty sets overlap at client " + std::to_string(i));
  }
  for (ClientId i : rejected_norm) cs_.at(i) *= gamma1;
  for (ClientId i : dropped_by_gap) cs_.at(i) *= gamma2;
}

ClientMap ComputeWeights(const CreditLedger& ledger, const ClientMap& co) {
  ClientMap w;
  double total = 0;
  for (const auto& [i, c] : co) {
    const double cs = ledger.at(i);
    if (!(cs > 0) || c < 0) throw InvalidArgument("credit must be positive and confidence non-negative");
    total += (w[i] = cs * c);
  }
  if (!(total > 0)) throw InvalidArgument("all credit-confidence products are zero");
  for (auto& [i, v] : w) v /= total;
  return w;
}

double MixingCoefficient(int t, int t_warmup, int t_total) {
  const double lambda =
      1.0 - static_cast<double>(t - t_warmup) / static_cast<double>(t_total - t_warmup);
  return std::clamp(lambda, 0.0, 1.0);
}

FilterOutcome AdaptiveFilter(const ClientMap& w, int t, const DefenseConfig& cfg) {
  FilterOutcome out;
  out.lambda = MixingCoefficient(t, cfg.t_warmup, cfg.t_total);
  const double n = static_cast<double>(w.size());
  std::vector<std::pair<double, ClientId>> survivors;
  for (const auto& [i, wi] : w) {
    const double mixed = out.lambda / n + (1 - out.lambda) * wi;
    out.w_tilde[i] = mixed;
    if (mixed < cfg.theta) {
      out.dropped_by_threshold.push_back(i);
    } else {
      survivors.emplace_back(wi, i);
    }
  }
  std::set<ClientId> gap_dropped;
  const std::size_t k = std::min(w.size() / 2, survivors.size());
  if (w.size() >= 4 && k >= 2) {
    std::sort(survivors.begin(), survivors.end(),
              [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });
    std::size_t cut = 0;  // ranks [0, cut) sit above the lowest sharp drop
    for (std::size_t r = 0; r + 1 < k; ++r) {
      if (survivors[r].first - survivors[r + 1].first > cfg.delta) cut = r + 1;
    }
    for (std::size_t r = 0; r < cut; ++r) gap_dropped.insert(survivors[r].second);
  }
  out.dropped_by_gap.assign(gap_dropped.begin(), gap_dropped.end());
  for (const auto& [wi, i] : survivors) {
    if (!gap_dropped.count(i)) out.selected.push_back(i);
  }
  std::sort(out.selected.begin(), out.selected.end());
  return out;
}

std::size_t ArgminWithTies(const std::vector<double>& values, double tie_eps) {
  if (values.empty()) throw InvalidArgument("argmin of an empty set");
  const double lowest = *std::min_element(values.begin(), values.end());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] <= lowest + tie_eps) return i;
  }
  return 0;
}

}  // namespace pbfl::defense
