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

#include "pbfl/shieldfl/leakage.h"

#include <cmath>

#include "pbfl/common/error.h"
#include "pbfl/common/prng.h"

namespace pbfl::shieldfl {

const char* AnchorKindName(AnchorKind kind) {
  return kind == AnchorKind::kKnownClient ? "known-client-gradient" : "known-previous-global";
}

ShieldFlView SimulateShieldFlView(const Matrix& gradients, const std::vector<double>& prev_global,
                                  std::uint64_t seed, const ViewOptions& options) {
  if (gradients.size() < 2) throw InvalidArgument("need at least two clients");
  const std::size_t l = prev_global.size();
  if (l == 0) throw InvalidArgument("empty gradient");
  for (const auto& row : gradients) {
    if (row.size() != l) throw InvalidArgument("gradient length mismatch");
  }
  if (options.noise_range < 0) throw InvalidArgument("negative noise range");
  ShieldFlView view;
  view.n = gradients.size();
  view.l = l;
  view.noise_seed = seed;
  view.masked_locals.assign(view.n, std::vector<double>(l));
  view.masked_global.assign(view.n, std::vector<double>(l));
  for (std::size_t i = 0; i < view.n; ++i) {
    Prng rng(Prng::DeriveSeed(seed, "shieldfl-noise-row", i));
    for (std::size_t j = 0; j < l; ++j) {
      const double r = options.noise_range == 0
                           ? 0.0
                           : rng.UniformReal(-options.noise_range, options.noise_range);
      view.masked_locals[i][j] = gradients[i][j] + r;
      view.masked_global[i][j] = prev_global[j] + r;
    }
  }
  return view;
}

DiffMatrix DeriveDifferences(const ShieldFlView& view) {
  DiffMatrix d;
  const std::size_t n = view.n, l = view.l;
  d.global.assign(n, std::vector<double>(l));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < l; ++k) d.global[i][k] = view.masked_locals[i][k] - view.masked_global[i][k];
  }
  d.pair.assign(n, Matrix(n, std::vector<double>(l, 0.0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = 0; k < l; ++k) {
        const double v = (view.masked_locals[i][k] - view.masked_locals[j][k]) -
                         (view.masked_global[i][k] - view.masked_global[j][k]);
        d.pair[i][j][k] = v;
        d.pair[j][i][k] = -v;
      }
    }
  }
  return d;
}

ReconstructionResult ReconstructGradients(const DiffMatrix& diffs, AnchorKind kind,
                                          std::size_t anchor_index,
                                          const std::vector<double>& anchor_value) {
  const std::size_t n = diffs.global.size();
  if (n == 0) throw InvalidArgument("empty difference matrix");
  const std::size_t l = diffs.global[0].size();
  if (anchor_value.size() != l) throw InvalidArgument("anchor length mismatch");
  if (kind == AnchorKind::kKnownClient && anchor_index >= n) {
    throw InvalidArgument("anchor index out of range");
  }
  ReconstructionResult out;
  out.anchor_kind = kind;
  out.anchor_index = kind == AnchorKind::kKnownClient ? anchor_index : 0;
  out.recovered.assign(n, std::vector<double>(l));
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double>& delta =
        kind == AnchorKind::kKnownClient ? diffs.pair[i][anchor_index] : diffs.global[i];
    for (std::size_t k = 0; k < l; ++k) out.recovered[i][k] = delta[k] + anchor_value[k];
  }
  return out;
}

double MaxAbs(const Matrix& m) {
  double best = 0;
  for (const auto& row : m) {
    for (double x : row) best = std::max(best, std::abs(x));
  }
  return best;
}

double ScoreAgainst(ReconstructionResult& result, const Matrix& truth) {
  if (truth.size() != result.recovered.size()) throw InvalidArgument("truth row count mismatch");
  double worst = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i].size() != result.recovered[i].size()) throw InvalidArgument("truth length mismatch");
    for (std::size_t k = 0; k < truth[i].size(); ++k) {
      worst = std::max(worst, std::abs(truth[i][k] - result.recovered[i][k]));
    }
  }
  result.max_abs_error = worst;
  return worst;
}

nlohmann::ordered_json AttackReportJson(const ReconstructionResult& result, std::size_t preview) {
  nlohmann::ordered_json j;
  j["n"] = result.recovered.size();
  j["l"] = result.recovered.empty() ? 0 : result.recovered[0].size();
  j["anchor_kind"] = AnchorKindName(result.anchor_kind);
  j["max_abs_error"] = result.max_abs_error;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < std::min(preview, result.recovered.size()); ++i) {
    const auto& row = result.recovered[i];
    rows.push_back(std::vector<double>(row.begin(), row.begin() + std::min(preview, row.size())));
  }
  j["recovered_preview"] = rows;
  return j;
}

ShieldFlView ViewFromObservations(const Matrix& client_slots, const Matrix& reference_slots,
                                  std::size_t l) {
  if (client_slots.size() != reference_slots.size() || client_slots.size() < 2) {
    throw InvalidArgument("observation matrices must pair up, n >= 2");
  }
  ShieldFlView view;
  view.n = client_slots.size();
  view.l = l;
  for (std::size_t i = 0; i < view.n; ++i) {
    if (client_slots[i].size() < l || reference_slots[i].size() < l) {
      throw InvalidArgument("observation shorter than l");
    }
    view.masked_locals.emplace_back(client_slots[i].begin(), client_slots[i].begin() + l);
    view.masked_global.emplace_back(reference_slots[i].begin(), reference_slots[i].begin() + l);
  }
  return view;
}

}  // namespace pbfl::shieldfl
