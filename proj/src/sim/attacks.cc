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

#include "pbfl/sim/attacks.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pbfl/common/error.h"
#include "pbfl/common/prng.h"

namespace pbfl::sim {

namespace {

double Norm(const std::vector<double>& v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

}  // namespace

const char* AttackKindName(AttackKind kind) {
  switch (kind) {
    case AttackKind::kNone: return "none";
    case AttackKind::kLabelFlip: return "label-flip";
    case AttackKind::kSignFlip: return "sign-flip";
    case AttackKind::kAgrTailored: return "agr-tailored";
  }
  return "none";
}

AttackKind ParseAttackKind(const std::string& name) {
  for (AttackKind k : {AttackKind::kNone, AttackKind::kLabelFlip, AttackKind::kSignFlip, AttackKind::kAgrTailored}) {
    if (name == AttackKindName(k)) return k;
  }
  throw InvalidArgument("unknown attack kind '" + name + "'");
}

std::vector<std::size_t> ChooseAttackers(std::size_t clients, double ratio, std::uint64_t seed) {
  if (!(ratio >= 0 && ratio < 1)) throw InvalidArgument("attack ratio must lie in [0, 1)");
  const auto count = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(clients) + 1e-9));
  std::vector<std::size_t> order(clients);
  std::iota(order.begin(), order.end(), 0);
  Prng rng(seed);
  std::shuffle(order.begin(), order.end(), rng.engine());
  order.resize(count);
  std::sort(order.begin(), order.end());
  return order;
}

void FlipLabels(Dataset& shard) {
  for (int& y : shard.labels) y = static_cast<int>((static_cast<std::size_t>(y) + 1) % shard.classes);
}

void MeanAndStd(const std::vector<std::vector<double>>& vectors, std::vector<double>& mean,
                std::vector<double>& stddev) {
  if (vectors.empty()) throw InvalidArgument("statistics of an empty set");
  const std::size_t l = vectors[0].size();
  mean.assign(l, 0.0);
  stddev.assign(l, 0.0);
  const double n = static_cast<double>(vectors.size());
  for (const auto& v : vectors) {
    if (v.size() != l) throw InvalidArgument("vector length mismatch");
    for (std::size_t k = 0; k < l; ++k) mean[k] += v[k] / n;
  }
  for (const auto& v : vectors) {
    for (std::size_t k = 0; k < l; ++k) stddev[k] += (v[k] - mean[k]) * (v[k] - mean[k]) / n;
  }
  for (double& s : stddev) s = std::sqrt(s);
}

std::vector<double> Poison(const AttackContext& context, const AttackSpec& spec) {
  switch (spec.kind) {
    case AttackKind::kNone:
    case AttackKind::kLabelFlip:
      return context.own;
    case AttackKind::kSignFlip: {
      std::vector<double> out(context.own.size());
      for (std::size_t k = 0; k < out.size(); ++k) out[k] = -spec.magnitude * context.own[k];
      return out;
    }
    case AttackKind::kAgrTailored: {
      if (!context.benign_mean.has_value() || !context.benign_std.has_value()) {
        throw InvalidArgument("agr-tailored attack needs the benign mean and deviation");
      }
      const auto& mean = *context.benign_mean;
      const auto& sd = *context.benign_std;
      if (mean.size() != sd.size()) throw InvalidArgument("benign statistics length mismatch");
      const double sd_norm = Norm(sd);
      std::vector<double> out(mean.size());
      for (std::size_t k = 0; k < out.size(); ++k) {
        const double dev = sd_norm > 0 ? -sd[k] / sd_norm : 0.0;
        out[k] = mean[k] + spec.magnitude * dev;
      }
      const double n = Norm(out);
      if (!(n > 0)) throw InvalidArgument("agr-tailored output is zero");
      for (double& v : out) v /= n;
      return out;
    }
  }
  return context.own;
}

}  // namespace pbfl::sim
