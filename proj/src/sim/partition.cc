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

#include "pbfl/sim/partition.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "pbfl/common/error.h"
#include "pbfl/common/prng.h"

namespace pbfl::sim {

namespace {

constexpr int kMaxAttempts = 1000;

}  // namespace

Shards DirichletPartition(const std::vector<int>& labels, std::size_t clients, double alpha,
                          std::uint64_t seed) {
  if (!(alpha > 0)) throw InvalidArgument("alpha_dirichlet must be positive");
  if (clients == 0) throw InvalidArgument("partition needs at least one client");
  if (clients > labels.size()) throw InvalidArgument("more clients than examples");
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Prng rng(Prng::DeriveSeed(seed, "dirichlet-attempt", static_cast<std::uint64_t>(attempt)));
    Shards shards(clients);
    for (auto [cls, members] : by_class) {
      std::shuffle(members.begin(), members.end(), rng.engine());
      std::vector<double> p(clients);
      double total = 0;
      for (auto& v : p) total += (v = rng.Gamma(alpha));
      if (!(total > 0)) {
        std::fill(p.begin(), p.end(), 1.0);
        total = static_cast<double>(clients);
      }
      // Cut points at the rounded cumulative proportions.
      double cumulative = 0;
      std::size_t start = 0;
      for (std::size_t c = 0; c < clients; ++c) {
        cumulative += p[c] / total;
        const std::size_t end = c + 1 == clients
                                    ? members.size()
                                    : std::min(members.size(), static_cast<std::size_t>(std::llround(
                                                                   cumulative * static_cast<double>(members.size()))));
        for (std::size_t k = start; k < std::max(start, end); ++k) shards[c].push_back(members[k]);
        start = std::max(start, end);
      }
    }
    const bool degenerate = std::any_of(shards.begin(), shards.end(), [](const auto& s) { return s.empty(); });
    if (!degenerate) {
      for (auto& s : shards) std::sort(s.begin(), s.end());
      return shards;
    }
  }
  throw InvalidArgument("could not draw a partition without empty clients");
}

}  // namespace pbfl::sim
