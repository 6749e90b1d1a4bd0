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

#include <cmath>

#include <gtest/gtest.h>

#include "pbfl/common/error.h"
#include "pbfl/common/prng.h"
#include "pbfl/shieldfl/leakage.h"
#include "pbfl/shieldfl/seccos_emulation.h"

namespace pbfl::shieldfl {
namespace {

Matrix RandomMatrix(Prng& rng, std::size_t n, std::size_t l) {
  Matrix m(n, std::vector<double>(l));
  for (auto& row : m) {
    for (auto& x : row) x = rng.UniformReal(-1, 1);
  }
  return m;
}

TEST(ShieldFlView, TwoClientExample) {
  const Matrix g = {{1, 0}, {0, 1}};
  const std::vector<double> y = {0.6, 0.8};
  const ShieldFlView view = SimulateShieldFlView(g, y, 1234);
  const Matrix want = {{0.4, -0.8}, {-0.6, 0.2}};
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 2; ++k) {
      EXPECT_NEAR(view.masked_locals[i][k] - view.masked_global[i][k], want[i][k], 1e-12);
      EXPECT_GT(std::abs(view.masked_locals[i][k] - g[i][k]), 1e-3);  // actually masked
    }
  }
  const DiffMatrix d = DeriveDifferences(view);
  EXPECT_NEAR(d.pair[0][1][0], 1.0, 1e-12);
  EXPECT_NEAR(d.pair[0][1][1], -1.0, 1e-12);

  ReconstructionResult r = ReconstructGradients(d, AnchorKind::kKnownClient, 1, g[1]);
  EXPECT_NEAR(r.recovered[0][0], 1.0, 1e-12);
  EXPECT_NEAR(r.recovered[0][1], 0.0, 1e-12);
  EXPECT_EQ(r.recovered[1], g[1]);
}

TEST(ShieldFlView, DegenerateCases) {
  const Matrix g = {{0.3, 0.4}, {0.3, 0.4}};
  const std::vector<double> y = {0.3, 0.4};
  const ShieldFlView view = SimulateShieldFlView(g, y, 9);
  EXPECT_EQ(view.masked_locals, view.masked_global);
  const DiffMatrix d = DeriveDifferences(view);
  for (const auto& row : d.pair) {
    for (const auto& cell : row) {
      for (double x : cell) EXPECT_EQ(x, 0.0);
    }
  }
  ViewOptions unmasked;
  unmasked.noise_range = 0;
  EXPECT_EQ(SimulateShieldFlView(g, y, 9, unmasked).masked_locals, g);

  EXPECT_THROW(SimulateShieldFlView({{1.0}}, {1.0}, 1), Error);
  EXPECT_THROW(SimulateShieldFlView({{1.0, 2.0}, {1.0}}, {1.0, 2.0}, 1), Error);
  EXPECT_THROW(ReconstructGradients(d, AnchorKind::kKnownClient, 5, y), Error);
}

TEST(ShieldFlView, LeakageCompletenessProperty) {
  Prng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng.UniformBelow(9);
    const std::size_t l = 2 + rng.UniformBelow(63);
    const Matrix g = RandomMatrix(rng, n, l);
    const std::vector<double> y = RandomMatrix(rng, 1, l)[0];
    const DiffMatrix d = DeriveDifferences(SimulateShieldFlView(g, y, rng.NextU64()));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < l; ++k) {
          ASSERT_LT(std::abs(d.pair[i][j][k] + d.pair[j][i][k]), 1e-12);
        }
      }
    }
    const std::size_t anchor = rng.UniformBelow(n);
    ReconstructionResult from_client = ReconstructGradients(d, AnchorKind::kKnownClient, anchor, g[anchor]);
    EXPECT_LT(ScoreAgainst(from_client, g), 1e-12);
    EXPECT_EQ(from_client.recovered[anchor], g[anchor]);
    ReconstructionResult from_global = ReconstructGradients(d, AnchorKind::kKnownGlobal, 0, y);
    EXPECT_LT(ScoreAgainst(from_global, g), 1e-12);
  }
}

TEST(ShieldFlView, ReportJson) {
  Prng rng(2);
  const Matrix g = RandomMatrix(rng, 3, 6);
  const std::vector<double> y(6, 0.1);
  ReconstructionResult r =
      ReconstructGradients(DeriveDifferences(SimulateShieldFlView(g, y, 3)), AnchorKind::kKnownGlobal, 0, y);
  ScoreAgainst(r, g);
  const auto j = AttackReportJson(r, 2);
  EXPECT_EQ(j["n"], 3);
  EXPECT_EQ(j["l"], 6);
  EXPECT_EQ(j["anchor_kind"], "known-previous-global");
  EXPECT_LT(j["max_abs_error"].get<double>(), 1e-12);
  EXPECT_EQ(j["recovered_preview"].size(), 2u);
  EXPECT_EQ(j["recovered_preview"][0].size(), 2u);
}

TEST(SecCosEmulation, FourMessagesPerInvocation) {
  Prng rng(4);
  const Matrix g = RandomMatrix(rng, 5, 32);
  const std::vector<double> y(32, 0.2);
  protocols::Transport t;
  const SecCosRun run = EmulateSecCosBaseline(g, y, t, 8);
  EXPECT_EQ(run.cosines.size(), 5u);
  const auto counters = t.per_protocol().at(kSecCosProtocol);
  EXPECT_EQ(counters.invocations, 5u);
  EXPECT_EQ(counters.messages, 20u);
  EXPECT_EQ(counters.round_trips, 10u);
  for (std::uint64_t inv = 1; inv <= 5; ++inv) EXPECT_EQ(t.MessagesOf(inv).size(), 4u);
  EXPECT_EQ(t.MessagesOf(1)[0].bytes, 1 + 4 * 32 * kPaillierUnitBytes);
}

}  // namespace
}  // namespace pbfl::shieldfl
