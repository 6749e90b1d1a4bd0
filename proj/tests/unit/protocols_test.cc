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
#include <filesystem>
#include <numeric>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "pbfl/common/error.h"
#include "pbfl/protocols/secure_ops.h"
#include "server_fixture.h"

namespace pbfl::protocols {
namespace {

using testing_util::MakeServers;
using testing_util::RandomVector;

double Dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

class DeskProtocols : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { servers_ = new testing_util::ServerPair(MakeServers("desk-128bit", 900)); }
  static void TearDownTestSuite() {
    delete servers_;
    servers_ = nullptr;
  }
  fhe::EncryptedGradient Enc(const std::vector<double>& v, std::uint64_t seed) {
    return fhe::ChunkEncrypt(*servers_->ctx, servers_->keys.pk, v, seed);
  }
  static testing_util::ServerPair* servers_;
};

testing_util::ServerPair* DeskProtocols::servers_ = nullptr;

TEST_F(DeskProtocols, JudgeUnitBasisVector) {
  Transport t;
  std::vector<double> e1(100, 0.0);
  e1[0] = 1.0;
  const auto g = Enc(e1, 1);
  const JudgeVerdict v = EsecJudge(*servers_->s1, *servers_->s2, t, g);
  EXPECT_TRUE(v.accepted);
  EXPECT_NEAR(v.sum, 1.0, kJudgeTol);
  EXPECT_EQ(t.messages(), 2u);

  std::vector<double> twice = e1;
  twice[0] = 2.0;
  const JudgeVerdict w = EsecJudge(*servers_->s1, *servers_->s2, t, Enc(twice, 2));
  EXPECT_FALSE(w.accepted);
  EXPECT_NEAR(w.sum, 4.0, 1e-2);
  EXPECT_EQ(t.messages(), 4u);
}

TEST_F(DeskProtocols, JudgeRandomThreeChunks) {
  Prng rng(5);
  const auto v = fhe::Normalized(RandomVector(rng, 3000));
  const auto g = Enc(v, 3);
  ASSERT_EQ(g.tau(), 3u);
  Transport t;
  const JudgeVerdict verdict = EsecJudge(*servers_->s1, *servers_->s2, t, g);
  EXPECT_TRUE(verdict.accepted);
  EXPECT_LT(std::abs(verdict.sum - 1.0), kJudgeTol);
}

TEST_F(DeskProtocols, CosineCases) {
  Prng rng(6);
  Transport t;
  const auto a = fhe::Normalized(RandomVector(rng, 4096));
  const auto b = fhe::Normalized(RandomVector(rng, 4096));
  const auto ea = Enc(a, 10), eb = Enc(b, 11);
  ASSERT_EQ(ea.tau(), 4u);
  ASSERT_TRUE(EsecJudge(*servers_->s1, *servers_->s2, t, ea).accepted);
  ASSERT_TRUE(EsecJudge(*servers_->s1, *servers_->s2, t, eb).accepted);
  EXPECT_NEAR(EsecCos(*servers_->s1, *servers_->s2, t, ea, ea).value, 1.0, kCosEps);
  const CosineResult ab = EsecCos(*servers_->s1, *servers_->s2, t, ea, eb);
  EXPECT_NEAR(ab.value, Dot(a, b), kCosEps);
  EXPECT_EQ(ab.chunk_count, 4u);

  std::vector<double> e1(64, 0.0), e2(64, 0.0);
  e1[0] = 1;
  e2[1] = 1;
  const auto x = Enc(e1, 12), y = Enc(e2, 13);
  ASSERT_TRUE(EsecJudge(*servers_->s1, *servers_->s2, t, x).accepted);
  ASSERT_TRUE(EsecJudge(*servers_->s1, *servers_->s2, t, y).accepted);
  EXPECT_NEAR(EsecCos(*servers_->s1, *servers_->s2, t, x, y).value, 0.0, kCosEps);

  for (const auto& [name, c] : t.per_protocol()) {
    EXPECT_EQ(c.messages, 2 * c.invocations) << name;
    EXPECT_EQ(c.round_trips, c.invocations) << name;
  }
  EXPECT_TRUE(servers_->s1->masks_unique());
}

TEST_F(DeskProtocols, CosineRejectsUncheckedOrMismatchedInputs) {
  Transport t;
  Prng rng(7);
  const auto a = Enc(fhe::Normalized(RandomVector(rng, 50)), 20);
  const auto b = Enc(fhe::Normalized(RandomVector(rng, 50)), 21);
  EXPECT_THROW(EsecCos(*servers_->s1, *servers_->s2, t, a, b), Error);
  std::vector<double> big(2000, 0.0);
  big[0] = 1;
  const auto c = Enc(big, 22);
  EXPECT_THROW(EsecInner(*servers_->s1, *servers_->s2, t, a, c), Error);
  EXPECT_EQ(t.messages(), 0u);
}

TEST(TinyProtocols, S2ViewLooksUniform) {
  auto servers = MakeServers("test-tiny", 77);
  const auto& ctx = *servers.ctx;
  const double q0 = static_cast<double>(ctx.params().chain[0]);
  constexpr int kBuckets = 32;
  std::vector<std::uint64_t> counts(kBuckets, 0);
  std::size_t total = 0;
  servers.s2->set_observer([&](const S2Observation& obs) {
    for (const auto& poly : obs.raw_coeffs) {
      for (fhe::u64 c : poly) {
        ++counts[static_cast<std::size_t>(static_cast<double>(c) / q0 * kBuckets)];
        ++total;
      }
    }
  });
  std::vector<double> v(ctx.slots(), 0.0);
  v[0] = 0.6;
  v[1] = 0.8;
  const auto g = fhe::ChunkEncrypt(ctx, servers.keys.pk, v, 1);
  Transport t;
  for (int run = 0; run < 1000; ++run) EsecJudge(*servers.s1, *servers.s2, t, g);
  const double expected = static_cast<double>(total) / kBuckets;
  double chi2 = 0;
  for (auto c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 0.99 quantile of chi-square with 31 degrees of freedom.
  EXPECT_LT(chi2, 52.19);
  EXPECT_EQ(servers.s1->masks_issued(), 1000u);
  EXPECT_TRUE(servers.s1->masks_unique());
}

TEST(TinyProtocols, S1SeesOnlyScalars) {
  auto servers = MakeServers("test-tiny", 78);
  const auto& ctx = *servers.ctx;
  Transport t;
  std::vector<double> v(ctx.slots(), 0.0);
  v[2] = 1.0;
  EsecJudge(*servers.s1, *servers.s2, t, fhe::ChunkEncrypt(ctx, servers.keys.pk, v, 1));
  const auto log = t.log();
  ASSERT_EQ(log.size(), 2u);
  EXPECT_EQ(log[1].direction, Direction::kS2ToS1);
  EXPECT_EQ(log[1].bytes, 1u + 8u);  // tag + one f64
}

TEST(Transport, JsonlReplayAndFailure) {
  auto servers = MakeServers("test-tiny", 79);
  const auto& ctx = *servers.ctx;
  std::vector<double> v(ctx.slots(), 0.0);
  v[0] = 1.0;
  const auto g = fhe::ChunkEncrypt(ctx, servers.keys.pk, v, 1);
  const auto dir = std::filesystem::temp_directory_path() / "pbfl_transport_test";
  std::filesystem::create_directories(dir);
  const std::string replay = (dir / "judge.pbfr").string();
  {
    Transport t;
    t.set_record_blobs(true);
    EsecJudge(*servers.s1, *servers.s2, t, g);
    t.SaveReplay(replay);
    std::istringstream lines(t.ExportJsonl());
    std::string line;
    int n = 0;
    while (std::getline(lines, line)) {
      const auto j = nlohmann::json::parse(line);
      EXPECT_EQ(j["protocol"], "esec_judge");
      EXPECT_TRUE(j.contains("invocation_id") && j.contains("direction") && j.contains("bytes") &&
                  j.contains("tag"));
      ++n;
    }
    EXPECT_EQ(n, 2);
  }
  {
    // Same seeds reproduce the same transcript.
    auto again = MakeServers("test-tiny", 79);
    const auto g2 = fhe::ChunkEncrypt(ctx, again.keys.pk, v, 1);
    Transport t;
    t.LoadReplayForVerification(replay);
    EsecJudge(*again.s1, *again.s2, t, g2);
    EXPECT_EQ(t.replay_position(), 2u);
    // A different ciphertext diverges.
    auto other = MakeServers("test-tiny", 79);
    Transport t2;
    t2.LoadReplayForVerification(replay);
    EXPECT_THROW(EsecJudge(*other.s1, *other.s2, t2, fhe::ChunkEncrypt(ctx, other.keys.pk, v, 2)), Error);
  }
  {
    Transport t;
    t.FailAfter(1);
    try {
      EsecJudge(*servers.s1, *servers.s2, t, g);
      FAIL() << "expected a transport failure";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kProtocol);
    }
  }
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace pbfl::protocols
