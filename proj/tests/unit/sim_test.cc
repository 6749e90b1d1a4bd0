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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "pbfl/common/error.h"
#include "pbfl/common/prng.h"
#include "pbfl/fhe/encrypted_gradient.h"
#include "pbfl/fhe/params.h"
#include "pbfl/fhe/scheme.h"
#include "pbfl/sim/attacks.h"
#include "pbfl/sim/dataset.h"
#include "pbfl/sim/model.h"
#include "pbfl/sim/partition.h"
#include "pbfl/sim/setup.h"
#include "pbfl/sim/simulation.h"

namespace pbfl::sim {
namespace {

std::vector<std::size_t> All(const Dataset& d) {
  std::vector<std::size_t> idx(d.size());
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

double Norm(const std::vector<double>& v) { return fhe::L2Norm(v); }

double Cosine(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0) / (Norm(a) * Norm(b));
}

const Dataset& Mnist() {
  static const Dataset d = LoadCsv(std::string(PBFL_DATA_DIR) + "/mnist_2k.csv", 1.0 / 255);
  return d;
}

double MaxRelativeFdError(Model& m, const Dataset& d) {
  const auto batch = All(d);
  const auto g = m.Gradient(d, batch);
  double worst = 0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    const double h = 1e-6, keep = m.weights()[k];
    m.mutable_weights()[k] = keep + h;
    const double up = m.Loss(d, batch);
    m.mutable_weights()[k] = keep - h;
    const double down = m.Loss(d, batch);
    m.mutable_weights()[k] = keep;
    const double fd = (up - down) / (2 * h);
    worst = std::max(worst, std::abs(fd - g[k]) / std::max(1.0, std::abs(fd)));
  }
  return worst;
}

TEST(Model, ZeroLogisticGradientMatchesFiniteDifference) {
  const Dataset d = SyntheticGaussians(40, 6, 4.0, 3);
  Model m(ModelKind::kLogistic, d.features, d.classes);
  EXPECT_LT(MaxRelativeFdError(m, d), 1e-5);
}

TEST(Model, MlpGradientMatchesFiniteDifference) {
  const Dataset d = SyntheticGaussians(30, 5, 2.0, 4);
  Model m = Model::Random(ModelKind::kMlp, d.features, d.classes, 6, 9);
  EXPECT_LT(MaxRelativeFdError(m, d), 1e-5);
}

TEST(Model, LocalTrainIsDeterministicPerSeed) {
  const Dataset d = SyntheticGaussians(200, 8, 2.0, 5);
  const Dataset copy = d.Subset(All(d));
  const Model m = Model::Random(ModelKind::kLogistic, d.features, d.classes, 0, 1);
  EXPECT_EQ(LocalTrain(m, d, 32, 77), LocalTrain(m, copy, 32, 77));
  EXPECT_NE(LocalTrain(m, d, 32, 77), LocalTrain(m, d, 32, 78));
  EXPECT_EQ(LocalTrain(m, d, 0, 1), LocalTrain(m, d, 1000, 2));  // full shard either way
  EXPECT_THROW(LocalTrain(m, d.Subset({}), 32, 1), Error);
}

TEST(Model, GradientVanishesAtOptimum) {
  const Dataset d = SyntheticGaussians(120, 4, 1.0, 6);  // overlapping blobs: finite optimum
  Model m(ModelKind::kLogistic, d.features, d.classes);
  const auto batch = All(d);
  std::vector<double> g;
  for (int step = 0; step < 20000; ++step) {
    g = m.Gradient(d, batch);
    if (Norm(g) < 1e-4) break;
    ModelUpdate(m.mutable_weights(), g, 2.0);
  }
  EXPECT_LT(Norm(m.Gradient(d, batch)), 1e-3);
}

TEST(Model, UpdateRuleEdgeCases) {
  std::vector<double> w = {1, -2, 3};
  ModelUpdate(w, {0, 0, 0}, 0.5);
  EXPECT_EQ(w, (std::vector<double>{1, -2, 3}));
  ModelUpdate(w, {4, 5, 6}, 0.0);
  EXPECT_EQ(w, (std::vector<double>{1, -2, 3}));
  ModelUpdate(w, {1, 1, 1}, 0.5);
  EXPECT_EQ(w, (std::vector<double>{0.5, -2.5, 2.5}));
}

TEST(Model, CheckpointFormat) {
  const std::string path = (std::filesystem::temp_directory_path() / "pbfl_ckpt_test.bin").string();
  const std::vector<double> w = {0.25, -1.5, 3e-9};
  SaveWeights(path, w);
  EXPECT_EQ(std::filesystem::file_size(path), 8u + 8u * w.size());
  std::ifstream f(path, std::ios::binary);
  unsigned char head[8];
  f.read(reinterpret_cast<char*>(head), 8);
  EXPECT_EQ(head[0], 3);
  EXPECT_EQ(head[7], 0);
  EXPECT_EQ(LoadWeights(path), w);
  std::filesystem::remove(path);
}

TEST(Dataset, CsvParsing) {
  const std::string path = (std::filesystem::temp_directory_path() / "pbfl_csv_test.csv").string();
  {
    std::ofstream f(path);
    f << "a,label,b\n1,2,3\n4,0,5\n";
  }
  const Dataset d = LoadCsv(path, 0.5);
  EXPECT_EQ(d.size(), 2u);
  EXPECT_EQ(d.features, 2u);
  EXPECT_EQ(d.classes, 3u);
  EXPECT_EQ(d.labels, (std::vector<int>{2, 0}));
  EXPECT_EQ(d.x[1], (std::vector<double>{2.0, 2.5}));
  {
    std::ofstream f(path);
    f << "a,b\n1,2\n";
  }
  EXPECT_THROW(LoadCsv(path), Error);
  std::filesystem::remove(path);
  EXPECT_THROW(LoadCsv(path), Error);
}

TEST(Dataset, BundledMnistSubset) {
  const Dataset& d = Mnist();
  EXPECT_EQ(d.size(), 2000u);
  EXPECT_EQ(d.features, 784u);
  EXPECT_EQ(d.classes, 10u);
  auto [train, test] = TrainTestSplit(d, 0.2, 1);
  EXPECT_EQ(test.size(), 400u);
  EXPECT_EQ(train.size(), 1600u);
}

TEST(Partition, ShardsPartitionTheDataset) {
  const auto& labels = Mnist().labels;
  for (double alpha : {0.1, 0.5, 100.0}) {
    const Shards shards = DirichletPartition(labels, 10, alpha, 3);
    ASSERT_EQ(shards.size(), 10u);
    std::vector<int> seen(labels.size(), 0);
    for (const auto& s : shards) {
      EXPECT_FALSE(s.empty());
      for (auto i : s) ++seen[i];
    }
    EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
  }
  EXPECT_THROW(DirichletPartition({0, 1, 2}, 4, 1.0, 1), Error);
  EXPECT_THROW(DirichletPartition({0, 1, 2}, 2, 0.0, 1), Error);
}

std::vector<double> Proportions(const std::vector<int>& labels, const std::vector<std::size_t>& idx,
                                std::size_t classes) {
  std::vector<double> p(classes, 0);
  for (auto i : idx) p[labels[i]] += 1.0;
  for (double& x : p) x /= static_cast<double>(idx.size());
  return p;
}

TEST(Partition, LargeAlphaTracksGlobalHistogram) {
  const auto& labels = Mnist().labels;
  std::vector<std::size_t> all(labels.size());
  std::iota(all.begin(), all.end(), 0);
  const auto global = Proportions(labels, all, 10);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (const auto& shard : DirichletPartition(labels, 10, 1000.0, seed)) {
      const auto p = Proportions(labels, shard, 10);
      for (int c = 0; c < 10; ++c) EXPECT_NEAR(p[c], global[c], 0.05) << "seed " << seed;
    }
  }
}

TEST(Partition, SmallAlphaConcentratesMass) {
  const auto& labels = Mnist().labels;
  int seeds_with_concentrated_client = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    bool found = false;
    for (const auto& shard : DirichletPartition(labels, 10, 0.1, seed)) {
      const auto p = Proportions(labels, shard, 10);
      found |= *std::max_element(p.begin(), p.end()) > 0.8;
    }
    seeds_with_concentrated_client += found;
  }
  EXPECT_GT(seeds_with_concentrated_client, 5);
}

TEST(Chunking, PaddingAndRoundTrip) {
  const auto ctx = fhe::MakeContext("desk-128bit");
  ASSERT_EQ(ctx->slots(), 1024u);
  EXPECT_EQ(fhe::ChunkCount(3000, 1024), 3u);
  const auto km = fhe::KeyGen(*ctx, 5);
  Prng rng(8);
  std::vector<double> g(3000);
  for (double& x : g) x = rng.UniformReal(-3, 3);
  const auto enc = fhe::NormalizeChunkEncrypt(*ctx, km.pk, g, 9);
  ASSERT_EQ(enc.tau(), 3u);
  EXPECT_EQ(enc.original_len, 3000u);
  const auto last = fhe::Decrypt(*ctx, km.sk, enc.chunks[2]);
  for (std::size_t j = 3000 - 2048; j < 1024; ++j) EXPECT_LT(std::abs(last[j]), fhe::kDecEps);
  const auto want = fhe::Normalized(g);
  const auto got = fhe::DecryptGradient(*ctx, km.sk, enc);
  ASSERT_EQ(got.size(), 3000u);
  double worst = 0;
  for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
  EXPECT_LT(worst, fhe::kDecEps);

  const auto again = fhe::Normalized(want);
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(again[i], want[i], 1e-12);
  EXPECT_THROW(fhe::NormalizeChunkEncrypt(*ctx, km.pk, std::vector<double>(10, 0.0), 1), Error);
}

TEST(Attacks, SignFlip) {
  AttackSpec spec{AttackKind::kSignFlip, 0.3, 1.0};
  AttackContext ctx{{0.3, -0.4, 1.2}, std::nullopt, std::nullopt};
  const auto out = Poison(ctx, spec);
  EXPECT_EQ(out, (std::vector<double>{-0.3, 0.4, -1.2}));
  EXPECT_NEAR(Cosine(out, ctx.own), -1.0, 1e-12);
}

TEST(Attacks, AgrTailored) {
  const std::vector<std::vector<double>> benign = {{1, 0, 2}, {3, 2, 2}, {2, 1, 5}};
  std::vector<double> mean, sd;
  MeanAndStd(benign, mean, sd);
  EXPECT_EQ(mean, (std::vector<double>{2, 1, 3}));
  // Population std: sqrt(2/3), sqrt(2/3), sqrt(2).
  EXPECT_NEAR(sd[0], std::sqrt(2.0 / 3), 1e-12);
  EXPECT_NEAR(sd[2], std::sqrt(2.0), 1e-12);

  AttackSpec spec{AttackKind::kAgrTailored, 0.3, 0.0};
  AttackContext ctx{{9, 9, 9}, mean, sd};
  EXPECT_NEAR(Cosine(Poison(ctx, spec), mean), 1.0, 1e-12);

  spec.magnitude = 1.0;
  const double sd_norm = std::sqrt(2.0 / 3 + 2.0 / 3 + 2.0);
  std::vector<double> want = {2 - sd[0] / sd_norm, 1 - sd[1] / sd_norm, 3 - sd[2] / sd_norm};
  want = fhe::Normalized(want);
  const auto got = Poison(ctx, spec);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(got[i], want[i], 1e-12);

  ctx.benign_mean.reset();
  EXPECT_THROW(Poison(ctx, spec), Error);
}

TEST(Attacks, AttackerSelectionAndLabelFlip) {
  const auto a = ChooseAttackers(10, 0.3, 5);
  EXPECT_EQ(a.size(), 3u);
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
  EXPECT_EQ(a, ChooseAttackers(10, 0.3, 5));
  EXPECT_EQ(ChooseAttackers(10, 0.0, 5).size(), 0u);
  EXPECT_EQ(ChooseAttackers(7, 0.29, 5).size(), 2u);

  Dataset d;
  d.classes = 3;
  d.features = 1;
  d.labels = {0, 1, 2, 2};
  d.x.assign(4, {0.0});
  FlipLabels(d);
  EXPECT_EQ(d.labels, (std::vector<int>{1, 2, 0, 0}));
  EXPECT_EQ(AttackKindName(ParseAttackKind("agr-tailored")), std::string("agr-tailored"));
  EXPECT_THROW(ParseAttackKind("backdoor"), Error);
}

TEST(Setup, KeyTopology) {
  Deployment d = SystemSetup(5, "test-tiny", 21);
  EXPECT_EQ(d.split_count, 6u);
  ASSERT_EQ(d.client_shares.size(), 5u);
  const auto server_sum = fhe::CombineShares(*d.ctx, d.s1->key_share(), d.s2->key_share());
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(fhe::CombineShares(*d.ctx, d.s1->client_share(i), d.client_shares[i]), server_sum);
    EXPECT_NE(d.client_shares[i].share, d.s2->key_share().share);
  }
  Deployment again = SystemSetup(5, "test-tiny", 21);
  EXPECT_EQ(again.pk.b, d.pk.b);
  EXPECT_EQ(again.client_shares[3].share, d.client_shares[3].share);
  EXPECT_THROW(SystemSetup(1, "test-tiny", 21), Error);

  // A client decrypts an aggregate through its own split. dec_eps is the
  // desk tolerance, so this part runs at desk size.
  Deployment desk = SystemSetup(3, "desk-128bit", 22);
  Prng rng(4);
  std::vector<double> v(1500);
  for (double& x : v) x = rng.UniformReal(-1, 1);
  const auto enc = fhe::ChunkEncrypt(*desk.ctx, desk.pk, v, 3);
  const auto dec = ClientDecrypt(desk, 2, enc, 99);
  ASSERT_EQ(dec.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(dec[i], v[i], fhe::kDecEps);
}

SimConfig SmallConfig(PipelineMode mode) {
  SimConfig c;
  c.clients = 4;
  c.rounds = 3;
  c.seed = 11;
  c.mode = mode;
  c.emulate_shieldfl = false;
  return c;
}

TEST(Simulation, OneRoundEncryptedMatchesMirror) {
  auto [train, test] = TrainTestSplit(Mnist(), 0.2, 2);
  Simulation enc(SmallConfig(PipelineMode::kEncrypted), train, test);
  Simulation plain(SmallConfig(PipelineMode::kPlain), train, test);
  const auto w0 = plain.model().weights();
  ASSERT_EQ(enc.model().weights(), w0);
  const RoundRecord re = enc.RunRound();
  const RoundRecord rp = plain.RunRound();
  EXPECT_EQ(re.defense.trusted, rp.defense.trusted);
  EXPECT_EQ(re.defense.selected, rp.defense.selected);
  double worst = 0;
  for (std::size_t k = 0; k < w0.size(); ++k) {
    worst = std::max(worst, std::abs(enc.model().weights()[k] - plain.model().weights()[k]));
  }
  EXPECT_LT(worst, 1e-3);
  EXPECT_LT(re.max_input_norm_error, 1e-6);
  EXPECT_LT(re.decrypt_spread, 2 * fhe::kDecEps);

  // Mirror update rule: ||W1 - W0|| = eta * ||g_sigma||.
  double moved = 0;
  for (std::size_t k = 0; k < w0.size(); ++k) {
    moved += std::pow(plain.model().weights()[k] - w0[k], 2);
  }
  EXPECT_NEAR(std::sqrt(moved), rp.eta * rp.update_l2, 1e-12);
}

TEST(Simulation, AttackersAndReports) {
  auto [train, test] = TrainTestSplit(Mnist(), 0.2, 2);
  SimConfig c = SmallConfig(PipelineMode::kPlain);
  c.clients = 10;
  c.attack = {AttackKind::kSignFlip, 0.3, 1.0};
  Simulation s(c, train, test);
  EXPECT_EQ(s.attackers().size(), 3u);
  for (int t = 1; t <= 3; ++t) {
    const RoundRecord r = s.RunRound();
    EXPECT_EQ(r.round, t);
    EXPECT_EQ(r.client_weights.size(), 10u);
    EXPECT_NEAR(std::accumulate(r.client_weights.begin(), r.client_weights.end(), 0.0), 1.0, 1e-9);
    EXPECT_EQ(r.defense.reference, t == 1 ? "trusted-sum" : "previous-global");
  }
}

}  // namespace
}  // namespace pbfl::sim
