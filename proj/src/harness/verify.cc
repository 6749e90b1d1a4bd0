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

#include "pbfl/harness/verify.h"

#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "pbfl/common/prng.h"
#include "pbfl/defense/scoring.h"
#include "pbfl/fhe/encrypted_gradient.h"
#include "pbfl/fhe/params.h"
#include "pbfl/fhe/scheme.h"
#include "pbfl/harness/attack_demo.h"
#include "pbfl/protocols/secure_ops.h"
#include "pbfl/sim/model.h"

namespace pbfl::harness {

namespace {

using fhe::FheContext;

std::vector<double> Random(Prng& rng, std::size_t len) {
  std::vector<double> v(len);
  for (double& x : v) x = rng.UniformReal(-1.0, 1.0);
  return v;
}

double MaxDiff(const std::vector<double>& a, const std::vector<double>& b, std::size_t len) {
  double worst = 0;
  for (std::size_t i = 0; i < len; ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

std::string Fmt(const char* label, double value) {
  std::ostringstream s;
  s << label << '=' << value;
  return s.str();
}

struct Keys {
  std::shared_ptr<const FheContext> ctx;
  fhe::KeyMaterial km;
  fhe::SecretKeyShare first, second;
};

Keys MakeKeys(const std::string& preset, std::uint64_t seed) {
  Keys k;
  k.ctx = fhe::MakeContext(preset);
  k.km = fhe::KeyGen(*k.ctx, seed);
  auto [a, b] = fhe::KeySplit(*k.ctx, k.km.sk, seed + 1, "S1", "S2");
  k.first = a;
  k.second = b;
  return k;
}

std::vector<double> ThresholdDecrypt(const Keys& k, const fhe::Ciphertext& ct, std::uint64_t seed) {
  return fhe::FullDec(*k.ctx, ct, fhe::PartDec(*k.ctx, k.first, ct, seed),
                      fhe::PartDec(*k.ctx, k.second, ct, seed + 1));
}

CheckResult RingOracle(std::uint64_t seed) {
  const auto ctx = fhe::MakeContext("desk-128bit");
  const fhe::Ring& ring = ctx->ring();
  Prng rng(Prng::DeriveSeed(seed, "verify-ring"));
  const fhe::Basis basis = ring.LevelBasis(1);
  const auto a = ring.SampleUniform(rng, basis);
  const auto b = ring.SampleUniform(rng, basis);
  const auto product = ring.Mul(a, b);
  bool same = true;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    same &= fhe::SchoolbookNegacyclic(a.residues[k], b.residues[k], ring.prime(basis[k])) == product.residues[k];
  }
  return {"ring-mul-vs-schoolbook", same, same ? "exact" : "mismatch"};
}

CheckResult RoundTrip(const Keys& k, std::uint64_t seed) {
  Prng rng(Prng::DeriveSeed(seed, "verify-roundtrip"));
  double worst = 0;
  for (int i = 0; i < 10; ++i) {
    const auto v = Random(rng, k.ctx->slots());
    const auto ct = fhe::EncryptVector(*k.ctx, k.km.pk, v, seed + 10 + i);
    worst = std::max(worst, MaxDiff(ThresholdDecrypt(k, ct, seed + 100 + 2 * i), v, v.size()));
  }
  return {"threshold-round-trip", worst < fhe::kDecEps, Fmt("max_abs_error", worst)};
}

CheckResult Homomorphic(const Keys& k, std::uint64_t seed) {
  Prng rng(Prng::DeriveSeed(seed, "verify-homomorphic"));
  double add_worst = 0, mult_worst = 0;
  for (int i = 0; i < 5; ++i) {
    const auto x = Random(rng, k.ctx->slots());
    const auto y = Random(rng, k.ctx->slots());
    const auto cx = fhe::EncryptVector(*k.ctx, k.km.pk, x, seed + 20 + 2 * i);
    const auto cy = fhe::EncryptVector(*k.ctx, k.km.pk, y, seed + 21 + 2 * i);
    std::vector<double> sum(x.size()), prod(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
      sum[j] = x[j] + y[j];
      prod[j] = x[j] * y[j];
    }
    add_worst = std::max(add_worst, MaxDiff(ThresholdDecrypt(k, fhe::Add(*k.ctx, cx, cy), seed + 200), sum, x.size()));
    mult_worst = std::max(mult_worst, MaxDiff(ThresholdDecrypt(k, fhe::Mult(*k.ctx, k.km.evk, cx, cy), seed + 300),
                                              prod, x.size()));
  }
  const bool ok = add_worst < 1.0 / (1 << 14) && mult_worst < fhe::kMultEps;
  return {"homomorphic-add-mult", ok, Fmt("add_error", add_worst) + " " + Fmt("mult_error", mult_worst)};
}

CheckResult SharesReassemble(const Keys& k) {
  const fhe::Ring& ring = k.ctx->ring();
  const auto sk_q = ring.Restrict(k.km.sk.s, ring.LevelBasis(1));
  bool ok = fhe::CombineShares(*k.ctx, k.first, k.second) == sk_q;
  for (std::uint64_t s = 0; s < 5; ++s) {
    auto [a, b] = fhe::KeySplit(*k.ctx, k.km.sk, 500 + s, "S1", "S2");
    ok &= fhe::CombineShares(*k.ctx, a, b) == sk_q;
  }
  return {"key-shares-reassemble", ok, ok ? "6/6 splits" : "mismatch"};
}

CheckResult SecureOps(const Keys& k, std::uint64_t seed) {
  protocols::ServerS1 s1(k.ctx, k.first, k.km.evk, seed + 30);
  protocols::ServerS2 s2(k.ctx, k.second, seed + 31);
  protocols::Transport t;
  Prng rng(Prng::DeriveSeed(seed, "verify-secure-ops"));
  double cos_worst = 0;
  bool verdicts = true;
  for (int i = 0; i < 4; ++i) {
    const auto a = fhe::Normalized(Random(rng, 1500));
    const auto b = fhe::Normalized(Random(rng, 1500));
    const auto ca = fhe::ChunkEncrypt(*k.ctx, k.km.pk, a, seed + 40 + 2 * i);
    const auto cb = fhe::ChunkEncrypt(*k.ctx, k.km.pk, b, seed + 41 + 2 * i);
    verdicts &= protocols::EsecJudge(s1, s2, t, ca).accepted && protocols::EsecJudge(s1, s2, t, cb).accepted;
    const double want = std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
    cos_worst = std::max(cos_worst, std::abs(protocols::EsecCos(s1, s2, t, ca, cb).value - want));
    std::vector<double> doubled = a;
    for (double& x : doubled) x *= 2;
    verdicts &= !protocols::EsecJudge(s1, s2, t, fhe::ChunkEncrypt(*k.ctx, k.km.pk, doubled, seed + 60 + i)).accepted;
  }
  const bool ok = verdicts && cos_worst <= protocols::kCosEps;
  return {"esec-judge-and-cos", ok, Fmt("cos_error", cos_worst) + (verdicts ? " verdicts ok" : " wrong verdict")};
}

CheckResult Reconstruction(std::uint64_t seed) {
  AttackDemoOptions opts;
  opts.seed = seed;
  opts.contrast_trials = 0;
  const auto report = RunAttackDemo(opts);
  const double err = report["shieldfl_max_abs_error"].get<double>();
  return {"shieldfl-reconstruction", err < 1e-12, Fmt("max_abs_error", err)};
}

CheckResult DefenseClosedForms() {
  using defense::ClientMap;
  bool ok = true;
  const ClientMap co = defense::Confidence({{0, -1.0}, {1, 0.0}});
  ok &= std::abs(co.at(0) - std::exp(-1.0) / (std::exp(-1.0) + 1.0)) < 1e-12;
  defense::CreditLedger ledger(2);
  ledger.Update({{0, 0.0}}, 0.5);
  ledger.Update({{0, 0.7}}, 0.8);
  ok &= std::abs(ledger.at(0) - 0.54) < 1e-12;
  defense::CreditLedger flat(2);
  const ClientMap w = defense::ComputeWeights(flat, {{0, 0.25}, {1, 0.75}});
  ok &= std::abs(w.at(0) - 0.25) < 1e-12 && std::abs(w.at(1) - 0.75) < 1e-12;
  defense::DefenseConfig cfg;
  cfg = cfg.Resolved(4, 10);
  const auto outcome = defense::AdaptiveFilter({{0, 0.6}, {1, 0.2}, {2, 0.15}, {3, 0.05}}, 10, cfg);
  ok &= outcome.dropped_by_gap == std::vector<defense::ClientId>{0};
  return {"defense-closed-forms", ok, ok ? "softmax, credit, weights, gap rule" : "mismatch"};
}

CheckResult GradientCheck(std::uint64_t seed) {
  sim::Dataset d;
  d.features = 5;
  d.classes = 3;
  Prng rng(Prng::DeriveSeed(seed, "verify-gradient"));
  for (int i = 0; i < 12; ++i) {
    d.x.push_back(Random(rng, d.features));
    d.labels.push_back(i % 3);
  }
  std::vector<std::size_t> batch(d.size());
  std::iota(batch.begin(), batch.end(), 0);
  double worst = 0;
  for (auto kind : {sim::ModelKind::kLogistic, sim::ModelKind::kMlp}) {
    sim::Model m = sim::Model::Random(kind, d.features, d.classes, 4, seed);
    const auto g = m.Gradient(d, batch);
    for (std::size_t k = 0; k < m.size(); ++k) {
      const double h = 1e-6, keep = m.weights()[k];
      m.mutable_weights()[k] = keep + h;
      const double up = m.Loss(d, batch);
      m.mutable_weights()[k] = keep - h;
      const double down = m.Loss(d, batch);
      m.mutable_weights()[k] = keep;
      worst = std::max(worst, std::abs((up - down) / (2 * h) - g[k]));
    }
  }
  return {"model-gradient-finite-difference", worst < 1e-6, Fmt("max_abs_error", worst)};
}

}  // namespace

std::vector<CheckResult> RunVerifySuites(std::uint64_t seed) {
  std::vector<CheckResult> out;
  auto guard = [&out](const std::string& name, const std::function<CheckResult()>& fn) {
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      out.push_back({name, false, std::string("threw: ") + e.what()});
    }
  };
  guard("ring-mul-vs-schoolbook", [&] { return RingOracle(seed); });
  const Keys desk = MakeKeys("desk-128bit", seed);
  guard("threshold-round-trip", [&] { return RoundTrip(desk, seed); });
  guard("homomorphic-add-mult", [&] { return Homomorphic(desk, seed); });
  guard("key-shares-reassemble", [&] { return SharesReassemble(desk); });
  guard("esec-judge-and-cos", [&] { return SecureOps(desk, seed); });
  guard("shieldfl-reconstruction", [&] { return Reconstruction(seed); });
  guard("defense-closed-forms", [] { return DefenseClosedForms(); });
  guard("model-gradient-finite-difference", [&] { return GradientCheck(seed); });
  return out;
}

nlohmann::ordered_json VerifyReportJson(const std::vector<CheckResult>& checks) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& c : checks) j.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return j;
}

}  // namespace pbfl::harness
