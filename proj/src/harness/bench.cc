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

#include "pbfl/harness/bench.h"

#include <algorithm>
#include <chrono>
#include <functional>
#include <vector>

#include "pbfl/common/bytes.h"
#include "pbfl/common/error.h"
#include "pbfl/common/prng.h"
#include "pbfl/fhe/encrypted_gradient.h"
#include "pbfl/fhe/scheme.h"
#include "pbfl/fhe/serialize.h"
#include "pbfl/protocols/secure_ops.h"
#include "pbfl/sim/setup.h"

namespace pbfl::harness {

namespace {

nlohmann::ordered_json Time(std::size_t iterations, const std::function<void(std::size_t)>& op) {
  using Clock = std::chrono::steady_clock;
  double total = 0, best = -1;
  for (std::size_t i = 0; i < iterations; ++i) {
    const auto start = Clock::now();
    op(i);
    const double us = std::chrono::duration<double, std::micro>(Clock::now() - start).count();
    total += us;
    best = best < 0 ? us : std::min(best, us);
  }
  return {{"iterations", iterations},
          {"mean_us", iterations ? total / static_cast<double>(iterations) : 0.0},
          {"min_us", std::max(best, 0.0)}};
}

}  // namespace

nlohmann::ordered_json RunCryptoBench(const std::string& preset, std::size_t iterations, std::uint64_t seed) {
  if (iterations == 0) throw InvalidArgument("bench needs at least one iteration");
  sim::Deployment d = sim::SystemSetup(1, preset, seed);
  const fhe::FheContext& ctx = *d.ctx;
  Prng rng(Prng::DeriveSeed(seed, "bench-values"));
  std::vector<double> values(ctx.slots());
  for (double& x : values) x = rng.UniformReal(-1.0, 1.0);
  const std::vector<double> unit = fhe::Normalized(values);

  const fhe::Ciphertext a = fhe::EncryptVector(ctx, d.pk, values, Prng::DeriveSeed(seed, "bench-a"));
  const fhe::Ciphertext b = fhe::EncryptVector(ctx, d.pk, values, Prng::DeriveSeed(seed, "bench-b"));
  const fhe::PartialDecryption p1 = fhe::PartDec(ctx, d.s1->key_share(), a, 1);
  const fhe::PartialDecryption p2 = fhe::PartDec(ctx, d.s2->key_share(), a, 2);
  const fhe::EncryptedGradient g = fhe::ChunkEncrypt(ctx, d.pk, unit, Prng::DeriveSeed(seed, "bench-g"));
  protocols::Transport t;
  // Warm the unit-norm mark so the cosine timing measures one exchange.
  protocols::EsecJudge(*d.s1, *d.s2, t, g);
  const auto warm_bytes = t.bytes();

  nlohmann::ordered_json ops;
  ops["encode"] = Time(iterations, [&](std::size_t) { fhe::EncodeVector(ctx, values); });
  ops["encrypt"] = Time(iterations, [&](std::size_t i) { fhe::EncryptVector(ctx, d.pk, values, 1000 + i); });
  ops["add"] = Time(iterations, [&](std::size_t) { fhe::Add(ctx, a, b); });
  ops["mult"] = Time(iterations, [&](std::size_t) { fhe::Mult(ctx, d.s1->eval_key(), a, b); });
  ops["part_dec"] = Time(iterations, [&](std::size_t i) { fhe::PartDec(ctx, d.s1->key_share(), a, 2000 + i); });
  ops["full_dec"] = Time(iterations, [&](std::size_t) { fhe::FullDec(ctx, a, p1, p2); });
  ops["esec_judge"] = Time(iterations, [&](std::size_t) { protocols::EsecJudge(*d.s1, *d.s2, t, g); });
  ops["esec_cos"] = Time(iterations, [&](std::size_t) { protocols::EsecCos(*d.s1, *d.s2, t, g, g); });

  ByteWriter w;
  fhe::WriteCiphertext(ctx, w, a);
  nlohmann::ordered_json j;
  j["preset"] = preset;
  j["ring_degree"] = ctx.params().n;
  j["slots"] = ctx.slots();
  j["ciphertext_bytes"] = w.bytes().size();
  j["judge_bytes_per_call"] = warm_bytes;
  j["operations"] = ops;
  return j;
}

}  // namespace pbfl::harness
