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

#ifndef PBFL_TESTS_UNIT_SERVER_FIXTURE_H_
#define PBFL_TESTS_UNIT_SERVER_FIXTURE_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pbfl/common/prng.h"
#include "pbfl/fhe/keys.h"
#include "pbfl/protocols/endpoints.h"

namespace pbfl::testing_util {

// A key pair split between two fresh servers.
struct ServerPair {
  std::shared_ptr<const fhe::FheContext> ctx;
  fhe::KeyMaterial keys;
  std::unique_ptr<protocols::ServerS1> s1;
  std::unique_ptr<protocols::ServerS2> s2;
};

inline ServerPair MakeServers(const std::string& preset, std::uint64_t seed) {
  ServerPair p;
  p.ctx = fhe::MakeContext(preset);
  p.keys = fhe::KeyGen(*p.ctx, seed);
  auto [first, second] = fhe::KeySplit(*p.ctx, p.keys.sk, seed + 1, "S1", "S2");
  p.s1 = std::make_unique<protocols::ServerS1>(p.ctx, first, p.keys.evk, seed + 2);
  p.s2 = std::make_unique<protocols::ServerS2>(p.ctx, second, seed + 3);
  return p;
}

inline std::vector<double> RandomVector(Prng& rng, std::size_t len, double lo = -1, double hi = 1) {
  std::vector<double> v(len);
  for (auto& x : v) x = rng.UniformReal(lo, hi);
  return v;
}

}  // namespace pbfl::testing_util

#endif  // PBFL_TESTS_UNIT_SERVER_FIXTURE_H_
