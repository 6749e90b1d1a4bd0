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

#include "pbfl/fhe/params.h"

#include <cmath>

#include "pbfl/common/error.h"

namespace pbfl::fhe {

namespace {

constexpr u64 kSpecialPrime = 1152921504606830593ULL;  // 60 bits, 1 mod 2^12

}  // namespace

u128 RingParams::Modulus(int level) const {
  if (level < 0 || level > max_level()) throw InvalidArgument("level out of range");
  u128 m = 1;
  for (int i = 0; i <= level; ++i) m *= chain[i];
  return m;
}

void RingParams::Validate() const {
  if (n < 16 || (n & (n - 1)) != 0) throw InvalidArgument("n must be a power of two >= 16");
  if (chain.size() != 2) throw InvalidArgument("modulus chain must have two primes");
  for (u64 p : chain) {
    if (!IsPrime(p) || (p - 1) % (2 * n) != 0) {
      throw InvalidArgument("chain prime " + std::to_string(p) + " is not NTT friendly");
    }
  }
  if (!IsPrime(special_prime) || (special_prime - 1) % (2 * n) != 0) {
    throw InvalidArgument("special prime is not NTT friendly");
  }
  if (BitLength(q()) + BitLength(special_prime) > 127) {
    throw InvalidArgument("P*q does not fit 127 bits");
  }
  if (!(delta > 1) || delta * delta >= static_cast<double>(q())) {
    throw InvalidArgument("delta^2 must be below q");
  }
  if (sigma_smudge < sigma_err) throw InvalidArgument("sigma_smudge < sigma_err");
  if (secret_weight <= 0 || static_cast<std::size_t>(secret_weight) > n) {
    throw InvalidArgument("secret weight out of range");
  }
  if (!(plain_scale >= 1)) throw InvalidArgument("plain_scale must be >= 1");
}

RingParams Setup(const std::string& preset) {
  RingParams p;
  p.preset = preset;
  p.special_prime = kSpecialPrime;
  p.sigma_err = 3.2;
  if (preset == "desk-128bit") {
    p.n = 2048;
    p.chain = {436051969ULL, 165236737ULL};
    p.secret_weight = 8;
    p.sigma_smudge = 2 * p.sigma_err;
    p.plain_scale = std::ldexp(1.0, 20);
  } else if (preset == "test-tiny") {
    p.n = 16;
    p.chain = {68719476577ULL, 1048193ULL};
    p.secret_weight = 8;
    p.sigma_smudge = 2 * p.sigma_err;
    p.plain_scale = std::ldexp(1.0, 20);
  } else {
    throw InvalidArgument("unknown preset '" + preset + "'");
  }
  p.delta = static_cast<double>(p.chain[1]);
  p.Validate();
  return p;
}

std::vector<std::string> PresetNames() { return {"test-tiny", "desk-128bit"}; }

}  // namespace pbfl::fhe
