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

#ifndef PBFL_COMMON_PRNG_H_
#define PBFL_COMMON_PRNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace pbfl {

// Seeded pseudorandom stream. Child streams are derived from the *seed* of the
// parent plus a label, never from its consumed state, so every party's stream
// is reproducible from (master seed, label path) regardless of call order.
class Prng {
 public:
  explicit Prng(std::uint64_t seed);

  // splitmix64 finalizer over (parent, label, index).
  static std::uint64_t DeriveSeed(std::uint64_t parent, std::string_view label,
                                  std::uint64_t index = 0);

  Prng Fork(std::string_view label, std::uint64_t index = 0) const {
    return Prng(DeriveSeed(seed_, label, index));
  }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t NextU64() { return engine_(); }
  // Uniform in [0, bound).
  std::uint64_t UniformBelow(std::uint64_t bound);
  double Uniform01();
  double UniformReal(double lo, double hi);
  double Normal(double mean, double stddev);
  double Gamma(double shape);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace pbfl

#endif  // PBFL_COMMON_PRNG_H_
