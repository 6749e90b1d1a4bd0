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

#ifndef PBFL_FHE_KEYS_H_
#define PBFL_FHE_KEYS_H_

#include <cstdint>
#include <memory>
#include <string>
#include <utility>

#include "pbfl/fhe/encoder.h"
#include "pbfl/fhe/ring.h"

namespace pbfl::fhe {

// Parameters, ring arithmetic and encoder bundled together. Immutable and
// shared by every party of a deployment.
class FheContext {
 public:
  explicit FheContext(const RingParams& params) : ring_(params), encoder_(ring_) {}
  FheContext(const FheContext&) = delete;
  FheContext& operator=(const FheContext&) = delete;

  const RingParams& params() const { return ring_.params(); }
  const Ring& ring() const { return ring_; }
  const Encoder& encoder() const { return encoder_; }
  std::size_t slots() const { return encoder_.slots(); }

 private:
  Ring ring_;
  Encoder encoder_;
};

std::shared_ptr<const FheContext> MakeContext(const std::string& preset);

struct SecretKey {
  RingElement s;  // ternary, stored over the extended basis
};

struct PublicKey {
  RingElement b;  // -a*s + e  (mod q)
  RingElement a;  // uniform  (mod q)
};

struct EvalKey {
  RingElement b;  // -a'*s + e' + P*s^2  (mod P*q)
  RingElement a;  // uniform  (mod P*q)
};

struct KeyMaterial {
  SecretKey sk;
  PublicKey pk;
  EvalKey evk;
};

KeyMaterial KeyGen(const FheContext& ctx, std::uint64_t seed);

enum class ShareSide : std::uint8_t { kFirst = 1, kSecond = 2 };

// One additive half of the secret key modulo q. Two shares decrypt together
// only when they come from the same split and sit on opposite sides.
struct SecretKeyShare {
  RingElement share;
  std::string holder_id;
  std::uint64_t split_id = 0;
  ShareSide side = ShareSide::kFirst;
};

std::pair<SecretKeyShare, SecretKeyShare> KeySplit(const FheContext& ctx, const SecretKey& sk,
                                                   std::uint64_t seed,
                                                   const std::string& first_holder,
                                                   const std::string& second_holder);

// Share reassembly (test and audit helper).
RingElement CombineShares(const FheContext& ctx, const SecretKeyShare& a, const SecretKeyShare& b);

}  // namespace pbfl::fhe

#endif  // PBFL_FHE_KEYS_H_
