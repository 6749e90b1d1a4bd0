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

#ifndef PBFL_FHE_SCHEME_H_
#define PBFL_FHE_SCHEME_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pbfl/fhe/keys.h"

namespace pbfl::fhe {

struct Ciphertext {
  RingElement c0, c1;
  double scale = 0;
  int depth_used = 0;

  int level() const { return static_cast<int>(c0.basis.size()) - 1; }
};

struct PartialDecryption {
  RingElement d;
  std::string holder_id;
  std::uint64_t split_id = 0;
  ShareSide side = ShareSide::kFirst;
};

// Encodes at the top level with the default scale.
Plaintext EncodeVector(const FheContext& ctx, std::span<const double> values);

Ciphertext Encrypt(const FheContext& ctx, const PublicKey& pk, const Plaintext& pt,
                   std::uint64_t seed);
Ciphertext EncryptVector(const FheContext& ctx, const PublicKey& pk,
                         std::span<const double> values, std::uint64_t seed);

Ciphertext Add(const FheContext& ctx, const Ciphertext& a, const Ciphertext& b);
void AddInPlace(const FheContext& ctx, Ciphertext& acc, const Ciphertext& b);
Ciphertext AddPlain(const FheContext& ctx, const Ciphertext& a, const Plaintext& pt);

// Tensor, relinearize with the evaluation key, then rescale by q1.
Ciphertext Mult(const FheContext& ctx, const EvalKey& evk, const Ciphertext& a,
                const Ciphertext& b);

// Multiplies by the fixed-point integer round(scalar * plain_scale); the scale
// grows by plain_scale and no ciphertext-ciphertext depth is consumed.
Ciphertext MultPlain(const FheContext& ctx, const Ciphertext& a, double scalar);

PartialDecryption PartDec(const FheContext& ctx, const SecretKeyShare& share,
                          const Ciphertext& ct, std::uint64_t seed);

// c0 + d1 + d2 in the ciphertext's basis, with the holder checks applied.
Plaintext CombinePartials(const FheContext& ctx, const Ciphertext& ct,
                          const PartialDecryption& d1, const PartialDecryption& d2);
std::vector<double> FullDec(const FheContext& ctx, const Ciphertext& ct,
                            const PartialDecryption& d1, const PartialDecryption& d2);

// Decryption with the unsplit key; used by tests and oracles only.
Plaintext DecryptToPlaintext(const FheContext& ctx, const SecretKey& sk, const Ciphertext& ct);
std::vector<double> Decrypt(const FheContext& ctx, const SecretKey& sk, const Ciphertext& ct);

}  // namespace pbfl::fhe

#endif  // PBFL_FHE_SCHEME_H_
