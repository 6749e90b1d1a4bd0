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

#ifndef PBFL_FHE_ENCRYPTED_GRADIENT_H_
#define PBFL_FHE_ENCRYPTED_GRADIENT_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pbfl/fhe/scheme.h"

namespace pbfl::fhe {

// A flattened gradient of length original_len split into ceil(len / slots)
// zero-padded chunks, one ciphertext each.
struct EncryptedGradient {
  std::vector<Ciphertext> chunks;
  std::size_t original_len = 0;

  std::size_t tau() const { return chunks.size(); }
};

std::size_t ChunkCount(std::size_t len, std::size_t slots);

double L2Norm(std::span<const double> v);
// Throws InvalidArgument for a zero or non-finite vector.
std::vector<double> Normalized(std::span<const double> v);

// Encrypts `values` as-is (no normalization).
EncryptedGradient ChunkEncrypt(const FheContext& ctx, const PublicKey& pk,
                               std::span<const double> values, std::uint64_t seed);
// Normalizes to unit L2 norm, then chunks and encrypts.
EncryptedGradient NormalizeChunkEncrypt(const FheContext& ctx, const PublicKey& pk,
                                        std::span<const double> gradient, std::uint64_t seed);

// Chunk-wise helpers used by aggregation and tests.
EncryptedGradient AddGradients(const FheContext& ctx, const EncryptedGradient& a,
                               const EncryptedGradient& b);
EncryptedGradient ScaleGradient(const FheContext& ctx, const EncryptedGradient& a, double scalar);
std::vector<double> DecryptGradient(const FheContext& ctx, const SecretKey& sk,
                                    const EncryptedGradient& g);

}  // namespace pbfl::fhe

#endif  // PBFL_FHE_ENCRYPTED_GRADIENT_H_
