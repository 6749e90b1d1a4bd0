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

#ifndef PBFL_FHE_PARAMS_H_
#define PBFL_FHE_PARAMS_H_

#include <cstddef>
#include <string>
#include <vector>

#include "pbfl/fhe/modular.h"

namespace pbfl::fhe {

// Public parameters of the leveled scheme. The ciphertext modulus is the
// product of a two-prime chain q = q0 * q1; a fresh ciphertext lives at
// level 1 (mod q) and drops to level 0 (mod q0) after one multiplication and
// rescale by q1. The encoding scale equals q1, so rescaling a product of two
// fresh ciphertexts returns exactly to the encoding scale.
struct RingParams {
  std::string preset;
  std::size_t n = 0;            // ring dimension, power of two
  std::vector<u64> chain;       // {q0, q1}
  u64 special_prime = 0;        // P, used only inside evaluation keys
  double delta = 0;             // encoding scale
  double sigma_err = 0;         // discrete Gaussian width for fresh errors
  int secret_weight = 0;        // nonzero count of the ternary secret
  double sigma_smudge = 0;      // partial-decryption noise width
  double plain_scale = 0;       // fixed-point scale for plaintext scalars

  std::size_t slots() const { return n / 2; }
  int max_level() const { return static_cast<int>(chain.size()) - 1; }
  // Product of chain[0..level].
  u128 Modulus(int level) const;
  u128 q() const { return Modulus(max_level()); }
  int q_bits() const { return BitLength(q()); }

  // Throws InvalidArgument when a structural invariant is violated.
  void Validate() const;
};

// Known presets: "test-tiny" (n = 16) and "desk-128bit" (n = 2048, 56-bit q).
RingParams Setup(const std::string& preset);

std::vector<std::string> PresetNames();

// Tolerances the rest of the library checks against.
inline constexpr double kEncodeEps = 1.0 / (1 << 20);
inline constexpr double kDecEps = 1.0 / (1 << 15);
inline constexpr double kMultEps = 1.0 / (1 << 10);

}  // namespace pbfl::fhe

#endif  // PBFL_FHE_PARAMS_H_
