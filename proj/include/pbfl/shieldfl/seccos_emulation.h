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

#ifndef PBFL_SHIELDFL_SECCOS_EMULATION_H_
#define PBFL_SHIELDFL_SECCOS_EMULATION_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pbfl/protocols/transport.h"
#include "pbfl/shieldfl/leakage.h"

namespace pbfl::shieldfl {

inline constexpr const char* kSecCosProtocol = "shieldfl_seccos";

// Byte size of one ciphertext or one partial decryption under a two-trapdoor
// Paillier scheme with a 2048-bit modulus (elements of Z_{N^2}).
inline constexpr std::size_t kPaillierUnitBytes = 512;

struct SecCosRun {
  ShieldFlView view;
  std::vector<double> cosines;  // plaintext cos(g_i, y), what S1 ends up with
};

// Emulates ShieldFL's baseline-finding SecCos for every client against the
// previous global gradient. The values S2 decrypts are produced by
// SimulateShieldFlView; each invocation logs the four messages of the
// original protocol with Paillier-sized bodies:
//   S1->S2  masked inputs: 2l ciphertexts plus 2l partial decryptions
//   S2->S1  encrypted masked products
//   S1->S2  demasked product with S1's partial decryption
//   S2->S1  encrypted cosine
SecCosRun EmulateSecCosBaseline(const Matrix& gradients, const std::vector<double>& prev_global,
                                protocols::Transport& t, std::uint64_t seed,
                                const ViewOptions& options = {});

}  // namespace pbfl::shieldfl

#endif  // PBFL_SHIELDFL_SECCOS_EMULATION_H_
