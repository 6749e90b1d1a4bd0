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

#ifndef PBFL_PROTOCOLS_SECURE_OPS_H_
#define PBFL_PROTOCOLS_SECURE_OPS_H_

#include <cstddef>

#include "pbfl/protocols/endpoints.h"
#include "pbfl/protocols/transport.h"

namespace pbfl::protocols {

inline constexpr double kJudgeTol = 1e-3;
inline constexpr double kCosEps = 1e-3;

inline constexpr const char* kJudgeProtocol = "esec_judge";
inline constexpr const char* kCosProtocol = "esec_cos";

struct JudgeVerdict {
  double sum = 0;  // squared L2 norm recovered by S1
  bool accepted = false;
  double tolerance = kJudgeTol;
};

struct CosineResult {
  double value = 0;
  std::size_t chunk_count = 0;
};

// Norm check. S1 squares every chunk, masks each square with a fresh
// polynomial, partially decrypts, and ships all pairs in one message. S2
// completes decryption and replies with the sum of all masked slot values.
// S1 strips the masks and compares to 1. Two messages per call.
JudgeVerdict EsecJudge(ServerS1& s1, ServerS2& s2, Transport& t, const fhe::EncryptedGradient& g,
                       double tolerance = kJudgeTol);

// Cosine of two unit-norm gradients. Both must have passed EsecJudge
// (S1 tracks this); otherwise FailedPrecondition. Two messages per call.
CosineResult EsecCos(ServerS1& s1, ServerS2& s2, Transport& t, const fhe::EncryptedGradient& a,
                     const fhe::EncryptedGradient& b);

// The same exchange without the unit-norm precondition: returns <a, b>.
CosineResult EsecInner(ServerS1& s1, ServerS2& s2, Transport& t, const fhe::EncryptedGradient& a,
                       const fhe::EncryptedGradient& b);

}  // namespace pbfl::protocols

#endif  // PBFL_PROTOCOLS_SECURE_OPS_H_
