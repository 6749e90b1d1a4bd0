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

#ifndef PBFL_SIM_SETUP_H_
#define PBFL_SIM_SETUP_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pbfl/protocols/endpoints.h"

namespace pbfl::sim {

// Key material after setup. The unsplit secret key is dropped once the n+1
// splits are made: (sk_1, sk_2) for S1/S2 and (sk_{s_i}, sk_{u_i}) for each
// S1/client pair. S2 holds only sk_2; client i holds only sk_{u_i}.
struct Deployment {
  std::shared_ptr<const fhe::FheContext> ctx;
  fhe::PublicKey pk;
  std::unique_ptr<protocols::ServerS1> s1;
  std::unique_ptr<protocols::ServerS2> s2;
  std::vector<fhe::SecretKeyShare> client_shares;
  std::size_t split_count = 0;
};

Deployment SystemSetup(std::size_t clients, const std::string& preset, std::uint64_t seed);

// Model-update decryption for client i: S1 contributes partial decryptions
// under sk_{s_i}, the client completes with sk_{u_i}. Returns the first
// `original_len` slots.
std::vector<double> ClientDecrypt(Deployment& d, std::size_t client, const fhe::EncryptedGradient& g,
                                  std::uint64_t seed);

}  // namespace pbfl::sim

#endif  // PBFL_SIM_SETUP_H_
