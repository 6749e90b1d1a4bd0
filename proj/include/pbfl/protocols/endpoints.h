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

#ifndef PBFL_PROTOCOLS_ENDPOINTS_H_
#define PBFL_PROTOCOLS_ENDPOINTS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "pbfl/fhe/encrypted_gradient.h"

namespace pbfl::protocols {

enum class Role { kS1, kS2 };

// What S2 sees while serving one request: the decrypted, still-masked
// polynomials (coefficients mod the ciphertext modulus), their slot values,
// and the scalar it returns.
struct S2Observation {
  std::string protocol;
  std::uint64_t invocation_id = 0;
  std::vector<std::vector<fhe::u64>> raw_coeffs;
  std::vector<std::vector<double>> slots;
  double reply = 0;
};

using S2Observer = std::function<void(const S2Observation&)>;

// State shared by both servers: the public context plus this server's key
// share and a seeded stream root. Neither endpoint ever stores the other's
// share.
class ServerEndpoint {
 public:
  ServerEndpoint(Role role, std::shared_ptr<const fhe::FheContext> ctx,
                 fhe::SecretKeyShare share, std::uint64_t seed);
  virtual ~ServerEndpoint() = default;

  Role role() const { return role_; }
  const fhe::FheContext& ctx() const { return *ctx_; }
  std::shared_ptr<const fhe::FheContext> context() const { return ctx_; }
  const fhe::SecretKeyShare& key_share() const { return share_; }

  // Deterministic per-use seed: (endpoint seed, label, counter).
  std::uint64_t NextSeed(const std::string& label);

 protected:
  Role role_;
  std::shared_ptr<const fhe::FheContext> ctx_;
  fhe::SecretKeyShare share_;
  std::uint64_t seed_;
  std::map<std::string, std::uint64_t> counters_;
};

class ServerS1 : public ServerEndpoint {
 public:
  ServerS1(std::shared_ptr<const fhe::FheContext> ctx, fhe::SecretKeyShare share,
           fhe::EvalKey evk, std::uint64_t seed);

  const fhe::EvalKey& eval_key() const { return evk_; }

  // sk_{s_i}: S1's half of the split paired with client i.
  void AddClientShare(std::size_t client, fhe::SecretKeyShare share);
  const fhe::SecretKeyShare& client_share(std::size_t client) const;
  std::size_t client_share_count() const { return client_shares_.size(); }

  // Uniform mask polynomial over the given basis. Every mask's digest is
  // logged; a repeat is an internal error.
  fhe::RingElement FreshMask(const fhe::Basis& basis);
  std::size_t masks_issued() const { return mask_digests_.size(); }
  bool masks_unique() const { return unique_masks_.size() == mask_digests_.size(); }
  const std::vector<std::uint64_t>& mask_digests() const { return mask_digests_; }

  // Gradients accepted by a norm check may enter cosine computations.
  void MarkUnitNorm(const fhe::EncryptedGradient& g);
  bool IsUnitNorm(const fhe::EncryptedGradient& g) const;

 private:
  fhe::EvalKey evk_;
  std::map<std::size_t, fhe::SecretKeyShare> client_shares_;
  std::vector<std::uint64_t> mask_digests_;
  std::set<std::uint64_t> unique_masks_;
  std::set<std::uint64_t> unit_norm_;
};

class ServerS2 : public ServerEndpoint {
 public:
  ServerS2(std::shared_ptr<const fhe::FheContext> ctx, fhe::SecretKeyShare share,
           std::uint64_t seed);

  void set_observer(S2Observer observer) { observer_ = std::move(observer); }

  // Completes decryption of each (ciphertext, S1 partial) pair and returns
  // the sum of all slot values of the masked plaintexts.
  double CompleteAndSum(const std::string& protocol, std::uint64_t invocation_id,
                        const std::vector<fhe::Ciphertext>& cts,
                        const std::vector<fhe::PartialDecryption>& partials);

 private:
  S2Observer observer_;
};

// Content digest of an encrypted gradient.
std::uint64_t GradientDigest(const fhe::EncryptedGradient& g);

}  // namespace pbfl::protocols

#endif  // PBFL_PROTOCOLS_ENDPOINTS_H_
