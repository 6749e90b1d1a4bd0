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

#include "pbfl/fhe/encrypted_gradient.h"

#include <cmath>

#include "pbfl/common/error.h"
#include "pbfl/common/prng.h"

namespace pbfl::fhe {

std::size_t ChunkCount(std::size_t len, std::size_t slots) { return (len + slots - 1) / slots; }

double L2Norm(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<double> Normalized(std::span<const double> v) {
  const double norm = L2Norm(v);
  if (!(norm > 0) || !std::isfinite(norm)) throw InvalidArgument("cannot normalize a zero vector");
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x /= norm;
  return out;
}

EncryptedGradient ChunkEncrypt(const FheContext& ctx, const PublicKey& pk,
                               std::span<const double> values, std::uint64_t seed) {
  if (values.empty()) throw InvalidArgument("empty gradient");
  const std::size_t slots = ctx.slots();
  EncryptedGradient out;
  out.original_len = values.size();
  const std::size_t tau = ChunkCount(values.size(), slots);
  out.chunks.reserve(tau);
  for (std::size_t j = 0; j < tau; ++j) {
    const std::size_t begin = j * slots;
    const std::size_t len = std::min(slots, values.size() - begin);
    out.chunks.push_back(
        EncryptVector(ctx, pk, values.subspan(begin, len), Prng::DeriveSeed(seed, "chunk", j)));
  }
  return out;
}

EncryptedGradient NormalizeChunkEncrypt(const FheContext& ctx, const PublicKey& pk,
                                        std::span<const double> gradient, std::uint64_t seed) {
  const std::vector<double> unit = Normalized(gradient);
  return ChunkEncrypt(ctx, pk, unit, seed);
}

EncryptedGradient AddGradients(const FheContext& ctx, const EncryptedGradient& a,
                               const EncryptedGradient& b) {
  if (a.tau() != b.tau() || a.original_len != b.original_len) {
    throw InvalidArgument("chunk count mismatch");
  }
  EncryptedGradient out = a;
  for (std::size_t j = 0; j < a.tau(); ++j) AddInPlace(ctx, out.chunks[j], b.chunks[j]);
  return out;
}

EncryptedGradient ScaleGradient(const FheContext& ctx, const EncryptedGradient& a, double scalar) {
  EncryptedGradient out;
  out.original_len = a.original_len;
  out.chunks.reserve(a.tau());
  for (const auto& c : a.chunks) out.chunks.push_back(MultPlain(ctx, c, scalar));
  return out;
}

std::vector<double> DecryptGradient(const FheContext& ctx, const SecretKey& sk,
                                    const EncryptedGradient& g) {
  std::vector<double> out;
  out.reserve(g.tau() * ctx.slots());
  for (const auto& c : g.chunks) {
    const std::vector<double> part = Decrypt(ctx, sk, c);
    out.insert(out.end(), part.begin(), part.end());
  }
  out.resize(g.original_len);
  return out;
}

}  // namespace pbfl::fhe
