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

#include "pbfl/fhe/ntt.h"

#include "pbfl/common/error.h"

namespace pbfl::fhe {

namespace {

std::size_t BitReverse(std::size_t x, int bits) {
  std::size_t r = 0;
  for (int i = 0; i < bits; ++i) {
    r = (r << 1) | (x & 1);
    x >>= 1;
  }
  return r;
}

}  // namespace

NttTables::NttTables(u64 prime, std::size_t n) : p_(prime), n_(n) {
  if (n < 2 || (n & (n - 1)) != 0) throw InvalidArgument("NTT size must be a power of two");
  psi_ = MinimalPrimitiveRoot(p_, 2 * n);
  const u64 ipsi = InvMod(psi_, p_);
  int log_n = 0;
  while ((std::size_t{1} << log_n) < n) ++log_n;

  psi_rev_.resize(n);
  ipsi_rev_.resize(n);
  psi_rev_shoup_.resize(n);
  ipsi_rev_shoup_.resize(n);
  u64 pw = 1, ipw = 1;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = BitReverse(i, log_n);
    psi_rev_[r] = pw;
    ipsi_rev_[r] = ipw;
    pw = MulMod(pw, psi_, p_);
    ipw = MulMod(ipw, ipsi, p_);
  }
  for (std::size_t i = 0; i < n; ++i) {
    psi_rev_shoup_[i] = ShoupPrecompute(psi_rev_[i], p_);
    ipsi_rev_shoup_[i] = ShoupPrecompute(ipsi_rev_[i], p_);
  }
  n_inv_ = InvMod(static_cast<u64>(n % p_), p_);
  n_inv_shoup_ = ShoupPrecompute(n_inv_, p_);
}

void NttTables::Forward(std::span<u64> a) const {
  std::size_t t = n_;
  for (std::size_t m = 1; m < n_; m <<= 1) {
    t >>= 1;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j1 = 2 * i * t;
      const u64 w = psi_rev_[m + i];
      const u64 ws = psi_rev_shoup_[m + i];
      for (std::size_t j = j1; j < j1 + t; ++j) {
        const u64 u = a[j];
        const u64 v = MulModShoup(a[j + t], w, ws, p_);
        a[j] = AddMod(u, v, p_);
        a[j + t] = SubMod(u, v, p_);
      }
    }
  }
}

void NttTables::Inverse(std::span<u64> a) const {
  std::size_t t = 1;
  for (std::size_t m = n_; m > 1; m >>= 1) {
    const std::size_t h = m >> 1;
    std::size_t j1 = 0;
    for (std::size_t i = 0; i < h; ++i) {
      const u64 w = ipsi_rev_[h + i];
      const u64 ws = ipsi_rev_shoup_[h + i];
      for (std::size_t j = j1; j < j1 + t; ++j) {
        const u64 u = a[j];
        const u64 v = a[j + t];
        a[j] = AddMod(u, v, p_);
        a[j + t] = MulModShoup(SubMod(u, v, p_), w, ws, p_);
      }
      j1 += 2 * t;
    }
    t <<= 1;
  }
  for (std::size_t j = 0; j < n_; ++j) a[j] = MulModShoup(a[j], n_inv_, n_inv_shoup_, p_);
}

}  // namespace pbfl::fhe
