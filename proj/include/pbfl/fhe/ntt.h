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

#ifndef PBFL_FHE_NTT_H_
#define PBFL_FHE_NTT_H_

#include <cstddef>
#include <span>
#include <vector>

#include "pbfl/fhe/modular.h"

namespace pbfl::fhe {

// Negacyclic number-theoretic transform over Z_p[X]/(X^n + 1) using the
// merged-twist Cooley-Tukey / Gentleman-Sande butterflies. Output of Forward
// is in bit-reversed order; Inverse undoes it exactly.
class NttTables {
 public:
  NttTables(u64 prime, std::size_t n);

  void Forward(std::span<u64> a) const;
  void Inverse(std::span<u64> a) const;

  u64 prime() const { return p_; }
  std::size_t n() const { return n_; }
  u64 psi() const { return psi_; }

 private:
  u64 p_;
  std::size_t n_;
  u64 psi_;
  u64 n_inv_;
  u64 n_inv_shoup_;
  std::vector<u64> psi_rev_, psi_rev_shoup_;
  std::vector<u64> ipsi_rev_, ipsi_rev_shoup_;
};

}  // namespace pbfl::fhe

#endif  // PBFL_FHE_NTT_H_
