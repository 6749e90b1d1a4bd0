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

#ifndef PBFL_FHE_RING_H_
#define PBFL_FHE_RING_H_

#include <cstddef>
#include <span>
#include <vector>

#include "pbfl/common/prng.h"
#include "pbfl/fhe/modular.h"
#include "pbfl/fhe/ntt.h"
#include "pbfl/fhe/params.h"

namespace pbfl::fhe {

// Indices into Ring::prime(). Index order within a basis matters: the last
// prime of a basis is the one removed by DivRoundByLast.
inline constexpr int kPrimeQ0 = 0;
inline constexpr int kPrimeQ1 = 1;
inline constexpr int kPrimeSpecial = 2;

using Basis = std::vector<int>;

// Element of Z_Q[X]/(X^n + 1) in residue-number-system form, Q being the
// product of the primes named by `basis`. residues[b][k] is coefficient k
// modulo prime(basis[b]), always in canonical range.
struct RingElement {
  Basis basis;
  std::vector<std::vector<u64>> residues;

  std::size_t n() const { return residues.empty() ? 0 : residues[0].size(); }
  bool operator==(const RingElement&) const = default;
};

class Ring {
 public:
  explicit Ring(const RingParams& params);

  const RingParams& params() const { return params_; }
  std::size_t n() const { return params_.n; }
  u64 prime(int index) const { return primes_[index]; }
  bool uses_ntt() const { return params_.n >= 1024; }

  Basis LevelBasis(int level) const;
  Basis ExtendedBasis() const;  // q0, q1, P
  u128 BasisModulus(const Basis& basis) const;

  RingElement Zero(const Basis& basis) const;
  RingElement FromSigned(std::span<const i64> coeffs, const Basis& basis) const;
  RingElement FromComposed(std::span<const u128> coeffs, const Basis& basis) const;
  // CRT reconstruction to [0, Q).
  std::vector<u128> Compose(const RingElement& a) const;
  // CRT reconstruction to the centered range (-Q/2, Q/2].
  std::vector<i128> ComposeCentered(const RingElement& a) const;

  RingElement Add(const RingElement& a, const RingElement& b) const;
  RingElement Sub(const RingElement& a, const RingElement& b) const;
  RingElement Neg(const RingElement& a) const;
  RingElement Mul(const RingElement& a, const RingElement& b) const;
  RingElement MulSigned(const RingElement& a, i64 scalar) const;
  void AddInPlace(RingElement& acc, const RingElement& b) const;

  // Reduces to a sub-basis (a prefix of the element's basis).
  RingElement Restrict(const RingElement& a, const Basis& target) const;
  // Reinterprets the centered value of `a` in a larger basis.
  RingElement Extend(const RingElement& a, const Basis& target) const;
  // round(a / p_last), dropping the last prime of the basis.
  RingElement DivRoundByLast(const RingElement& a) const;

  RingElement SampleUniform(Prng& rng, const Basis& basis) const;
  RingElement SampleGaussian(Prng& rng, double sigma, const Basis& basis) const;
  RingElement SampleTernary(Prng& rng, int weight, const Basis& basis) const;
  std::vector<i64> SampleTernaryCoeffs(Prng& rng, int weight) const;

  // Per-prime product; exposed so tests can pit the transform against the
  // schoolbook path directly.
  void MulResidues(std::span<const u64> a, std::span<const u64> b, std::span<u64> out,
                   int prime_index, bool force_schoolbook = false) const;

 private:
  void CheckSameBasis(const RingElement& a, const RingElement& b) const;

  RingParams params_;
  std::vector<u64> primes_;
  std::vector<NttTables> ntt_;
};

// Negacyclic product of two integer polynomials modulo an arbitrary modulus
// below 2^64, computed with the textbook double loop. Used as an oracle.
std::vector<u64> SchoolbookNegacyclic(std::span<const u64> a, std::span<const u64> b, u64 modulus);

}  // namespace pbfl::fhe

#endif  // PBFL_FHE_RING_H_
