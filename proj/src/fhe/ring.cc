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

#include "pbfl/fhe/ring.h"

#include <algorithm>
#include <cmath>

#include "pbfl/common/error.h"

namespace pbfl::fhe {

namespace {

// Garner constants for one basis: inverse of the running product modulo each
// subsequent prime.
struct GarnerPlan {
  std::vector<u64> primes;
  std::vector<u64> inv_prefix;  // inv_prefix[j] = (p_0 ... p_{j-1})^{-1} mod p_j
  u128 modulus = 1;
};

GarnerPlan MakePlan(const std::vector<u64>& primes) {
  GarnerPlan plan;
  plan.primes = primes;
  plan.inv_prefix.assign(primes.size(), 1);
  u128 running = 1;
  for (std::size_t j = 0; j < primes.size(); ++j) {
    if (j > 0) plan.inv_prefix[j] = InvMod(static_cast<u64>(running % primes[j]), primes[j]);
    running *= primes[j];
  }
  plan.modulus = running;
  return plan;
}

u128 GarnerCompose(const GarnerPlan& plan, const std::vector<std::vector<u64>>& res,
                   std::size_t k) {
  u128 x = res[0][k];
  u128 running = plan.primes[0];
  for (std::size_t j = 1; j < plan.primes.size(); ++j) {
    const u64 p = plan.primes[j];
    const u64 x_mod = static_cast<u64>(x % p);
    const u64 t = MulMod(SubMod(res[j][k], x_mod, p), plan.inv_prefix[j], p);
    x += static_cast<u128>(t) * running;
    running *= p;
  }
  return x;
}

}  // namespace

Ring::Ring(const RingParams& params) : params_(params) {
  params_.Validate();
  primes_ = {params_.chain[0], params_.chain[1], params_.special_prime};
  ntt_.reserve(primes_.size());
  for (u64 p : primes_) ntt_.emplace_back(p, params_.n);
}

Basis Ring::LevelBasis(int level) const {
  if (level < 0 || level > params_.max_level()) throw InvalidArgument("level out of range");
  Basis b;
  for (int i = 0; i <= level; ++i) b.push_back(i);
  return b;
}

Basis Ring::ExtendedBasis() const { return {kPrimeQ0, kPrimeQ1, kPrimeSpecial}; }

u128 Ring::BasisModulus(const Basis& basis) const {
  u128 m = 1;
  for (int i : basis) m *= primes_[i];
  return m;
}

RingElement Ring::Zero(const Basis& basis) const {
  RingElement r;
  r.basis = basis;
  r.residues.assign(basis.size(), std::vector<u64>(n(), 0));
  return r;
}

RingElement Ring::FromSigned(std::span<const i64> coeffs, const Basis& basis) const {
  if (coeffs.size() != n()) throw InvalidArgument("coefficient count must equal n");
  RingElement r = Zero(basis);
  for (std::size_t b = 0; b < basis.size(); ++b) {
    const u64 p = primes_[basis[b]];
    for (std::size_t k = 0; k < n(); ++k) r.residues[b][k] = ReduceSigned(coeffs[k], p);
  }
  return r;
}

RingElement Ring::FromComposed(std::span<const u128> coeffs, const Basis& basis) const {
  if (coeffs.size() != n()) throw InvalidArgument("coefficient count must equal n");
  const u128 modulus = BasisModulus(basis);
  RingElement r = Zero(basis);
  for (std::size_t k = 0; k < n(); ++k) {
    if (coeffs[k] >= modulus) throw InvalidArgument("coefficient not reduced");
  }
  for (std::size_t b = 0; b < basis.size(); ++b) {
    const u64 p = primes_[basis[b]];
    for (std::size_t k = 0; k < n(); ++k) r.residues[b][k] = static_cast<u64>(coeffs[k] % p);
  }
  return r;
}

std::vector<u128> Ring::Compose(const RingElement& a) const {
  std::vector<u64> ps;
  for (int i : a.basis) ps.push_back(primes_[i]);
  const GarnerPlan plan = MakePlan(ps);
  std::vector<u128> out(a.n());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = GarnerCompose(plan, a.residues, k);
  return out;
}

std::vector<i128> Ring::ComposeCentered(const RingElement& a) const {
  const u128 modulus = BasisModulus(a.basis);
  const u128 half = modulus / 2;
  std::vector<u128> raw = Compose(a);
  std::vector<i128> out(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) {
    out[k] = raw[k] > half ? static_cast<i128>(raw[k]) - static_cast<i128>(modulus)
                           : static_cast<i128>(raw[k]);
  }
  return out;
}

void Ring::CheckSameBasis(const RingElement& a, const RingElement& b) const {
  if (a.basis != b.basis) throw InvalidArgument("ring elements live in different bases");
  if (a.n() != n() || b.n() != n()) throw InvalidArgument("ring element has wrong dimension");
}

RingElement Ring::Add(const RingElement& a, const RingElement& b) const {
  RingElement r = a;
  AddInPlace(r, b);
  return r;
}

void Ring::AddInPlace(RingElement& acc, const RingElement& b) const {
  CheckSameBasis(acc, b);
  for (std::size_t i = 0; i < acc.basis.size(); ++i) {
    const u64 p = primes_[acc.basis[i]];
    for (std::size_t k = 0; k < n(); ++k) {
      acc.residues[i][k] = AddMod(acc.residues[i][k], b.residues[i][k], p);
    }
  }
}

RingElement Ring::Sub(const RingElement& a, const RingElement& b) const {
  CheckSameBasis(a, b);
  RingElement r = a;
  for (std::size_t i = 0; i < a.basis.size(); ++i) {
    const u64 p = primes_[a.basis[i]];
    for (std::size_t k = 0; k < n(); ++k) {
      r.residues[i][k] = SubMod(a.residues[i][k], b.residues[i][k], p);
    }
  }
  return r;
}

RingElement Ring::Neg(const RingElement& a) const {
  RingElement r = a;
  for (std::size_t i = 0; i < a.basis.size(); ++i) {
    const u64 p = primes_[a.basis[i]];
    for (auto& c : r.residues[i]) c = NegMod(c, p);
  }
  return r;
}

void Ring::MulResidues(std::span<const u64> a, std::span<const u64> b, std::span<u64> out,
                       int prime_index, bool force_schoolbook) const {
  const u64 p = primes_[prime_index];
  const std::size_t len = n();
  if (uses_ntt() && !force_schoolbook) {
    std::vector<u64> fa(a.begin(), a.end()), fb(b.begin(), b.end());
    ntt_[prime_index].Forward(fa);
    ntt_[prime_index].Forward(fb);
    for (std::size_t k = 0; k < len; ++k) fa[k] = MulMod(fa[k], fb[k], p);
    ntt_[prime_index].Inverse(fa);
    std::copy(fa.begin(), fa.end(), out.begin());
    return;
  }
  std::vector<u64> acc(len, 0);
  for (std::size_t i = 0; i < len; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < len; ++j) {
      const u64 prod = MulMod(a[i], b[j], p);
      const std::size_t idx = i + j;
      if (idx < len) {
        acc[idx] = AddMod(acc[idx], prod, p);
      } else {
        acc[idx - len] = SubMod(acc[idx - len], prod, p);
      }
    }
  }
  std::copy(acc.begin(), acc.end(), out.begin());
}

RingElement Ring::Mul(const RingElement& a, const RingElement& b) const {
  CheckSameBasis(a, b);
  RingElement r = Zero(a.basis);
  for (std::size_t i = 0; i < a.basis.size(); ++i) {
    MulResidues(a.residues[i], b.residues[i], r.residues[i], a.basis[i]);
  }
  return r;
}

RingElement Ring::MulSigned(const RingElement& a, i64 scalar) const {
  RingElement r = a;
  for (std::size_t i = 0; i < a.basis.size(); ++i) {
    const u64 p = primes_[a.basis[i]];
    const u64 s = ReduceSigned(scalar, p);
    for (auto& c : r.residues[i]) c = MulMod(c, s, p);
  }
  return r;
}

RingElement Ring::Restrict(const RingElement& a, const Basis& target) const {
  if (target.size() > a.basis.size() || !std::equal(target.begin(), target.end(), a.basis.begin())) {
    throw InvalidArgument("target basis is not a prefix of the element basis");
  }
  RingElement r;
  r.basis = target;
  r.residues.assign(a.residues.begin(), a.residues.begin() + target.size());
  return r;
}

RingElement Ring::Extend(const RingElement& a, const Basis& target) const {
  const std::vector<i128> centered = ComposeCentered(a);
  RingElement r = Zero(target);
  for (std::size_t b = 0; b < target.size(); ++b) {
    const u64 p = primes_[target[b]];
    for (std::size_t k = 0; k < n(); ++k) r.residues[b][k] = ReduceSigned(centered[k], p);
  }
  return r;
}

RingElement Ring::DivRoundByLast(const RingElement& a) const {
  if (a.basis.size() < 2) throw FailedPrecondition("cannot drop the only prime of a basis");
  const std::size_t last = a.basis.size() - 1;
  const u64 p_last = primes_[a.basis[last]];
  const u64 half = p_last / 2;
  RingElement r;
  r.basis.assign(a.basis.begin(), a.basis.end() - 1);
  r.residues.resize(last);
  // floor((a + half) / p_last) computed residue-wise.
  std::vector<u64> shifted(n());
  for (std::size_t k = 0; k < n(); ++k) shifted[k] = AddMod(a.residues[last][k], half, p_last);
  for (std::size_t b = 0; b < last; ++b) {
    const u64 p = primes_[a.basis[b]];
    const u64 inv = InvMod(p_last % p, p);
    const u64 half_mod = half % p;
    auto& out = r.residues[b];
    out.resize(n());
    for (std::size_t k = 0; k < n(); ++k) {
      const u64 num = SubMod(AddMod(a.residues[b][k], half_mod, p), shifted[k] % p, p);
      out[k] = MulMod(num, inv, p);
    }
  }
  return r;
}

RingElement Ring::SampleUniform(Prng& rng, const Basis& basis) const {
  RingElement r = Zero(basis);
  for (std::size_t b = 0; b < basis.size(); ++b) {
    const u64 p = primes_[basis[b]];
    for (auto& c : r.residues[b]) c = rng.UniformBelow(p);
  }
  return r;
}

RingElement Ring::SampleGaussian(Prng& rng, double sigma, const Basis& basis) const {
  std::vector<i64> coeffs(n());
  for (auto& c : coeffs) c = static_cast<i64>(std::llround(rng.Normal(0.0, sigma)));
  return FromSigned(coeffs, basis);
}

std::vector<i64> Ring::SampleTernaryCoeffs(Prng& rng, int weight) const {
  std::vector<i64> coeffs(n(), 0);
  int placed = 0;
  while (placed < weight) {
    const std::size_t idx = rng.UniformBelow(n());
    if (coeffs[idx] != 0) continue;
    coeffs[idx] = rng.UniformBelow(2) == 0 ? 1 : -1;
    ++placed;
  }
  return coeffs;
}

RingElement Ring::SampleTernary(Prng& rng, int weight, const Basis& basis) const {
  return FromSigned(SampleTernaryCoeffs(rng, weight), basis);
}

std::vector<u64> SchoolbookNegacyclic(std::span<const u64> a, std::span<const u64> b, u64 modulus) {
  const std::size_t len = a.size();
  std::vector<u128> pos(len, 0), neg(len, 0);
  for (std::size_t i = 0; i < len; ++i) {
    for (std::size_t j = 0; j < len; ++j) {
      const u128 prod = static_cast<u128>(a[i]) * b[j] % modulus;
      if (i + j < len) {
        pos[i + j] = (pos[i + j] + prod) % modulus;
      } else {
        neg[i + j - len] = (neg[i + j - len] + prod) % modulus;
      }
    }
  }
  std::vector<u64> out(len);
  for (std::size_t k = 0; k < len; ++k) {
    out[k] = static_cast<u64>((pos[k] + modulus - neg[k]) % modulus);
  }
  return out;
}

}  // namespace pbfl::fhe
