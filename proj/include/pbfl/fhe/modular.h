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

#ifndef PBFL_FHE_MODULAR_H_
#define PBFL_FHE_MODULAR_H_

#include <cstdint>

namespace pbfl::fhe {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

// All single-prime arithmetic assumes moduli below 2^62.
inline u64 AddMod(u64 a, u64 b, u64 m) {
  u64 s = a + b;
  return s >= m ? s - m : s;
}

inline u64 SubMod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + m - b; }

inline u64 NegMod(u64 a, u64 m) { return a == 0 ? 0 : m - a; }

inline u64 MulMod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

// Reduces a signed value into [0, m).
inline u64 ReduceSigned(i128 x, u64 m) {
  i128 r = x % static_cast<i128>(m);
  if (r < 0) r += m;
  return static_cast<u64>(r);
}

// Shoup precomputation: floor(w * 2^64 / m).
inline u64 ShoupPrecompute(u64 w, u64 m) {
  return static_cast<u64>((static_cast<u128>(w) << 64) / m);
}

inline u64 MulModShoup(u64 a, u64 w, u64 w_shoup, u64 m) {
  u64 q = static_cast<u64>((static_cast<u128>(a) * w_shoup) >> 64);
  u64 r = a * w - q * m;
  return r >= m ? r - m : r;
}

u64 PowMod(u64 base, u64 exp, u64 m);
u64 InvMod(u64 a, u64 m);  // m prime, a != 0 mod m
bool IsPrime(u64 n);       // deterministic for 64-bit inputs

// A primitive (2n)-th root of unity modulo prime p, the smallest one found by
// scanning candidate generators. Requires p = 1 mod 2n.
u64 MinimalPrimitiveRoot(u64 p, u64 two_n);

int BitLength(u128 x);

}  // namespace pbfl::fhe

#endif  // PBFL_FHE_MODULAR_H_
