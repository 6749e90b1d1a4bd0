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

#include "pbfl/fhe/modular.h"

#include <string>

#include "pbfl/common/error.h"

namespace pbfl::fhe {

u64 PowMod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = MulMod(result, base, m);
    base = MulMod(base, base, m);
    exp >>= 1;
  }
  return result;
}

u64 InvMod(u64 a, u64 m) {
  if (a % m == 0) throw InvalidArgument("InvMod: zero has no inverse");
  return PowMod(a, m - 2, m);
}

bool IsPrime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = PowMod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = MulMod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

u64 MinimalPrimitiveRoot(u64 p, u64 two_n) {
  if ((p - 1) % two_n != 0) {
    throw InvalidArgument("prime " + std::to_string(p) +
                          " is not 1 mod " + std::to_string(two_n));
  }
  const u64 cofactor = (p - 1) / two_n;
  for (u64 g = 2; g < p; ++g) {
    u64 root = PowMod(g, cofactor, p);
    // Order divides 2n (a power of two); it is exactly 2n iff root^n = -1.
    if (PowMod(root, two_n / 2, p) == p - 1) return root;
  }
  throw InternalError("no primitive root found");
}

int BitLength(u128 x) {
  int bits = 0;
  while (x != 0) {
    ++bits;
    x >>= 1;
  }
  return bits;
}

}  // namespace pbfl::fhe
