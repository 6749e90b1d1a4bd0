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

#ifndef PBFL_FHE_ENCODER_H_
#define PBFL_FHE_ENCODER_H_

#include <complex>
#include <span>
#include <vector>

#include "pbfl/fhe/ring.h"

namespace pbfl::fhe {

struct Plaintext {
  RingElement poly;
  double scale = 0;
};

// Canonical-embedding encoder with real-only packing: slot j holds the value
// of m(X)/scale at the root xi^(5^j), xi = exp(i*pi/n), for j < n/2.
class Encoder {
 public:
  explicit Encoder(const Ring& ring);

  std::size_t slots() const { return slots_; }

  // Zero-pads `values` to the slot count. Throws on oversize or non-finite
  // input, or when a coefficient would not fit the level modulus.
  Plaintext Encode(std::span<const double> values, double scale, int level) const;
  std::vector<double> Decode(const Plaintext& pt) const;

  // Slot values of an integer polynomial given in centered form.
  std::vector<double> DecodeCentered(std::span<const i128> coeffs, double scale) const;

 private:
  void SpecialFft(std::vector<std::complex<double>>& vals) const;
  void SpecialFftInv(std::vector<std::complex<double>>& vals) const;

  const Ring& ring_;
  std::size_t slots_;
  std::size_t two_n_;
  std::vector<std::complex<double>> root_pows_;  // exp(2*pi*i*k/2n), k <= 2n
  std::vector<std::size_t> rot_group_;           // 5^j mod 2n
};

}  // namespace pbfl::fhe

#endif  // PBFL_FHE_ENCODER_H_
