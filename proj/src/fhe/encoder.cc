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

#include "pbfl/fhe/encoder.h"

#include <cmath>
#include <numbers>

#include "pbfl/common/error.h"

namespace pbfl::fhe {

namespace {

void BitReversePermute(std::vector<std::complex<double>>& vals) {
  const std::size_t size = vals.size();
  for (std::size_t i = 1, j = 0; i < size; ++i) {
    std::size_t bit = size >> 1;
    for (; j >= bit; bit >>= 1) j -= bit;
    j += bit;
    if (i < j) std::swap(vals[i], vals[j]);
  }
}

}  // namespace

Encoder::Encoder(const Ring& ring) : ring_(ring), slots_(ring.n() / 2), two_n_(2 * ring.n()) {
  root_pows_.resize(two_n_ + 1);
  for (std::size_t k = 0; k <= two_n_; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(two_n_);
    root_pows_[k] = {std::cos(angle), std::sin(angle)};
  }
  rot_group_.resize(slots_);
  std::size_t g = 1;
  for (std::size_t j = 0; j < slots_; ++j) {
    rot_group_[j] = g;
    g = (g * 5) % two_n_;
  }
}

void Encoder::SpecialFft(std::vector<std::complex<double>>& vals) const {
  const std::size_t size = vals.size();
  BitReversePermute(vals);
  for (std::size_t len = 2; len <= size; len <<= 1) {
    const std::size_t lenh = len >> 1;
    const std::size_t lenq = len << 2;
    const std::size_t gap = two_n_ / lenq;
    for (std::size_t i = 0; i < size; i += len) {
      for (std::size_t j = 0; j < lenh; ++j) {
        const std::size_t idx = (rot_group_[j] % lenq) * gap;
        const std::complex<double> u = vals[i + j];
        const std::complex<double> v = vals[i + j + lenh] * root_pows_[idx];
        vals[i + j] = u + v;
        vals[i + j + lenh] = u - v;
      }
    }
  }
}

void Encoder::SpecialFftInv(std::vector<std::complex<double>>& vals) const {
  const std::size_t size = vals.size();
  for (std::size_t len = size; len >= 2; len >>= 1) {
    const std::size_t lenh = len >> 1;
    const std::size_t lenq = len << 2;
    const std::size_t gap = two_n_ / lenq;
    for (std::size_t i = 0; i < size; i += len) {
      for (std::size_t j = 0; j < lenh; ++j) {
        const std::size_t idx = (lenq - (rot_group_[j] % lenq)) * gap;
        const std::complex<double> u = vals[i + j] + vals[i + j + lenh];
        const std::complex<double> v = (vals[i + j] - vals[i + j + lenh]) * root_pows_[idx];
        vals[i + j] = u;
        vals[i + j + lenh] = v;
      }
    }
  }
  BitReversePermute(vals);
  for (auto& v : vals) v /= static_cast<double>(size);
}

Plaintext Encoder::Encode(std::span<const double> values, double scale, int level) const {
  if (values.size() > slots_) throw InvalidArgument("vector longer than slot count");
  if (!(scale > 0) || !std::isfinite(scale)) throw InvalidArgument("scale must be positive");
  std::vector<std::complex<double>> vals(slots_, {0.0, 0.0});
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (!std::isfinite(values[j])) throw InvalidArgument("non-finite value in encode input");
    vals[j] = {values[j], 0.0};
  }
  SpecialFftInv(vals);

  const Basis basis = ring_.LevelBasis(level);
  const double limit = static_cast<double>(ring_.BasisModulus(basis) / 2);
  std::vector<i64> coeffs(ring_.n());
  for (std::size_t j = 0; j < slots_; ++j) {
    const double re = std::round(vals[j].real() * scale);
    const double im = std::round(vals[j].imag() * scale);
    if (std::abs(re) >= limit || std::abs(im) >= limit || std::abs(re) >= 9.0e18 ||
        std::abs(im) >= 9.0e18) {
      throw InvalidArgument("encoded coefficient exceeds the level modulus");
    }
    coeffs[j] = static_cast<i64>(re);
    coeffs[j + slots_] = static_cast<i64>(im);
  }
  return Plaintext{ring_.FromSigned(coeffs, basis), scale};
}

std::vector<double> Encoder::DecodeCentered(std::span<const i128> coeffs, double scale) const {
  std::vector<std::complex<double>> vals(slots_);
  for (std::size_t j = 0; j < slots_; ++j) {
    vals[j] = {static_cast<double>(coeffs[j]) / scale,
               static_cast<double>(coeffs[j + slots_]) / scale};
  }
  SpecialFft(vals);
  std::vector<double> out(slots_);
  for (std::size_t j = 0; j < slots_; ++j) out[j] = vals[j].real();
  return out;
}

std::vector<double> Encoder::Decode(const Plaintext& pt) const {
  const std::vector<i128> centered = ring_.ComposeCentered(pt.poly);
  return DecodeCentered(centered, pt.scale);
}

}  // namespace pbfl::fhe
