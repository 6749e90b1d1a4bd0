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

#include "pbfl/shieldfl/seccos_emulation.h"

#include <cmath>

#include "pbfl/common/error.h"

namespace pbfl::shieldfl {

namespace {

double Cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  if (na == 0 || nb == 0) return 0;
  return dot / std::sqrt(na * nb);
}

}  // namespace

SecCosRun EmulateSecCosBaseline(const Matrix& gradients, const std::vector<double>& prev_global,
                                protocols::Transport& t, std::uint64_t seed,
                                const ViewOptions& options) {
  using protocols::Direction;
  SecCosRun run;
  run.view = SimulateShieldFlView(gradients, prev_global, seed, options);
  const std::size_t l = run.view.l;
  for (std::size_t i = 0; i < gradients.size(); ++i) {
    const std::uint64_t inv = t.BeginInvocation(kSecCosProtocol);
    t.SendOpaque(inv, Direction::kS1ToS2, protocols::tag::kSecCosMaskedInputs,
                 4 * l * kPaillierUnitBytes);
    t.SendOpaque(inv, Direction::kS2ToS1, protocols::tag::kSecCosPartialProducts, kPaillierUnitBytes);
    t.SendOpaque(inv, Direction::kS1ToS2, protocols::tag::kSecCosMaskedProduct,
                 2 * kPaillierUnitBytes);
    t.SendOpaque(inv, Direction::kS2ToS1, protocols::tag::kSecCosResult, kPaillierUnitBytes);
    run.cosines.push_back(Cosine(gradients[i], prev_global));
  }
  return run;
}

}  // namespace pbfl::shieldfl
