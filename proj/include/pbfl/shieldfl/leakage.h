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

#ifndef PBFL_SHIELDFL_LEAKAGE_H_
#define PBFL_SHIELDFL_LEAKAGE_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace pbfl::shieldfl {

using Matrix = std::vector<std::vector<double>>;

// What S2 obtains after decrypting the baseline-finding requests of the
// original cosine protocol: row i of both matrices carries the same noise row.
struct ShieldFlView {
  std::size_t n = 0;
  std::size_t l = 0;
  Matrix masked_locals;  // x_ij + r_ij
  Matrix masked_global;  // y_j + r_ij
  std::uint64_t noise_seed = 0;
};

struct DiffMatrix {
  std::vector<Matrix> pair;  // pair[i][j] = g_i - g_j
  Matrix global;             // global[i] = g_i - y
};

enum class AnchorKind { kKnownClient, kKnownGlobal };

const char* AnchorKindName(AnchorKind kind);

struct ReconstructionResult {
  Matrix recovered;
  AnchorKind anchor_kind = AnchorKind::kKnownClient;
  std::size_t anchor_index = 0;  // meaningful for kKnownClient
  double max_abs_error = -1;     // filled by ScoreAgainst; -1 when unscored
};

struct ViewOptions {
  // Noise is uniform in [-noise_range, noise_range]. Zero gives an unmasked
  // view (test hook). The default keeps double rounding on the differences
  // far below 1e-12 while dwarfing unit-scale gradients.
  double noise_range = 256.0;
};

ShieldFlView SimulateShieldFlView(const Matrix& gradients, const std::vector<double>& prev_global,
                                  std::uint64_t seed, const ViewOptions& options = {});

// Uses only the masked matrices.
DiffMatrix DeriveDifferences(const ShieldFlView& view);

// anchor_index is ignored for kKnownGlobal.
ReconstructionResult ReconstructGradients(const DiffMatrix& diffs, AnchorKind kind,
                                          std::size_t anchor_index,
                                          const std::vector<double>& anchor_value);

// Fills max_abs_error against the ground truth and returns it.
double ScoreAgainst(ReconstructionResult& result, const Matrix& truth);

// Largest |entry| of a matrix; the "gradient scale" of an instance.
double MaxAbs(const Matrix& m);

// {n, l, anchor_kind, max_abs_error, recovered_preview}
nlohmann::ordered_json AttackReportJson(const ReconstructionResult& result, std::size_t preview = 4);

// Builds the same view layout from what S2 observes in the enhanced norm
// check: per-client slot vectors of g_i^2 + fresh mask and, for each i, a
// separate observation involving the reference gradient. Lets the same
// reconstruction pipeline run against the fixed protocol.
ShieldFlView ViewFromObservations(const Matrix& client_slots, const Matrix& reference_slots,
                                  std::size_t l);

}  // namespace pbfl::shieldfl

#endif  // PBFL_SHIELDFL_LEAKAGE_H_
