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

#ifndef PBFL_SIM_DATASET_H_
#define PBFL_SIM_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace pbfl::sim {

struct Dataset {
  std::size_t features = 0;
  std::size_t classes = 0;
  std::vector<std::vector<double>> x;
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  // Rows `indices` in order.
  Dataset Subset(const std::vector<std::size_t>& indices) const;
  std::vector<std::size_t> LabelHistogram() const;
};

// CSV with a header row; the column named `label` holds integer class ids,
// every other column is a numeric feature multiplied by `feature_scale`.
// Class count is max label + 1.
Dataset LoadCsv(const std::string& path, double feature_scale = 1.0);

// Two Gaussian blobs at +-separation/2 along a random unit direction.
Dataset SyntheticGaussians(std::size_t examples, std::size_t features, double separation,
                           std::uint64_t seed);

// Shuffled split; the second part holds round(test_fraction * size) rows.
std::pair<Dataset, Dataset> TrainTestSplit(const Dataset& d, double test_fraction, std::uint64_t seed);

}  // namespace pbfl::sim

#endif  // PBFL_SIM_DATASET_H_
