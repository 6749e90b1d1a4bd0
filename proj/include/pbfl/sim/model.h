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

#ifndef PBFL_SIM_MODEL_H_
#define PBFL_SIM_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pbfl/sim/dataset.h"

namespace pbfl::sim {

enum class ModelKind { kLogistic, kMlp };

const char* ModelKindName(ModelKind kind);
ModelKind ParseModelKind(const std::string& name);

struct Evaluation {
  double accuracy = 0;
  double loss = 0;
};

// A classifier over a flat parameter vector. Logistic layout: W (classes x
// features, row-major) then b. MLP layout: W1 (hidden x features), b1,
// W2 (classes x hidden), b2, with a tanh hidden layer.
class Model {
 public:
  Model(ModelKind kind, std::size_t features, std::size_t classes, std::size_t hidden = 0);

  // Small Gaussian initialization from the seed.
  static Model Random(ModelKind kind, std::size_t features, std::size_t classes, std::size_t hidden,
                      std::uint64_t seed);

  ModelKind kind() const { return kind_; }
  std::size_t size() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  std::vector<double>& mutable_weights() { return weights_; }

  // Mean cross-entropy and its gradient over rows `batch` of `data`.
  double Loss(const Dataset& data, const std::vector<std::size_t>& batch) const;
  std::vector<double> Gradient(const Dataset& data, const std::vector<std::size_t>& batch) const;
  Evaluation Evaluate(const Dataset& data) const;

 private:
  // Class logits for one row; fills the hidden activations for the MLP.
  void Forward(const std::vector<double>& x, std::vector<double>& hidden, std::vector<double>& logits) const;

  ModelKind kind_;
  std::size_t features_;
  std::size_t classes_;
  std::size_t hidden_;
  std::vector<double> weights_;
};

// One mini-batch gradient at the current weights: batch_size rows drawn
// without replacement from the shard (the whole shard if smaller).
std::vector<double> LocalTrain(const Model& model, const Dataset& shard, std::size_t batch_size,
                               std::uint64_t seed);

// W <- W - eta * g.
void ModelUpdate(std::vector<double>& weights, const std::vector<double>& gradient, double eta);

// Flat checkpoint: u64 length, then little-endian f64 values.
void SaveWeights(const std::string& path, const std::vector<double>& weights);
std::vector<double> LoadWeights(const std::string& path);

}  // namespace pbfl::sim

#endif  // PBFL_SIM_MODEL_H_
