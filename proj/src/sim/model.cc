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

#include "pbfl/sim/model.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>

#include "pbfl/common/bytes.h"
#include "pbfl/common/error.h"
#include "pbfl/common/prng.h"

namespace pbfl::sim {

namespace {

void SoftmaxInPlace(std::vector<double>& z) {
  const double top = *std::max_element(z.begin(), z.end());
  double total = 0;
  for (double& v : z) total += (v = std::exp(v - top));
  for (double& v : z) v /= total;
}

}  // namespace

const char* ModelKindName(ModelKind kind) { return kind == ModelKind::kLogistic ? "logistic" : "mlp"; }

ModelKind ParseModelKind(const std::string& name) {
  if (name == "logistic") return ModelKind::kLogistic;
  if (name == "mlp") return ModelKind::kMlp;
  throw InvalidArgument("unknown model kind '" + name + "'");
}

Model::Model(ModelKind kind, std::size_t features, std::size_t classes, std::size_t hidden)
    : kind_(kind), features_(features), classes_(classes), hidden_(hidden) {
  if (features == 0 || classes < 2) throw InvalidArgument("model needs features and at least two classes");
  if (kind == ModelKind::kMlp && hidden == 0) throw InvalidArgument("mlp needs a hidden width");
  const std::size_t size = kind == ModelKind::kLogistic
                               ? classes * features + classes
                               : hidden * features + hidden + classes * hidden + classes;
  weights_.assign(size, 0.0);
}

Model Model::Random(ModelKind kind, std::size_t features, std::size_t classes, std::size_t hidden,
                    std::uint64_t seed) {
  Model m(kind, features, classes, hidden);
  Prng rng(seed);
  const double fan_in = static_cast<double>(kind == ModelKind::kLogistic ? features : features + hidden);
  const double stddev = kind == ModelKind::kLogistic ? 0.01 : 1.0 / std::sqrt(fan_in);
  for (double& w : m.weights_) w = rng.Normal(0, stddev);
  return m;
}

void Model::Forward(const std::vector<double>& x, std::vector<double>& hidden,
                    std::vector<double>& logits) const {
  if (x.size() != features_) throw InvalidArgument("feature count mismatch");
  logits.assign(classes_, 0.0);
  const double* w = weights_.data();
  if (kind_ == ModelKind::kLogistic) {
    const double* b = w + classes_ * features_;
    for (std::size_t c = 0; c < classes_; ++c) {
      logits[c] = b[c] + std::inner_product(x.begin(), x.end(), w + c * features_, 0.0);
    }
    return;
  }
  const double* b1 = w + hidden_ * features_;
  const double* w2 = b1 + hidden_;
  const double* b2 = w2 + classes_ * hidden_;
  hidden.assign(hidden_, 0.0);
  for (std::size_t h = 0; h < hidden_; ++h) {
    hidden[h] = std::tanh(b1[h] + std::inner_product(x.begin(), x.end(), w + h * features_, 0.0));
  }
  for (std::size_t c = 0; c < classes_; ++c) {
    logits[c] = b2[c] + std::inner_product(hidden.begin(), hidden.end(), w2 + c * hidden_, 0.0);
  }
}

double Model::Loss(const Dataset& data, const std::vector<std::size_t>& batch) const {
  if (batch.empty()) throw InvalidArgument("loss over an empty batch");
  std::vector<double> hidden, logits;
  double total = 0;
  for (std::size_t i : batch) {
    Forward(data.x.at(i), hidden, logits);
    const double top = *std::max_element(logits.begin(), logits.end());
    double lse = 0;
    for (double z : logits) lse += std::exp(z - top);
    total += top + std::log(lse) - logits.at(static_cast<std::size_t>(data.labels[i]));
  }
  return total / static_cast<double>(batch.size());
}

std::vector<double> Model::Gradient(const Dataset& data, const std::vector<std::size_t>& batch) const {
  if (batch.empty()) throw InvalidArgument("gradient over an empty batch");
  std::vector<double> grad(weights_.size(), 0.0);
  std::vector<double> hidden, probs;
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (std::size_t i : batch) {
    const std::vector<double>& x = data.x.at(i);
    Forward(x, hidden, probs);
    SoftmaxInPlace(probs);
    probs.at(static_cast<std::size_t>(data.labels[i])) -= 1.0;  // dL/dlogits
    if (kind_ == ModelKind::kLogistic) {
      double* gb = grad.data() + classes_ * features_;
      for (std::size_t c = 0; c < classes_; ++c) {
        const double d = probs[c] * inv;
        if (d == 0) continue;
        double* gw = grad.data() + c * features_;
        for (std::size_t k = 0; k < features_; ++k) gw[k] += d * x[k];
        gb[c] += d;
      }
      continue;
    }
    const double* w2 = weights_.data() + hidden_ * features_ + hidden_;
    double* gb1 = grad.data() + hidden_ * features_;
    double* gw2 = gb1 + hidden_;
    double* gb2 = gw2 + classes_ * hidden_;
    std::vector<double> dh(hidden_, 0.0);
    for (std::size_t c = 0; c < classes_; ++c) {
      const double d = probs[c] * inv;
      for (std::size_t h = 0; h < hidden_; ++h) {
        gw2[c * hidden_ + h] += d * hidden[h];
        dh[h] += d * w2[c * hidden_ + h];
      }
      gb2[c] += d;
    }
    for (std::size_t h = 0; h < hidden_; ++h) {
      const double da = dh[h] * (1 - hidden[h] * hidden[h]);
      if (da == 0) continue;
      double* gw1 = grad.data() + h * features_;
      for (std::size_t k = 0; k < features_; ++k) gw1[k] += da * x[k];
      gb1[h] += da;
    }
  }
  return grad;
}

Evaluation Model::Evaluate(const Dataset& data) const {
  if (data.size() == 0) throw InvalidArgument("evaluation on an empty set");
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), 0);
  std::vector<double> hidden, logits;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    Forward(data.x[i], hidden, logits);
    const auto pred = static_cast<int>(std::max_element(logits.begin(), logits.end()) - logits.begin());
    if (pred == data.labels[i]) ++correct;
  }
  return {static_cast<double>(correct) / static_cast<double>(data.size()), Loss(data, all)};
}

std::vector<double> LocalTrain(const Model& model, const Dataset& shard, std::size_t batch_size,
                               std::uint64_t seed) {
  if (shard.size() == 0) throw InvalidArgument("local training on an empty shard");
  std::vector<std::size_t> order(shard.size());
  std::iota(order.begin(), order.end(), 0);
  if (batch_size > 0 && batch_size < order.size()) {
    Prng rng(seed);
    std::shuffle(order.begin(), order.end(), rng.engine());
    order.resize(batch_size);
    std::sort(order.begin(), order.end());
  }
  return model.Gradient(shard, order);
}

void ModelUpdate(std::vector<double>& weights, const std::vector<double>& gradient, double eta) {
  if (weights.size() != gradient.size()) throw InvalidArgument("update length mismatch");
  for (std::size_t k = 0; k < weights.size(); ++k) weights[k] -= eta * gradient[k];
}

void SaveWeights(const std::string& path, const std::vector<double>& weights) {
  ByteWriter w;
  w.PutU64(weights.size());
  for (double v : weights) w.PutF64(v);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  const Bytes& b = w.bytes();
  f.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
  if (!f) throw IoError("write failed for " + path);
}

std::vector<double> LoadWeights(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  const Bytes data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  ByteReader r(data);
  const std::uint64_t n = r.GetU64();
  if (n * 8 != r.remaining()) throw InvalidArgument(path + ": length prefix does not match file size");
  std::vector<double> out(n);
  for (auto& v : out) v = r.GetF64();
  return out;
}

}  // namespace pbfl::sim
