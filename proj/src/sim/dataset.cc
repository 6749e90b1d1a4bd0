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

#include "pbfl/sim/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "pbfl/common/error.h"
#include "pbfl/common/prng.h"

namespace pbfl::sim {

namespace {

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double ParseNumber(const std::string& cell, const std::string& where) {
  std::string s = cell;
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw InvalidArgument("not a number at " + where + ": '" + cell + "'");
  }
  return v;
}

}  // namespace

Dataset Dataset::Subset(const std::vector<std::size_t>& indices) const {
  Dataset out;
  out.features = features;
  out.classes = classes;
  out.x.reserve(indices.size());
  out.labels.reserve(indices.size());
  for (std::size_t i : indices) {
    out.x.push_back(x.at(i));
    out.labels.push_back(labels.at(i));
  }
  return out;
}

std::vector<std::size_t> Dataset::LabelHistogram() const {
  std::vector<std::size_t> h(classes, 0);
  for (int y : labels) ++h.at(static_cast<std::size_t>(y));
  return h;
}

Dataset LoadCsv(const std::string& path, double feature_scale) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open dataset " + path);
  std::string line;
  if (!std::getline(f, line)) throw InvalidArgument("empty dataset " + path);
  const std::vector<std::string> header = SplitCsvLine(line);
  std::size_t label_col = header.size();
  for (std::size_t c = 0; c < header.size(); ++c) {
    std::string name = header[c];
    while (!name.empty() && (name.back() == '\r' || name.back() == ' ')) name.pop_back();
    if (name == "label") label_col = c;
  }
  if (label_col == header.size()) throw InvalidArgument(path + ": no `label` column in header");
  Dataset d;
  d.features = header.size() - 1;
  int max_label = -1;
  std::size_t row = 1;
  while (std::getline(f, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> cells = SplitCsvLine(line);
    const std::string where = path + ":" + std::to_string(row);
    if (cells.size() != header.size()) throw InvalidArgument("wrong column count at " + where);
    std::vector<double> features;
    features.reserve(d.features);
    int label = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const double v = ParseNumber(cells[c], where);
      if (c == label_col) {
        if (v < 0 || v != std::floor(v)) throw InvalidArgument("label must be a non-negative integer at " + where);
        label = static_cast<int>(v);
      } else {
        features.push_back(v * feature_scale);
      }
    }
    max_label = std::max(max_label, label);
    d.x.push_back(std::move(features));
    d.labels.push_back(label);
  }
  if (d.labels.empty()) throw InvalidArgument(path + ": no data rows");
  d.classes = static_cast<std::size_t>(max_label) + 1;
  return d;
}

Dataset SyntheticGaussians(std::size_t examples, std::size_t features, double separation,
                           std::uint64_t seed) {
  if (examples < 2 || features == 0) throw InvalidArgument("synthetic data needs >= 2 examples and >= 1 feature");
  Prng rng(seed);
  std::vector<double> dir(features);
  double norm = 0;
  for (auto& v : dir) {
    v = rng.Normal(0, 1);
    norm += v * v;
  }
  norm = std::sqrt(norm);
  for (auto& v : dir) v /= norm;
  Dataset d;
  d.features = features;
  d.classes = 2;
  for (std::size_t i = 0; i < examples; ++i) {
    const int y = static_cast<int>(i % 2);
    const double sign = y == 0 ? -0.5 : 0.5;
    std::vector<double> row(features);
    for (std::size_t k = 0; k < features; ++k) row[k] = sign * separation * dir[k] + rng.Normal(0, 1);
    d.x.push_back(std::move(row));
    d.labels.push_back(y);
  }
  return d;
}

std::pair<Dataset, Dataset> TrainTestSplit(const Dataset& d, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0 && test_fraction < 1)) throw InvalidArgument("test fraction must lie in (0, 1)");
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), 0);
  Prng rng(seed);
  std::shuffle(order.begin(), order.end(), rng.engine());
  const auto test_count = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(d.size())));
  if (test_count == 0 || test_count >= d.size()) throw InvalidArgument("split leaves an empty part");
  const std::vector<std::size_t> test(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(test_count));
  const std::vector<std::size_t> train(order.begin() + static_cast<std::ptrdiff_t>(test_count), order.end());
  return {d.Subset(train), d.Subset(test)};
}

}  // namespace pbfl::sim
