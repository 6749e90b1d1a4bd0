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

#ifndef PBFL_HARNESS_METRICS_H_
#define PBFL_HARNESS_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pbfl/protocols/transport.h"
#include "pbfl/sim/simulation.h"

namespace pbfl::harness {

// Field names that carry timing and are excluded from determinism checks.
inline constexpr const char* kTimingField = "wall_ms";

struct MetricsRecord {
  int round = 0;
  double accuracy = 0;
  double loss = 0;
  std::vector<double> weights;  // per client
  std::uint64_t traffic_bytes = 0;
  std::map<std::string, std::uint64_t> messages;  // per protocol
  std::uint64_t shieldfl_bytes = 0;
  std::uint64_t shieldfl_messages = 0;
  double wall_ms = 0;

  nlohmann::ordered_json ToJson() const;
};

// Traffic fields are this round's increments.
MetricsRecord MakeMetricsRecord(const sim::RoundRecord& rec, std::uint64_t shieldfl_bytes,
                                std::uint64_t shieldfl_messages);

// Line-buffered JSONL stream plus the per-round CSV table written on Close.
class MetricsWriter {
 public:
  MetricsWriter(const std::string& dir, std::size_t clients);
  ~MetricsWriter();

  void Append(const MetricsRecord& record);
  // Writes metrics.csv. Safe to call more than once.
  void Close();

  const std::string& jsonl_path() const { return jsonl_path_; }
  const std::string& csv_path() const { return csv_path_; }
  std::size_t records() const { return rows_.size(); }

 private:
  std::size_t clients_;
  std::string jsonl_path_;
  std::string csv_path_;
  std::ofstream jsonl_;
  std::vector<MetricsRecord> rows_;
  bool closed_ = false;
};

std::string CsvHeader(std::size_t clients);

// Removes timing fields from every line of a JSONL text.
std::string StripTiming(const std::string& jsonl);

// Per-protocol counters with conservation checks against the raw log:
// bytes equal the sum over messages, and each invocation carries exactly
// `messages_per_invocation` messages.
nlohmann::ordered_json TrafficSummary(const protocols::Transport& t, std::uint64_t messages_per_invocation);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& text);

}  // namespace pbfl::harness

#endif  // PBFL_HARNESS_METRICS_H_
