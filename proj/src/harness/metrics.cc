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

#include "pbfl/harness/metrics.h"

#include <filesystem>
#include <iterator>
#include <sstream>

#include "pbfl/common/error.h"

namespace pbfl::harness {

nlohmann::ordered_json MetricsRecord::ToJson() const {
  nlohmann::ordered_json j;
  j["round"] = round;
  j["accuracy"] = accuracy;
  j["loss"] = loss;
  j["weights"] = weights;
  j["traffic_bytes"] = traffic_bytes;
  j["messages"] = messages;
  j["shieldfl_bytes"] = shieldfl_bytes;
  j["shieldfl_messages"] = shieldfl_messages;
  j[kTimingField] = wall_ms;
  return j;
}

MetricsRecord MakeMetricsRecord(const sim::RoundRecord& rec, std::uint64_t shieldfl_bytes,
                                std::uint64_t shieldfl_messages) {
  MetricsRecord m;
  m.round = rec.round;
  m.accuracy = rec.eval.accuracy;
  m.loss = rec.eval.loss;
  m.weights = rec.client_weights;
  for (const auto& [name, c] : rec.defense.traffic) {
    m.traffic_bytes += c.bytes;
    m.messages[name] = c.messages;
  }
  m.shieldfl_bytes = shieldfl_bytes;
  m.shieldfl_messages = shieldfl_messages;
  m.wall_ms = rec.wall_ms;
  return m;
}

std::string CsvHeader(std::size_t clients) {
  std::string h = "round,accuracy,loss,traffic_bytes,messages,shieldfl_bytes,shieldfl_messages";
  for (std::size_t i = 0; i < clients; ++i) h += ",w" + std::to_string(i);
  h += ",wall_ms";
  return h;
}

MetricsWriter::MetricsWriter(const std::string& dir, std::size_t clients) : clients_(clients) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  jsonl_path_ = dir + "/metrics.jsonl";
  csv_path_ = dir + "/metrics.csv";
  jsonl_.open(jsonl_path_, std::ios::binary | std::ios::trunc);
  if (!jsonl_) throw IoError("cannot open " + jsonl_path_);
}

MetricsWriter::~MetricsWriter() {
  try {
    Close();
  } catch (...) {
  }
}

void MetricsWriter::Append(const MetricsRecord& record) {
  if (closed_) throw FailedPrecondition("metrics writer already closed");
  jsonl_ << record.ToJson().dump() << '\n';
  jsonl_.flush();
  if (!jsonl_) throw IoError("write failed for " + jsonl_path_);
  rows_.push_back(record);
}

void MetricsWriter::Close() {
  if (closed_) return;
  closed_ = true;
  jsonl_.close();
  std::ostringstream csv;
  csv.precision(17);
  csv << CsvHeader(clients_) << '\n';
  for (const auto& r : rows_) {
    std::uint64_t messages = 0;
    for (const auto& [name, count] : r.messages) messages += count;
    csv << r.round << ',' << r.accuracy << ',' << r.loss << ',' << r.traffic_bytes << ',' << messages << ','
        << r.shieldfl_bytes << ',' << r.shieldfl_messages;
    for (std::size_t i = 0; i < clients_; ++i) csv << ',' << (i < r.weights.size() ? r.weights[i] : 0.0);
    csv << ',' << r.wall_ms << '\n';
  }
  WriteFile(csv_path_, csv.str());
}

std::string StripTiming(const std::string& jsonl) {
  std::istringstream in(jsonl);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(line);
    j.erase(kTimingField);
    out += j.dump();
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json TrafficSummary(const protocols::Transport& t, std::uint64_t messages_per_invocation) {
  const auto log = t.log();
  std::map<std::uint64_t, std::uint64_t> per_invocation;
  std::uint64_t log_bytes = 0;
  for (const auto& r : log) {
    ++per_invocation[r.invocation_id];
    log_bytes += r.bytes;
  }
  std::uint64_t violating = 0;
  for (const auto& [id, count] : per_invocation) violating += count != messages_per_invocation;

  nlohmann::ordered_json j;
  nlohmann::ordered_json protocols = nlohmann::ordered_json::object();
  std::uint64_t messages = 0, invocations = 0;
  for (const auto& [name, c] : t.per_protocol()) {
    protocols[name] = {{"invocations", c.invocations},
                       {"messages", c.messages},
                       {"bytes", c.bytes},
                       {"round_trips", c.round_trips}};
    messages += c.messages;
    invocations += c.invocations;
  }
  j["protocols"] = protocols;
  j["total_bytes"] = t.bytes();
  j["total_messages"] = messages;
  j["invocations"] = invocations;
  j["log_bytes"] = log_bytes;
  j["bytes_conserved"] = log_bytes == t.bytes();
  j["messages_per_invocation"] = messages_per_invocation;
  j["invocations_violating"] = violating;
  j["messages_conserved"] = violating == 0 && messages == messages_per_invocation * invocations;
  return j;
}

std::string ReadFile(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path);
  f << text;
  if (!f) throw IoError("write failed for " + path);
}

}  // namespace pbfl::harness
