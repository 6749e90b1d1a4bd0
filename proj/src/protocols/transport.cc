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

#include "pbfl/protocols/transport.h"

#include <fstream>
#include <iterator>

#include <nlohmann/json.hpp>

#include "pbfl/common/error.h"

namespace pbfl::protocols {

namespace {

constexpr char kReplayMagic[4] = {'P', 'B', 'F', 'R'};
constexpr std::uint16_t kReplayVersion = 1;

}  // namespace

const char* DirectionName(Direction d) {
  return d == Direction::kS1ToS2 ? "S1->S2" : "S2->S1";
}

std::uint64_t Transport::BeginInvocation(const std::string& protocol) {
  std::lock_guard<std::mutex> lock(mu_);
  const std::uint64_t id = next_invocation_++;
  invocation_protocol_[id] = protocol;
  return id;
}

Bytes Transport::Send(std::uint64_t invocation_id, Direction direction, std::uint8_t tag,
                      const Bytes& body) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = invocation_protocol_.find(invocation_id);
  if (it == invocation_protocol_.end()) throw ProtocolError("send on unknown invocation");
  if (fail_after_.has_value()) {
    if (*fail_after_ == 0) {
      fail_after_.reset();
      throw ProtocolError("simulated transport failure");
    }
    --*fail_after_;
  }
  Bytes framed;
  framed.reserve(body.size() + 1);
  framed.push_back(tag);
  framed.insert(framed.end(), body.begin(), body.end());

  Entry entry;
  entry.record.invocation_id = invocation_id;
  entry.record.protocol = it->second;
  entry.record.direction = direction;
  entry.record.bytes = framed.size();
  entry.record.tag = tag;
  entry.record.digest = Fnv1a64(framed);

  if (replay_.has_value()) {
    if (replay_pos_ >= replay_->size()) throw ProtocolError("replay exhausted");
    const MessageRecord& want = (*replay_)[replay_pos_].record;
    if (want.direction != direction || want.tag != tag || want.bytes != framed.size() ||
        want.digest != entry.record.digest || want.protocol != it->second) {
      throw ProtocolError("replay divergence at message " + std::to_string(replay_pos_));
    }
    ++replay_pos_;
  }
  if (record_blobs_) entry.framed = framed;
  entries_.push_back(std::move(entry));
  return framed;
}

void Transport::SendOpaque(std::uint64_t invocation_id, Direction direction, std::uint8_t tag,
                           std::size_t body_bytes) {
  ByteWriter summary;
  summary.PutU8(tag);
  summary.PutU64(body_bytes);
  std::lock_guard<std::mutex> lock(mu_);
  auto it = invocation_protocol_.find(invocation_id);
  if (it == invocation_protocol_.end()) throw ProtocolError("send on unknown invocation");
  Entry entry;
  entry.record.invocation_id = invocation_id;
  entry.record.protocol = it->second;
  entry.record.direction = direction;
  entry.record.bytes = body_bytes + 1;
  entry.record.tag = tag;
  entry.record.digest = Fnv1a64(summary.bytes());
  if (replay_.has_value()) {
    if (replay_pos_ >= replay_->size()) throw ProtocolError("replay exhausted");
    const MessageRecord& want = (*replay_)[replay_pos_].record;
    if (want.direction != direction || want.tag != tag || want.bytes != entry.record.bytes ||
        want.digest != entry.record.digest) {
      throw ProtocolError("replay divergence at message " + std::to_string(replay_pos_));
    }
    ++replay_pos_;
  }
  entries_.push_back(std::move(entry));
}

std::span<const std::uint8_t> Transport::Open(const Bytes& framed, std::uint8_t expected_tag) {
  if (framed.empty()) throw ProtocolError("empty message");
  if (framed[0] != expected_tag) throw ProtocolError("unexpected message tag");
  return std::span<const std::uint8_t>(framed).subspan(1);
}

std::vector<MessageRecord> Transport::log() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<MessageRecord> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.record);
  return out;
}

std::uint64_t Transport::messages() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.size();
}

std::uint64_t Transport::bytes() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::uint64_t total = 0;
  for (const auto& e : entries_) total += e.record.bytes;
  return total;
}

std::uint64_t Transport::round_trips() const {
  std::uint64_t total = 0;
  for (const auto& [name, c] : per_protocol()) total += c.round_trips;
  return total;
}

std::uint64_t Transport::invocations() const {
  std::lock_guard<std::mutex> lock(mu_);
  return invocation_protocol_.size();
}

std::map<std::string, ProtocolCounters> Transport::per_protocol() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::map<std::string, ProtocolCounters> out;
  for (const auto& [id, name] : invocation_protocol_) ++out[name].invocations;
  // A round trip is a request followed by a reply in the same invocation.
  std::map<std::uint64_t, bool> awaiting_reply;
  for (const auto& e : entries_) {
    ProtocolCounters& c = out[e.record.protocol];
    ++c.messages;
    c.bytes += e.record.bytes;
    bool& waiting = awaiting_reply[e.record.invocation_id];
    if (e.record.direction == Direction::kS1ToS2) {
      waiting = true;
    } else if (waiting) {
      ++c.round_trips;
      waiting = false;
    }
  }
  return out;
}

std::vector<MessageRecord> Transport::MessagesOf(std::uint64_t invocation_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<MessageRecord> out;
  for (const auto& e : entries_) {
    if (e.record.invocation_id == invocation_id) out.push_back(e.record);
  }
  return out;
}

std::string Transport::ExportJsonl() const {
  std::string out;
  for (const auto& r : log()) {
    nlohmann::ordered_json j;
    j["invocation_id"] = r.invocation_id;
    j["protocol"] = r.protocol;
    j["direction"] = DirectionName(r.direction);
    j["bytes"] = r.bytes;
    j["tag"] = r.tag;
    out += j.dump();
    out += '\n';
  }
  return out;
}

void Transport::WriteJsonl(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  f << ExportJsonl();
  if (!f) throw IoError("write failed for " + path);
}

void Transport::set_record_blobs(bool on) {
  std::lock_guard<std::mutex> lock(mu_);
  record_blobs_ = on;
}

void Transport::SaveReplay(const std::string& path) const {
  std::lock_guard<std::mutex> lock(mu_);
  ByteWriter w;
  for (char c : kReplayMagic) w.PutU8(static_cast<std::uint8_t>(c));
  w.PutU16(kReplayVersion);
  w.PutU64(entries_.size());
  for (const auto& e : entries_) {
    w.PutU64(e.record.invocation_id);
    w.PutString(e.record.protocol);
    w.PutU8(static_cast<std::uint8_t>(e.record.direction));
    w.PutU8(e.record.tag);
    w.PutU64(e.record.bytes);
    w.PutU64(e.record.digest);
    w.PutBlob(e.framed);
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  const Bytes& b = w.bytes();
  f.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
  if (!f) throw IoError("write failed for " + path);
}

void Transport::LoadReplayForVerification(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  const Bytes data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  ByteReader r(data);
  for (char c : kReplayMagic) {
    if (r.GetU8() != static_cast<std::uint8_t>(c)) throw ProtocolError("bad replay magic");
  }
  if (r.GetU16() != kReplayVersion) throw ProtocolError("unsupported replay version");
  const std::uint64_t count = r.GetU64();
  std::vector<Entry> entries;
  for (std::uint64_t i = 0; i < count; ++i) {
    Entry e;
    e.record.invocation_id = r.GetU64();
    e.record.protocol = r.GetString();
    const std::uint8_t dir = r.GetU8();
    if (dir > 1) throw ProtocolError("bad direction in replay");
    e.record.direction = static_cast<Direction>(dir);
    e.record.tag = r.GetU8();
    e.record.bytes = r.GetU64();
    e.record.digest = r.GetU64();
    const auto blob = r.GetBlob();
    e.framed.assign(blob.begin(), blob.end());
    if (!e.framed.empty() && Fnv1a64(e.framed) != e.record.digest) {
      throw ProtocolError("replay blob digest mismatch");
    }
    entries.push_back(std::move(e));
  }
  if (!r.done()) throw ProtocolError("trailing bytes in replay");
  std::lock_guard<std::mutex> lock(mu_);
  replay_ = std::move(entries);
  replay_pos_ = 0;
}

std::size_t Transport::replay_position() const {
  std::lock_guard<std::mutex> lock(mu_);
  return replay_pos_;
}

void Transport::FailAfter(std::size_t sends) {
  std::lock_guard<std::mutex> lock(mu_);
  fail_after_ = sends;
}

}  // namespace pbfl::protocols
