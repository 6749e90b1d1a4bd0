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

#ifndef PBFL_PROTOCOLS_TRANSPORT_H_
#define PBFL_PROTOCOLS_TRANSPORT_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pbfl/common/bytes.h"

namespace pbfl::protocols {

enum class Direction : std::uint8_t { kS1ToS2 = 0, kS2ToS1 = 1 };

const char* DirectionName(Direction d);

// Message tags. The first byte of every framed message.
namespace tag {
inline constexpr std::uint8_t kJudgeRequest = 0x11;
inline constexpr std::uint8_t kJudgeReply = 0x12;
inline constexpr std::uint8_t kCosRequest = 0x21;
inline constexpr std::uint8_t kCosReply = 0x22;
inline constexpr std::uint8_t kSecCosMaskedInputs = 0x31;
inline constexpr std::uint8_t kSecCosPartialProducts = 0x32;
inline constexpr std::uint8_t kSecCosMaskedProduct = 0x33;
inline constexpr std::uint8_t kSecCosResult = 0x34;
}  // namespace tag

struct MessageRecord {
  std::uint64_t invocation_id = 0;
  std::string protocol;
  Direction direction = Direction::kS1ToS2;
  std::size_t bytes = 0;  // framed size, tag byte included
  std::uint8_t tag = 0;
  std::uint64_t digest = 0;  // FNV-1a of the framed bytes
};

struct ProtocolCounters {
  std::uint64_t invocations = 0;
  std::uint64_t messages = 0;
  std::uint64_t bytes = 0;
  std::uint64_t round_trips = 0;
};

// In-process, half-duplex channel between S1 and S2 with full accounting.
// The log is append-only; counters are always aggregates of the log.
// Optionally checks each message against a previously saved replay, which
// turns any divergence in a re-execution into a protocol error.
class Transport {
 public:
  Transport() = default;
  Transport(const Transport&) = delete;
  Transport& operator=(const Transport&) = delete;

  std::uint64_t BeginInvocation(const std::string& protocol);

  // Frames `body` behind `tag`, logs it, and returns the framed bytes as the
  // receiver sees them.
  Bytes Send(std::uint64_t invocation_id, Direction direction, std::uint8_t tag, const Bytes& body);

  // Logs a message whose body is only accounted for, not materialized
  // (used by the emulation of a protocol whose ciphertexts are not built).
  void SendOpaque(std::uint64_t invocation_id, Direction direction, std::uint8_t tag,
                  std::size_t body_bytes);

  // Splits a framed message, checking the tag.
  static std::span<const std::uint8_t> Open(const Bytes& framed, std::uint8_t expected_tag);

  std::vector<MessageRecord> log() const;
  std::uint64_t messages() const;
  std::uint64_t bytes() const;
  std::uint64_t round_trips() const;
  std::uint64_t invocations() const;
  std::map<std::string, ProtocolCounters> per_protocol() const;
  // Messages logged under one invocation.
  std::vector<MessageRecord> MessagesOf(std::uint64_t invocation_id) const;

  // JSON Lines: {invocation_id, protocol, direction, bytes, tag}.
  std::string ExportJsonl() const;
  void WriteJsonl(const std::string& path) const;

  // Replay: the ordered framed blobs of every Send. Blobs are retained only
  // while recording is on; verification needs just the saved file.
  void set_record_blobs(bool on);
  void SaveReplay(const std::string& path) const;
  void LoadReplayForVerification(const std::string& path);
  bool replay_active() const { return replay_.has_value(); }
  std::size_t replay_position() const;

  // Test hook: the Send call after `sends` more successful sends throws.
  void FailAfter(std::size_t sends);

 private:
  struct Entry {
    MessageRecord record;
    Bytes framed;  // empty unless recording
  };

  mutable std::mutex mu_;
  std::uint64_t next_invocation_ = 1;
  std::map<std::uint64_t, std::string> invocation_protocol_;
  std::vector<Entry> entries_;
  std::optional<std::vector<Entry>> replay_;
  std::size_t replay_pos_ = 0;
  std::optional<std::size_t> fail_after_;
  bool record_blobs_ = false;
};

}  // namespace pbfl::protocols

#endif  // PBFL_PROTOCOLS_TRANSPORT_H_
