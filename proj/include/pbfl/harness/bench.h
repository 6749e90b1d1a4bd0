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

#ifndef PBFL_HARNESS_BENCH_H_
#define PBFL_HARNESS_BENCH_H_

#include <cstddef>
#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

namespace pbfl::harness {

// Per-operation timings (mean and min microseconds) for encode, encrypt,
// mult, part_dec, full_dec, and one norm check and cosine exchange over a
// single-chunk gradient, plus ciphertext size and per-call traffic.
nlohmann::ordered_json RunCryptoBench(const std::string& preset, std::size_t iterations, std::uint64_t seed);

}  // namespace pbfl::harness

#endif  // PBFL_HARNESS_BENCH_H_
