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

#ifndef PBFL_HARNESS_VERIFY_H_
#define PBFL_HARNESS_VERIFY_H_

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace pbfl::harness {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Quick oracle suites: each library component against an independent
// plaintext or closed-form computation. Takes a few seconds at desk size.
std::vector<CheckResult> RunVerifySuites(std::uint64_t seed);

nlohmann::ordered_json VerifyReportJson(const std::vector<CheckResult>& checks);

}  // namespace pbfl::harness

#endif  // PBFL_HARNESS_VERIFY_H_
