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

#ifndef PBFL_SIM_PARTITION_H_
#define PBFL_SIM_PARTITION_H_

#include <cstddef>
#include <cstdint>
#include <vector>

namespace pbfl::sim {

using Shards = std::vector<std::vector<std::size_t>>;

// Per class, client proportions are drawn from Dirichlet(alpha) and the
// class's shuffled examples are cut accordingly. Draws that leave a client
// empty are redrawn. The result partitions [0, labels.size()).
Shards DirichletPartition(const std::vector<int>& labels, std::size_t clients, double alpha,
                          std::uint64_t seed);

}  // namespace pbfl::sim

#endif  // PBFL_SIM_PARTITION_H_
