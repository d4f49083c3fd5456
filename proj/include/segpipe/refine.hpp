// Copyright 2026 The segpipe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Post-compilation refinement: shift split points using the memory reports
// until no segment keeps weights in host memory.

#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "segpipe/partition.hpp"

namespace segpipe {

enum class RefineStatus { kResolved, kUnresolved, kInfeasible };
enum class MoveDirection { kEarlier, kDeeper };

std::string_view to_string(RefineStatus status);
std::string_view to_string(MoveDirection direction);

struct RefineMove {
  int round = 0;
  int split_index = 0;
  MoveDirection direction = MoveDirection::kEarlier;
  int steps = 1;
  std::vector<int> splits;  // after the move
  std::vector<std::uint64_t> device_bytes;
  std::vector<std::uint64_t> host_bytes;
};

struct RefineOptions {
  int max_iters = 0;  // rounds; 0 means 10 * d
  bool fast = false;  // move several levels per compilation
};

struct RefineResult {
  // Refined partition when resolved; the input partition otherwise.
  Partition partition;
  RefineStatus status = RefineStatus::kResolved;
  std::vector<RefineMove> trace;
  int compilations = 0;
};

/// Forward pass (first to last-but-one segment) pulls split i one level
/// earlier while segment i spills; if the last segment still spills, a
/// backward pass pushes splits deeper from the last segment down. Rounds
/// repeat until spill-free, no move is possible, a partition repeats, or
/// max_iters rounds ran. A spilling single-level segment makes the result
/// kInfeasible; other leftovers are kUnresolved.
RefineResult refine(const Partition& partition, const ModelGraph& graph,
                    const DepthProfile& depths, const DeviceSpec& spec,
                    const RefineOptions& options = {});

/// Padded weight bytes per depth level.
std::vector<std::uint64_t> padded_depth_profile(const ModelGraph& graph,
                                                const DepthProfile& depths,
                                                const DeviceSpec& spec);

/// Levels to shift in one step for spilling segment `segment`.
/// kEarlier: smallest x whose x deepest levels hold >= host_bytes of padded
/// weight. kDeeper: smallest x whose x shallowest levels hold enough to bring
/// the remainder within the device budget. Returns 0 if the segment does not
/// spill. May exceed the segment length minus one; callers clamp.
int multi_move_step(const SegmentAssignment& assignment,
                    std::span<const std::uint64_t> padded_per_depth, int segment,
                    MoveDirection direction, const DeviceSpec& spec);

}  // namespace segpipe
