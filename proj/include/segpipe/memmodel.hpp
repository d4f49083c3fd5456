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

// Stand-in for the accelerator compiler's weight placement. Whole layers are
// the storage unit: each layer lands entirely on the device or on the host.

#pragma once

#include <cstdint>
#include <map>
#include <span>

#include "segpipe/graph.hpp"

namespace segpipe {

inline constexpr std::uint64_t kMiB = 1ULL << 20;

struct DeviceSpec {
  std::uint64_t device_capacity_bytes = 8 * kMiB;
  std::uint64_t systolic_dim = 64;
  double peak_tops = 4.0;
  std::uint64_t reserved_bytes = 512 * 1024;  // activations and instructions
};

/// Throws Error(kInvalidArgument) if capacity <= reserved or systolic_dim < 1.
void check(const DeviceSpec& spec);

enum class Placement { kDevice, kHost };

struct MemoryReport {
  std::uint64_t device_bytes = 0;
  std::uint64_t host_bytes = 0;
  std::uint64_t padded_overhead_bytes = 0;
  std::map<NodeId, Placement> placement;

  bool spills() const { return host_bytes > 0; }
  bool operator==(const MemoryReport&) const = default;
};

/// param_count rounded up to a multiple of systolic_dim^2.
std::uint64_t padded_weight_bytes(const LayerNode& layer, const DeviceSpec& spec);

/// Greedy placement in the given order (callers pass depth order): layers go
/// on-device while the running padded total plus reserved_bytes fits; the
/// first layer that does not fit and every layer after it go to the host.
/// Throws Error(kInvalidArgument) on an empty segment.
MemoryReport compile_segment(std::span<const LayerNode> layers, const DeviceSpec& spec);

/// ceil(total / capacity), at least 1.
std::uint64_t tpus_needed(std::uint64_t total_bytes, const DeviceSpec& spec);

}  // namespace segpipe
