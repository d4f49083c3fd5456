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

#include "segpipe/memmodel.hpp"

#include <algorithm>

#include "segpipe/error.hpp"

namespace segpipe {

void check(const DeviceSpec& spec) {
  if (spec.device_capacity_bytes <= spec.reserved_bytes) {
    throw invalid_argument("device capacity must exceed reserved bytes");
  }
  if (spec.systolic_dim < 1) throw invalid_argument("systolic_dim must be >= 1");
  if (!(spec.peak_tops > 0.0)) throw invalid_argument("peak_tops must be positive");
}

std::uint64_t padded_weight_bytes(const LayerNode& layer, const DeviceSpec& spec) {
  const std::uint64_t tile = spec.systolic_dim * spec.systolic_dim;
  return (layer.param_count + tile - 1) / tile * tile;
}

MemoryReport compile_segment(std::span<const LayerNode> layers, const DeviceSpec& spec) {
  if (layers.empty()) throw invalid_argument("cannot compile an empty segment");
  check(spec);
  MemoryReport report;
  const std::uint64_t budget = spec.device_capacity_bytes - spec.reserved_bytes;
  bool spilled = false;
  for (const auto& layer : layers) {
    const std::uint64_t padded = padded_weight_bytes(layer, spec);
    report.padded_overhead_bytes += padded - layer.param_count;
    if (!spilled && report.device_bytes + padded <= budget) {
      report.device_bytes += padded;
      report.placement[layer.id] = Placement::kDevice;
    } else {
      spilled = true;
      report.host_bytes += padded;
      report.placement[layer.id] = Placement::kHost;
    }
  }
  return report;
}

std::uint64_t tpus_needed(std::uint64_t total_bytes, const DeviceSpec& spec) {
  const std::uint64_t cap = spec.device_capacity_bytes;
  return std::max<std::uint64_t>(1, (total_bytes + cap - 1) / cap);
}

}  // namespace segpipe
