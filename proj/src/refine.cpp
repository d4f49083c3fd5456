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

#include "segpipe/refine.hpp"

#include <algorithm>
#include <set>

#include "segpipe/error.hpp"

namespace segpipe {

std::string_view to_string(RefineStatus status) {
  switch (status) {
    case RefineStatus::kResolved: return "resolved";
    case RefineStatus::kUnresolved: return "unresolved";
    case RefineStatus::kInfeasible: return "infeasible";
  }
  return "unresolved";
}

std::string_view to_string(MoveDirection direction) {
  return direction == MoveDirection::kEarlier ? "earlier" : "deeper";
}

std::vector<std::uint64_t> padded_depth_profile(const ModelGraph& graph,
                                                const DepthProfile& depths,
                                                const DeviceSpec& spec) {
  std::vector<std::uint64_t> out(static_cast<std::size_t>(depths.d), 0);
  for (const auto& n : graph.nodes) {
    out[static_cast<std::size_t>(depths.depth(n.id))] += padded_weight_bytes(n, spec);
  }
  return out;
}

int multi_move_step(const SegmentAssignment& assignment,
                    std::span<const std::uint64_t> padded_per_depth, int segment,
                    MoveDirection direction, const DeviceSpec& spec) {
  const Segment& seg = assignment.segments.at(static_cast<std::size_t>(segment));
  const std::uint64_t host = seg.memory.host_bytes;
  if (host == 0) return 0;
  const int len = seg.last_depth - seg.first_depth + 1;
  std::uint64_t needed = host;
  if (direction == MoveDirection::kDeeper) {
    // Dropping leading levels also frees device room the spilled layers
    // could not use.
    const std::uint64_t budget = spec.device_capacity_bytes - spec.reserved_bytes;
    needed = host - (budget - seg.memory.device_bytes);
  }
  std::uint64_t freed = 0;
  for (int x = 1; x <= len; ++x) {
    const int level = direction == MoveDirection::kEarlier ? seg.last_depth - (x - 1)
                                                           : seg.first_depth + (x - 1);
    freed += padded_per_depth[static_cast<std::size_t>(level)];
    if (freed >= needed) return x;
  }
  return len;
}

namespace {

class Refiner {
 public:
  Refiner(const Partition& start, const ModelGraph& graph, const DepthProfile& depths,
          const DeviceSpec& spec, const RefineOptions& options)
      : graph_(graph),
        depths_(depths),
        spec_(spec),
        options_(options),
        padded_(padded_depth_profile(graph, depths, spec)),
        current_(start) {
    compile();
    visited_.insert(current_.splits);
  }

  RefineResult run(const Partition& start) {
    const int rounds = options_.max_iters > 0 ? options_.max_iters : 10 * depths_.d;
    bool repeated = false;
    for (round_ = 0; round_ < rounds && assignment_.spilling_segments() > 0 && !repeated; ++round_) {
      const std::size_t before = result_.trace.size();
      repeated = forward_pass();
      if (!repeated && spills(last())) repeated = backward_pass();
      if (result_.trace.size() == before) break;
    }

    if (assignment_.spilling_segments() == 0) {
      result_.status = RefineStatus::kResolved;
      result_.partition = current_;
    } else {
      result_.status = has_stuck_segment() ? RefineStatus::kInfeasible : RefineStatus::kUnresolved;
      result_.partition = start;
    }
    return std::move(result_);
  }

 private:
  int last() const { return current_.s - 1; }

  bool spills(int i) const {
    return assignment_.segments[static_cast<std::size_t>(i)].memory.spills();
  }

  int length(int i) const {
    const auto& seg = assignment_.segments[static_cast<std::size_t>(i)];
    return seg.last_depth - seg.first_depth + 1;
  }

  bool has_stuck_segment() const {
    for (int i = 0; i < current_.s; ++i) {
      if (spills(i) && length(i) == 1) return true;
    }
    return false;
  }

  void compile() {
    assignment_ = materialize(current_, graph_, depths_, spec_);
    ++result_.compilations;
  }

  int step_size(int i, MoveDirection dir) const {
    if (!options_.fast) return 1;
    const int x = multi_move_step(assignment_, padded_, i, dir, spec_);
    return std::clamp(x, 1, length(i) - 1);
  }

  // Applies one move; true if the new partition was seen before.
  bool move(int split_index, MoveDirection dir, int steps) {
    auto& k = current_.splits[static_cast<std::size_t>(split_index)];
    k += dir == MoveDirection::kEarlier ? -steps : steps;
    compile();
    RefineMove m;
    m.round = round_;
    m.split_index = split_index;
    m.direction = dir;
    m.steps = steps;
    m.splits = current_.splits;
    for (const auto& seg : assignment_.segments) {
      m.device_bytes.push_back(seg.memory.device_bytes);
      m.host_bytes.push_back(seg.memory.host_bytes);
    }
    result_.trace.push_back(std::move(m));
    return !visited_.insert(current_.splits).second;
  }

  bool forward_pass() {
    for (int i = 0; i < last(); ++i) {
      while (spills(i) && length(i) > 1) {
        if (move(i, MoveDirection::kEarlier, step_size(i, MoveDirection::kEarlier))) return true;
      }
    }
    return false;
  }

  bool backward_pass() {
    for (int i = last(); i > 0; --i) {
      while (spills(i) && length(i) > 1) {
        if (move(i - 1, MoveDirection::kDeeper, step_size(i, MoveDirection::kDeeper))) return true;
      }
    }
    return false;
  }

  const ModelGraph& graph_;
  const DepthProfile& depths_;
  const DeviceSpec& spec_;
  RefineOptions options_;
  std::vector<std::uint64_t> padded_;
  Partition current_;
  SegmentAssignment assignment_;
  RefineResult result_;
  std::set<std::vector<int>> visited_;
  int round_ = 0;
};

}  // namespace

RefineResult refine(const Partition& partition, const ModelGraph& graph,
                    const DepthProfile& depths, const DeviceSpec& spec,
                    const RefineOptions& options) {
  check(partition, depths.d);
  if (options.max_iters < 0) throw invalid_argument("max_iters must be >= 1");
  Refiner refiner(partition, graph, depths, spec, options);
  return refiner.run(partition);
}

}  // namespace segpipe
