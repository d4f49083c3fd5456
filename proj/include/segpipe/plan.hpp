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

// End-to-end segmentation: depth analysis, a split strategy and, for the
// balanced strategy, memory-feedback refinement.

#pragma once

#include <optional>

#include "segpipe/pipesim.hpp"

namespace segpipe {

struct PlanOptions {
  Strategy strategy = Strategy::kBalanced;
  int s = 1;
  RefineOptions refine;
  std::uint64_t profile_limit = 100000;
  int batch = 15;  // profiled scoring
  CostModel cost;
};

struct Plan {
  SegmentAssignment assignment;
  std::optional<RefineStatus> refine_status;  // balanced only
  std::vector<RefineMove> trace;

  const Partition& partition() const { return assignment.partition; }
};

Plan make_plan(const ModelGraph& graph, const DepthProfile& depths, const DeviceSpec& spec,
               const PlanOptions& options);

/// Simulated makespan of `partition`; the profiling score.
double makespan_score(const Partition& partition, const ModelGraph& graph,
                      const DepthProfile& depths, const DeviceSpec& spec, const CostModel& cost,
                      int batch);

}  // namespace segpipe
