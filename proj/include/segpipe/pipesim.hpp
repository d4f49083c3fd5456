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

// Cost model and pipeline simulation for segmented multi-device inference.
//
// Each segment runs as one pipeline stage. A stage's per-input time is its
// compute (2 ops per MAC at the effective throughput), plus the penalty of
// streaming host-resident weights, plus the incoming activation transfer, plus
// a fixed per-input overhead.

#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "segpipe/partition.hpp"
#include "segpipe/refine.hpp"

namespace segpipe {

struct CostModel {
  double eff_tops = 1.4;                         // 10^12 int8 ops/s actually achieved
  double host_read_penalty_s_per_byte = 4.2e-9;  // ~10 ms per spilled 2.36 MB layer
  double transfer_s_per_byte = 3.3e-10;          // ~3 GB/s between stages
  double fixed_overhead_s = 1e-4;
};

/// Throws Error(kInvalidArgument) on negative knobs, eff_tops <= 0, or
/// eff_tops above the device peak.
void check(const CostModel& cost, const DeviceSpec& spec);

struct SimResult {
  std::vector<double> stage_times_s;
  int batch = 1;
  double makespan_s = 0.0;
  double throughput_ips = 0.0;
  std::optional<double> speedup_vs_single;
  double max_stage_s = 0.0;
  double mean_stage_s = 0.0;
  double stage_deviation_s = 0.0;  // slowest stage minus mean stage

  bool operator==(const SimResult&) const = default;
};

double stage_time(const Segment& segment, const CostModel& cost);

/// sum(t) + (batch - 1) * max(t).
double pipeline_makespan(std::span<const double> stage_times, int batch);

/// Analytic result for explicit stage times.
SimResult simulate_stages(std::vector<double> stage_times, int batch);

/// Analytic result for an assignment. With a baseline (normally the s=1
/// assignment of the same graph) speedup_vs_single is filled in.
SimResult simulate(const SegmentAssignment& assignment, const CostModel& cost, int batch,
                   const SegmentAssignment* baseline = nullptr);

/// Whole graph on one device.
SegmentAssignment single_device_assignment(const ModelGraph& graph, const DepthProfile& depths,
                                           const DeviceSpec& spec);

enum class RunMode { kAnalytic, kConcurrent };

struct RunOptions {
  RunMode mode = RunMode::kAnalytic;
  std::size_t queue_capacity = 2;
  // Stand-in for device execution; the default sleeps for `seconds`.
  std::function<void(int stage, int token, double seconds)> executor;
  // No output for this long is treated as a deadlock.
  std::chrono::milliseconds stall_timeout{5000};
};

struct RunResult {
  SimResult analytic;
  std::vector<int> output_order;
  double wall_makespan_s = 0.0;  // equals analytic makespan in analytic mode
};

/// One worker thread per stage, joined by bounded FIFO queues. Outputs must
/// come back in input order. Throws Error(kPipeline) naming the stage on
/// worker failure, stall, or reordering.
RunResult run_stages(std::span<const double> stage_times, int batch, const RunOptions& options);

RunResult run_pipeline(const SegmentAssignment& assignment, const CostModel& cost, int batch,
                       const RunOptions& options);

struct StrategyRow {
  std::string model;
  std::string strategy;  // single, compiler_like, balanced, profiled
  int s = 1;
  std::vector<int> splits;
  std::string status;  // refine status for balanced, "ok" otherwise
  std::uint64_t delta_s_bytes = 0;
  std::uint64_t host_bytes = 0;
  SimResult sim;
};

struct Comparison {
  std::string model;
  std::vector<StrategyRow> rows;
};

struct CompareOptions {
  int batch = 15;
  std::uint64_t profile_limit = 100000;
  RefineOptions refine;
};

/// Single device, compiler_like, balanced+refine and, when the partition
/// count is within profile_limit, profiled. Throws Error(kInvalidArgument)
/// for s < 2 or more segments than depth levels or layers.
Comparison compare_strategies(const ModelGraph& graph, int s, const DeviceSpec& spec,
                              const CostModel& cost, const CompareOptions& options = {});

// s <= 0 picks max(2, tpus_needed) per model. Models are evaluated on
// separate threads; the result keeps input order.
std::vector<Comparison> compare_models(std::span<const ModelGraph> graphs, int s,
                                       const DeviceSpec& spec, const CostModel& cost,
                                       const CompareOptions& options = {});

}  // namespace segpipe
