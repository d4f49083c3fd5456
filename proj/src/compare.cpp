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

#include <algorithm>
#include <exception>
#include <string>
#include <thread>

#include "segpipe/error.hpp"
#include "segpipe/plan.hpp"

namespace segpipe {

namespace {

StrategyRow make_row(const std::string& strategy, const SegmentAssignment& assignment,
                     const SegmentAssignment& single, const CostModel& cost, int batch) {
  StrategyRow row;
  row.model = assignment.model;
  row.strategy = strategy;
  row.s = assignment.partition.s;
  row.splits = assignment.partition.splits;
  row.status = "ok";
  row.delta_s_bytes = imbalance_delta(assignment);
  row.host_bytes = assignment.host_bytes();
  row.sim = simulate(assignment, cost, batch, &single);
  return row;
}

}  // namespace

Comparison compare_strategies(const ModelGraph& graph, int s, const DeviceSpec& spec,
                              const CostModel& cost, const CompareOptions& options) {
  if (s < 2) throw invalid_argument("comparison needs at least 2 segments");
  check(spec);
  check(cost, spec);
  const DepthProfile depths = compute_depths(graph);
  if (s > depths.d) {
    throw invalid_argument("cannot split " + std::to_string(depths.d) + " depth levels into " +
                           std::to_string(s) + " segments");
  }

  Comparison cmp;
  cmp.model = graph.name;
  const SegmentAssignment single = single_device_assignment(graph, depths, spec);
  cmp.rows.push_back(make_row("single", single, single, cost, options.batch));

  PlanOptions plan_options;
  plan_options.s = s;
  plan_options.refine = options.refine;
  plan_options.profile_limit = options.profile_limit;
  plan_options.batch = options.batch;
  plan_options.cost = cost;

  plan_options.strategy = Strategy::kCompilerLike;
  const Plan compiler = make_plan(graph, depths, spec, plan_options);
  cmp.rows.push_back(make_row("compiler_like", compiler.assignment, single, cost, options.batch));

  plan_options.strategy = Strategy::kBalanced;
  const Plan balanced = make_plan(graph, depths, spec, plan_options);
  StrategyRow row = make_row("balanced", balanced.assignment, single, cost, options.batch);
  row.status = std::string(to_string(*balanced.refine_status));
  cmp.rows.push_back(std::move(row));

  if (count_partitions(depths.d, s) <= options.profile_limit) {
    plan_options.strategy = Strategy::kProfiled;
    const Plan profiled = make_plan(graph, depths, spec, plan_options);
    cmp.rows.push_back(make_row("profiled", profiled.assignment, single, cost, options.batch));
  }
  return cmp;
}

std::vector<Comparison> compare_models(std::span<const ModelGraph> graphs, int s,
                                       const DeviceSpec& spec, const CostModel& cost,
                                       const CompareOptions& options) {
  std::vector<Comparison> out(graphs.size());
  std::vector<std::exception_ptr> errors(graphs.size());
  {
    std::vector<std::jthread> workers;
    workers.reserve(graphs.size());
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      workers.emplace_back([&, i] {
        try {
          int segments = s;
          if (segments <= 0) {
            segments = static_cast<int>(
                std::max<std::uint64_t>(2, tpus_needed(graphs[i].total_params(), spec)));
          }
          out[i] = compare_strategies(graphs[i], segments, spec, cost, options);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace segpipe
