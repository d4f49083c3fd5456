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

#include "segpipe/plan.hpp"

#include "segpipe/error.hpp"

namespace segpipe {

double makespan_score(const Partition& partition, const ModelGraph& graph,
                      const DepthProfile& depths, const DeviceSpec& spec, const CostModel& cost,
                      int batch) {
  return simulate(materialize(partition, graph, depths, spec), cost, batch).makespan_s;
}

Plan make_plan(const ModelGraph& graph, const DepthProfile& depths, const DeviceSpec& spec,
               const PlanOptions& options) {
  check(spec);
  Plan plan;
  Partition partition;
  switch (options.strategy) {
    case Strategy::kBalanced: {
      const Partition initial = balanced_split(depths.P, options.s);
      RefineResult refined = refine(initial, graph, depths, spec, options.refine);
      partition = refined.partition;
      plan.refine_status = refined.status;
      plan.trace = std::move(refined.trace);
      break;
    }
    case Strategy::kCompilerLike:
      partition = compiler_like_split(graph, depths, options.s);
      break;
    case Strategy::kProfiled: {
      check(options.cost, spec);
      auto scorer = [&](const Partition& p) {
        return makespan_score(p, graph, depths, spec, options.cost, options.batch);
      };
      partition = profiled_best(graph, depths, options.s, scorer, options.profile_limit);
      break;
    }
    case Strategy::kManual:
      throw invalid_argument("manual partitions are loaded, not planned");
  }
  plan.assignment = materialize(partition, graph, depths, spec);
  return plan;
}

}  // namespace segpipe
