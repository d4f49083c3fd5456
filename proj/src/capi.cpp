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

#include "segpipe/segpipe.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "segpipe/config.hpp"
#include "segpipe/error.hpp"
#include "segpipe/io.hpp"
#include "segpipe/plan.hpp"
#include "segpipe/report.hpp"
#include "segpipe/synthgen.hpp"

struct segpipe_context {
  segpipe::Settings settings;
  std::string last_error;
};

struct segpipe_graph {
  segpipe::ModelGraph graph;
  segpipe::DepthProfile depths;
};

struct segpipe_plan {
  segpipe::ModelGraph graph;
  segpipe::DepthProfile depths;
  segpipe::DeviceSpec device;
  segpipe::Plan plan;
};

namespace {

segpipe_status to_status(segpipe::ErrorCode code) {
  switch (code) {
    case segpipe::ErrorCode::kInvalidArgument: return SEGPIPE_ERR_INVALID_ARGUMENT;
    case segpipe::ErrorCode::kSchema: return SEGPIPE_ERR_SCHEMA;
    case segpipe::ErrorCode::kIo: return SEGPIPE_ERR_IO;
    case segpipe::ErrorCode::kCycle: return SEGPIPE_ERR_CYCLE;
    case segpipe::ErrorCode::kInfeasible: return SEGPIPE_ERR_INFEASIBLE;
    case segpipe::ErrorCode::kTooManyPartitions: return SEGPIPE_ERR_TOO_MANY_PARTITIONS;
    case segpipe::ErrorCode::kPipeline: return SEGPIPE_ERR_PIPELINE;
  }
  return SEGPIPE_ERR_INTERNAL;
}

// Runs fn, translating exceptions into a status and the context's message.
template <typename Fn>
segpipe_status guarded(segpipe_context* ctx, Fn&& fn) {
  if (!ctx) return SEGPIPE_ERR_INVALID_ARGUMENT;
  ctx->last_error.clear();
  try {
    fn();
    return SEGPIPE_OK;
  } catch (const segpipe::Error& e) {
    ctx->last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    ctx->last_error = "out of memory";
  } catch (const std::exception& e) {
    ctx->last_error = e.what();
  }
  return SEGPIPE_ERR_INTERNAL;
}

void require(bool cond, const char* what) {
  if (!cond) throw segpipe::invalid_argument(std::string(what) + " must not be null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(char** out, const std::string& s) {
  if (out) *out = dup_string(s);
}

segpipe::SynthSpec from_c(const segpipe_synth_spec& c) {
  segpipe::SynthSpec spec;
  spec.L = c.layers;
  spec.C = c.in_channels;
  spec.W = c.width;
  spec.H = c.height;
  spec.Fw = c.filter_w;
  spec.Fh = c.filter_h;
  spec.f = c.filters;
  spec.dtype_bytes = c.dtype_bytes;
  return spec;
}

segpipe::Strategy from_c(segpipe_strategy s) {
  switch (s) {
    case SEGPIPE_STRATEGY_BALANCED: return segpipe::Strategy::kBalanced;
    case SEGPIPE_STRATEGY_COMPILER_LIKE: return segpipe::Strategy::kCompilerLike;
    case SEGPIPE_STRATEGY_PROFILED: return segpipe::Strategy::kProfiled;
    case SEGPIPE_STRATEGY_MANUAL: return segpipe::Strategy::kManual;
  }
  throw segpipe::invalid_argument("unknown strategy " + std::to_string(static_cast<int>(s)));
}

// Validation failures become one schema error listing every violation.
segpipe_graph* make_graph(segpipe::ModelGraph graph) {
  const auto result = segpipe::validate(graph);
  if (!result.ok()) {
    std::string msg = "invalid graph '" + graph.name + "':";
    for (const auto& v : result.violations) {
      msg += " [" + std::string(segpipe::to_string(v.kind)) + "] " + v.message + ";";
    }
    msg.pop_back();
    throw segpipe::schema_error(msg);
  }
  auto* g = new segpipe_graph{std::move(graph), {}};
  try {
    g->depths = segpipe::compute_depths(g->graph);
  } catch (...) {
    delete g;
    throw;
  }
  return g;
}

}  // namespace

extern "C" {

const char* segpipe_version(void) { return "1.0.0"; }

const char* segpipe_status_string(segpipe_status status) {
  switch (status) {
    case SEGPIPE_OK: return "ok";
    case SEGPIPE_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SEGPIPE_ERR_SCHEMA: return "schema error";
    case SEGPIPE_ERR_IO: return "i/o error";
    case SEGPIPE_ERR_CYCLE: return "cycle";
    case SEGPIPE_ERR_INFEASIBLE: return "infeasible";
    case SEGPIPE_ERR_TOO_MANY_PARTITIONS: return "too many partitions";
    case SEGPIPE_ERR_PIPELINE: return "pipeline error";
    case SEGPIPE_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void segpipe_string_free(char* str) { std::free(str); }

segpipe_status segpipe_context_create(segpipe_context** out) {
  if (!out) return SEGPIPE_ERR_INVALID_ARGUMENT;
  *out = new (std::nothrow) segpipe_context();
  return *out ? SEGPIPE_OK : SEGPIPE_ERR_INTERNAL;
}

void segpipe_context_destroy(segpipe_context* ctx) { delete ctx; }

const char* segpipe_context_last_error(const segpipe_context* ctx) {
  return ctx ? ctx->last_error.c_str() : "null context";
}

segpipe_status segpipe_context_set(segpipe_context* ctx, const char* key, const char* value) {
  return guarded(ctx, [&] {
    require(key && value, "key/value");
    segpipe::Settings next = ctx->settings;
    segpipe::apply_setting(next, key, value);
    ctx->settings = next;
  });
}

segpipe_status segpipe_context_get(segpipe_context* ctx, const char* key, double* value) {
  return guarded(ctx, [&] {
    require(key && value, "key/value");
    *value = segpipe::get_setting(ctx->settings, key);
  });
}

segpipe_status segpipe_context_load_config(segpipe_context* ctx, const char* path) {
  return guarded(ctx, [&] {
    require(path, "path");
    segpipe::Settings next = ctx->settings;
    segpipe::apply_config_file(next, path);
    ctx->settings = next;
  });
}

void segpipe_synth_spec_init(segpipe_synth_spec* spec) {
  if (!spec) return;
  const segpipe::SynthSpec d;
  *spec = {d.L, d.C, d.W, d.H, d.Fw, d.Fh, d.f, d.dtype_bytes};
}

segpipe_status segpipe_synth_param_count(segpipe_context* ctx, const segpipe_synth_spec* spec,
                                         uint64_t* out) {
  return guarded(ctx, [&] {
    require(spec && out, "spec/out");
    *out = segpipe::param_count(from_c(*spec));
  });
}

segpipe_status segpipe_graph_synth(segpipe_context* ctx, const segpipe_synth_spec* spec,
                                   segpipe_graph** out) {
  return guarded(ctx, [&] {
    require(spec && out, "spec/out");
    *out = make_graph(segpipe::generate(from_c(*spec)));
  });
}

segpipe_status segpipe_graph_parse(segpipe_context* ctx, const char* json, segpipe_graph** out) {
  return guarded(ctx, [&] {
    require(json && out, "json/out");
    *out = make_graph(segpipe::graph_from_json(json));
  });
}

segpipe_status segpipe_graph_load(segpipe_context* ctx, const char* path, segpipe_graph** out) {
  return guarded(ctx, [&] {
    require(path && out, "path/out");
    *out = make_graph(segpipe::graph_from_json(segpipe::read_text_file(path)));
  });
}

void segpipe_graph_destroy(segpipe_graph* graph) { delete graph; }

segpipe_status segpipe_graph_to_json(segpipe_context* ctx, const segpipe_graph* graph,
                                     char** out) {
  return guarded(ctx, [&] {
    require(graph && out, "graph/out");
    emit(out, segpipe::graph_to_json(graph->graph));
  });
}

segpipe_status segpipe_graph_get_info(segpipe_context* ctx, const segpipe_graph* graph,
                                      segpipe_graph_info* out) {
  return guarded(ctx, [&] {
    require(graph && out, "graph/out");
    out->nodes = graph->graph.nodes.size();
    out->edges = graph->graph.edges.size();
    out->depth = graph->depths.d;
    out->total_params = graph->graph.total_params();
    out->tpus_needed = segpipe::tpus_needed(out->total_params, ctx->settings.device);
  });
}

segpipe_status segpipe_tpus_needed(segpipe_context* ctx, uint64_t total_bytes, uint64_t* out) {
  return guarded(ctx, [&] {
    require(out, "out");
    *out = segpipe::tpus_needed(total_bytes, ctx->settings.device);
  });
}

segpipe_status segpipe_count_partitions(segpipe_context* ctx, int depth, int segments,
                                        uint64_t* out) {
  return guarded(ctx, [&] {
    require(out, "out");
    *out = segpipe::count_partitions(depth, segments);
  });
}

void segpipe_plan_options_init(segpipe_plan_options* options) {
  if (!options) return;
  const segpipe::PlanOptions d;
  options->strategy = SEGPIPE_STRATEGY_BALANCED;
  options->segments = 0;
  options->fast = 0;
  options->max_iters = 0;
  options->profile_limit = d.profile_limit;
  options->batch = d.batch;
}

segpipe_status segpipe_plan_create(segpipe_context* ctx, const segpipe_graph* graph,
                                   const segpipe_plan_options* options, segpipe_plan** out) {
  return guarded(ctx, [&] {
    require(graph && options && out, "graph/options/out");
    segpipe::PlanOptions po;
    po.strategy = from_c(options->strategy);
    po.s = options->segments;
    if (po.s <= 0) {
      po.s = static_cast<int>(
          segpipe::tpus_needed(graph->graph.total_params(), ctx->settings.device));
    }
    po.refine.fast = options->fast != 0;
    po.refine.max_iters = options->max_iters > 0 ? options->max_iters : 0;
    po.profile_limit = options->profile_limit;
    po.batch = options->batch;
    po.cost = ctx->settings.cost;
    auto plan = segpipe::make_plan(graph->graph, graph->depths, ctx->settings.device, po);
    *out = new segpipe_plan{graph->graph, graph->depths, ctx->settings.device, std::move(plan)};
  });
}

segpipe_status segpipe_plan_from_partition(segpipe_context* ctx, const segpipe_graph* graph,
                                           const char* partition_json, segpipe_plan** out) {
  return guarded(ctx, [&] {
    require(graph && partition_json && out, "graph/partition/out");
    const auto file = segpipe::partition_from_json(partition_json);
    if (file.d && *file.d != graph->depths.d) {
      throw segpipe::schema_error("partition was made for depth " + std::to_string(*file.d) +
                                  " but graph '" + graph->graph.name + "' has depth " +
                                  std::to_string(graph->depths.d));
    }
    segpipe::check(file.partition, graph->depths.d);
    segpipe::Plan plan;
    plan.assignment = segpipe::materialize(file.partition, graph->graph, graph->depths,
                                           ctx->settings.device);
    *out = new segpipe_plan{graph->graph, graph->depths, ctx->settings.device, std::move(plan)};
  });
}

void segpipe_plan_destroy(segpipe_plan* plan) { delete plan; }

segpipe_refine_status segpipe_plan_refine_status(const segpipe_plan* plan) {
  if (!plan || !plan->plan.refine_status) return SEGPIPE_REFINE_NONE;
  switch (*plan->plan.refine_status) {
    case segpipe::RefineStatus::kResolved: return SEGPIPE_REFINE_RESOLVED;
    case segpipe::RefineStatus::kUnresolved: return SEGPIPE_REFINE_UNRESOLVED;
    case segpipe::RefineStatus::kInfeasible: return SEGPIPE_REFINE_INFEASIBLE;
  }
  return SEGPIPE_REFINE_NONE;
}

int segpipe_plan_segments(const segpipe_plan* plan) {
  return plan ? plan->plan.partition().s : 0;
}

uint64_t segpipe_plan_host_bytes(const segpipe_plan* plan) {
  return plan ? plan->plan.assignment.host_bytes() : 0;
}

segpipe_status segpipe_plan_partition_json(segpipe_context* ctx, const segpipe_plan* plan,
                                           char** out) {
  return guarded(ctx, [&] {
    require(plan && out, "plan/out");
    emit(out, segpipe::partition_to_json(plan->plan.partition(), plan->depths.d));
  });
}

segpipe_status segpipe_plan_assignment_json(segpipe_context* ctx, const segpipe_plan* plan,
                                            char** out) {
  return guarded(ctx, [&] {
    require(plan && out, "plan/out");
    emit(out, segpipe::assignment_to_json(plan->plan.assignment, plan->plan.refine_status));
  });
}

segpipe_status segpipe_plan_trace_jsonl(segpipe_context* ctx, const segpipe_plan* plan,
                                        char** out) {
  return guarded(ctx, [&] {
    require(plan && out, "plan/out");
    emit(out, segpipe::trace_to_jsonl(plan->plan.trace));
  });
}

segpipe_status segpipe_plan_table(segpipe_context* ctx, const segpipe_plan* plan, char** out) {
  return guarded(ctx, [&] {
    require(plan && out, "plan/out");
    emit(out, segpipe::segment_table(plan->plan.assignment, plan->plan.refine_status));
  });
}

void segpipe_sim_options_init(segpipe_sim_options* options) {
  if (!options) return;
  options->batch = 15;
  options->baseline_single = 0;
  options->concurrent = 0;
  options->queue_capacity = 2;
}

segpipe_status segpipe_simulate(segpipe_context* ctx, const segpipe_plan* plan,
                                const segpipe_sim_options* options, char** json_out,
                                char** csv_out) {
  return guarded(ctx, [&] {
    require(plan && options, "plan/options");
    const auto& cost = ctx->settings.cost;
    segpipe::check(cost, plan->device);
    const auto& assignment = plan->plan.assignment;
    segpipe::SimResult result;
    if (options->concurrent) {
      segpipe::RunOptions run;
      run.mode = segpipe::RunMode::kConcurrent;
      run.queue_capacity = options->queue_capacity;
      result = segpipe::run_pipeline(assignment, cost, options->batch, run).analytic;
    } else {
      result = segpipe::simulate(assignment, cost, options->batch);
    }
    if (options->baseline_single) {
      const auto single =
          segpipe::single_device_assignment(plan->graph, plan->depths, plan->device);
      result.speedup_vs_single =
          segpipe::simulate(assignment, cost, options->batch, &single).speedup_vs_single;
    }
    emit(json_out, segpipe::sim_result_to_json(result));
    if (csv_out) {
      segpipe::StrategyRow row;
      row.model = assignment.model;
      row.strategy = std::string(segpipe::to_string(assignment.partition.strategy));
      row.s = assignment.partition.s;
      row.splits = assignment.partition.splits;
      row.delta_s_bytes = segpipe::imbalance_delta(assignment);
      row.host_bytes = assignment.host_bytes();
      row.sim = result;
      emit(csv_out, segpipe::rows_to_csv({row}));
    }
  });
}

void segpipe_compare_options_init(segpipe_compare_options* options) {
  if (!options) return;
  const segpipe::CompareOptions d;
  options->segments = 0;
  options->batch = d.batch;
  options->profile_limit = d.profile_limit;
  options->fast = 0;
}

segpipe_status segpipe_compare(segpipe_context* ctx, const segpipe_graph* const* graphs,
                               size_t count, const segpipe_compare_options* options,
                               char** csv_out, char** table_out, char** svg_out) {
  return guarded(ctx, [&] {
    require(options && (graphs || count == 0), "graphs/options");
    if (count == 0) throw segpipe::invalid_argument("compare needs at least one model");
    std::vector<segpipe::ModelGraph> models;
    models.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      require(graphs[i], "graph");
      models.push_back(graphs[i]->graph);
    }
    segpipe::CompareOptions co;
    co.batch = options->batch;
    co.profile_limit = options->profile_limit;
    co.refine.fast = options->fast != 0;
    const auto comparisons = segpipe::compare_models(models, options->segments,
                                                     ctx->settings.device, ctx->settings.cost, co);
    if (csv_out) {
      std::vector<segpipe::StrategyRow> rows;
      for (const auto& c : comparisons) rows.insert(rows.end(), c.rows.begin(), c.rows.end());
      *csv_out = dup_string(segpipe::rows_to_csv(rows));
    }
    emit(table_out, segpipe::comparison_table(comparisons));
    emit(svg_out, segpipe::comparison_svg(comparisons));
  });
}

segpipe_status segpipe_canonicalize(segpipe_context* ctx, const char* text, char** out) {
  return guarded(ctx, [&] {
    require(text && out, "text/out");
    emit(out, segpipe::canonicalize(text));
  });
}

}  // extern "C"
