/*
 * Copyright 2026 The segpipe Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the segpipe model-segmentation toolkit.
 *
 * All objects are opaque handles. Every fallible call returns a
 * segpipe_status; on failure the context keeps a message retrievable with
 * segpipe_context_last_error until the next call on that context. Strings
 * returned through char** out-parameters are heap allocated and must be
 * released with segpipe_string_free. A context is not thread-safe; use one
 * per thread.
 */

#ifndef SEGPIPE_SEGPIPE_H_
#define SEGPIPE_SEGPIPE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SEGPIPE_API __declspec(dllexport)
#else
#define SEGPIPE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum segpipe_status {
  SEGPIPE_OK = 0,
  SEGPIPE_ERR_INVALID_ARGUMENT = 1,
  SEGPIPE_ERR_SCHEMA = 2,
  SEGPIPE_ERR_IO = 3,
  SEGPIPE_ERR_CYCLE = 4,
  SEGPIPE_ERR_INFEASIBLE = 5,
  SEGPIPE_ERR_TOO_MANY_PARTITIONS = 6,
  SEGPIPE_ERR_PIPELINE = 7,
  SEGPIPE_ERR_INTERNAL = 8
} segpipe_status;

typedef enum segpipe_strategy {
  SEGPIPE_STRATEGY_BALANCED = 0,
  SEGPIPE_STRATEGY_COMPILER_LIKE = 1,
  SEGPIPE_STRATEGY_PROFILED = 2,
  SEGPIPE_STRATEGY_MANUAL = 3
} segpipe_strategy;

/* Refinement outcome; NONE for plans that were not refined. */
typedef enum segpipe_refine_status {
  SEGPIPE_REFINE_NONE = 0,
  SEGPIPE_REFINE_RESOLVED = 1,
  SEGPIPE_REFINE_UNRESOLVED = 2,
  SEGPIPE_REFINE_INFEASIBLE = 3
} segpipe_refine_status;

typedef struct segpipe_context segpipe_context;
typedef struct segpipe_graph segpipe_graph;
typedef struct segpipe_plan segpipe_plan;

typedef struct segpipe_synth_spec {
  uint64_t layers;
  uint64_t in_channels;
  uint64_t width;
  uint64_t height;
  uint64_t filter_w;
  uint64_t filter_h;
  uint64_t filters;
  uint64_t dtype_bytes;
} segpipe_synth_spec;

typedef struct segpipe_graph_info {
  size_t nodes;
  size_t edges;
  int depth;
  uint64_t total_params;
  uint64_t tpus_needed;
} segpipe_graph_info;

typedef struct segpipe_plan_options {
  segpipe_strategy strategy;
  int segments;           /* <= 0: tpus_needed of the model */
  int fast;               /* multi-level refinement moves */
  int max_iters;          /* refinement rounds; <= 0: 10 * depth */
  uint64_t profile_limit; /* largest partition count profiling accepts */
  int batch;              /* batch used to score profiled candidates */
} segpipe_plan_options;

typedef struct segpipe_sim_options {
  int batch;
  int baseline_single; /* fill speedup_vs_single */
  int concurrent;      /* run worker threads instead of the formula */
  size_t queue_capacity;
} segpipe_sim_options;

typedef struct segpipe_compare_options {
  int segments; /* <= 0: max(2, tpus_needed) per model */
  int batch;
  uint64_t profile_limit;
  int fast;
} segpipe_compare_options;

SEGPIPE_API const char* segpipe_version(void);
SEGPIPE_API const char* segpipe_status_string(segpipe_status status);
SEGPIPE_API void segpipe_string_free(char* str);

SEGPIPE_API segpipe_status segpipe_context_create(segpipe_context** out);
SEGPIPE_API void segpipe_context_destroy(segpipe_context* ctx);
SEGPIPE_API const char* segpipe_context_last_error(const segpipe_context* ctx);
/* Device and cost-model knobs, e.g. ("reserved_bytes", "0"). */
SEGPIPE_API segpipe_status segpipe_context_set(segpipe_context* ctx, const char* key,
                                               const char* value);
SEGPIPE_API segpipe_status segpipe_context_get(segpipe_context* ctx, const char* key,
                                               double* value);
SEGPIPE_API segpipe_status segpipe_context_load_config(segpipe_context* ctx, const char* path);

SEGPIPE_API void segpipe_synth_spec_init(segpipe_synth_spec* spec);
SEGPIPE_API segpipe_status segpipe_synth_param_count(segpipe_context* ctx,
                                                     const segpipe_synth_spec* spec,
                                                     uint64_t* out);
SEGPIPE_API segpipe_status segpipe_graph_synth(segpipe_context* ctx,
                                               const segpipe_synth_spec* spec,
                                               segpipe_graph** out);
/* Parsing validates the graph; violations are reported as SCHEMA errors. */
SEGPIPE_API segpipe_status segpipe_graph_parse(segpipe_context* ctx, const char* json,
                                               segpipe_graph** out);
SEGPIPE_API segpipe_status segpipe_graph_load(segpipe_context* ctx, const char* path,
                                              segpipe_graph** out);
SEGPIPE_API void segpipe_graph_destroy(segpipe_graph* graph);
SEGPIPE_API segpipe_status segpipe_graph_to_json(segpipe_context* ctx,
                                                 const segpipe_graph* graph, char** out);
SEGPIPE_API segpipe_status segpipe_graph_get_info(segpipe_context* ctx,
                                                  const segpipe_graph* graph,
                                                  segpipe_graph_info* out);

SEGPIPE_API segpipe_status segpipe_tpus_needed(segpipe_context* ctx, uint64_t total_bytes,
                                               uint64_t* out);
SEGPIPE_API segpipe_status segpipe_count_partitions(segpipe_context* ctx, int depth,
                                                    int segments, uint64_t* out);

SEGPIPE_API void segpipe_plan_options_init(segpipe_plan_options* options);
SEGPIPE_API segpipe_status segpipe_plan_create(segpipe_context* ctx, const segpipe_graph* graph,
                                               const segpipe_plan_options* options,
                                               segpipe_plan** out);
/* Loads a partition file; a depth that disagrees with the graph is a SCHEMA
 * error. */
SEGPIPE_API segpipe_status segpipe_plan_from_partition(segpipe_context* ctx,
                                                       const segpipe_graph* graph,
                                                       const char* partition_json,
                                                       segpipe_plan** out);
SEGPIPE_API void segpipe_plan_destroy(segpipe_plan* plan);
SEGPIPE_API segpipe_refine_status segpipe_plan_refine_status(const segpipe_plan* plan);
SEGPIPE_API int segpipe_plan_segments(const segpipe_plan* plan);
SEGPIPE_API uint64_t segpipe_plan_host_bytes(const segpipe_plan* plan);
SEGPIPE_API segpipe_status segpipe_plan_partition_json(segpipe_context* ctx,
                                                       const segpipe_plan* plan, char** out);
SEGPIPE_API segpipe_status segpipe_plan_assignment_json(segpipe_context* ctx,
                                                        const segpipe_plan* plan, char** out);
SEGPIPE_API segpipe_status segpipe_plan_trace_jsonl(segpipe_context* ctx,
                                                    const segpipe_plan* plan, char** out);
SEGPIPE_API segpipe_status segpipe_plan_table(segpipe_context* ctx, const segpipe_plan* plan,
                                              char** out);

SEGPIPE_API void segpipe_sim_options_init(segpipe_sim_options* options);
/* json_out and csv_out may each be NULL. */
SEGPIPE_API segpipe_status segpipe_simulate(segpipe_context* ctx, const segpipe_plan* plan,
                                            const segpipe_sim_options* options, char** json_out,
                                            char** csv_out);

SEGPIPE_API void segpipe_compare_options_init(segpipe_compare_options* options);
/* Any of csv_out, table_out, svg_out may be NULL. Rows follow input order. */
SEGPIPE_API segpipe_status segpipe_compare(segpipe_context* ctx,
                                           const segpipe_graph* const* graphs, size_t count,
                                           const segpipe_compare_options* options,
                                           char** csv_out, char** table_out, char** svg_out);

/* Re-serializes any JSON artifact the toolkit emits. */
SEGPIPE_API segpipe_status segpipe_canonicalize(segpipe_context* ctx, const char* text,
                                                char** out);

#ifdef __cplusplus
}
#endif

#endif /* SEGPIPE_SEGPIPE_H_ */
