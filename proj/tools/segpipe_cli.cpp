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

// segpipe command-line driver. Talks to the library through the C API only.
//
// Exit codes: 0 success, 2 usage / schema / input errors, 3 infeasible or
// unresolved partition, 1 anything else.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "segpipe/segpipe.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;

// Thrown to unwind out of a command with a specific exit code.
struct Exit {
  int code;
};

struct ContextDeleter {
  void operator()(segpipe_context* c) const { segpipe_context_destroy(c); }
};
struct GraphDeleter {
  void operator()(segpipe_graph* g) const { segpipe_graph_destroy(g); }
};
struct PlanDeleter {
  void operator()(segpipe_plan* p) const { segpipe_plan_destroy(p); }
};
struct StringDeleter {
  void operator()(char* s) const { segpipe_string_free(s); }
};
using ContextPtr = std::unique_ptr<segpipe_context, ContextDeleter>;
using GraphPtr = std::unique_ptr<segpipe_graph, GraphDeleter>;
using PlanPtr = std::unique_ptr<segpipe_plan, PlanDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

int exit_code_for(segpipe_status status) {
  switch (status) {
    case SEGPIPE_OK: return kExitOk;
    case SEGPIPE_ERR_INVALID_ARGUMENT:
    case SEGPIPE_ERR_SCHEMA:
    case SEGPIPE_ERR_IO:
    case SEGPIPE_ERR_CYCLE:
    case SEGPIPE_ERR_TOO_MANY_PARTITIONS:
      return kExitUsage;
    case SEGPIPE_ERR_INFEASIBLE: return kExitInfeasible;
    default: return kExitFailure;
  }
}

[[noreturn]] void fail(int code, const std::string& message) {
  std::cerr << "segpipe: error: " << message << "\n";
  throw Exit{code};
}

void check(segpipe_context* ctx, segpipe_status status) {
  if (status != SEGPIPE_OK) fail(exit_code_for(status), segpipe_context_last_error(ctx));
}

std::string take(char* s) {
  StringPtr owned(s);
  return owned ? std::string(owned.get()) : std::string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(kExitUsage, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) fail(kExitUsage, "cannot write '" + path + "'");
}

// "-" or empty means stdout.
void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

GraphPtr load_graph(segpipe_context* ctx, const std::string& path) {
  segpipe_graph* g = nullptr;
  const auto status = segpipe_graph_load(ctx, path.c_str(), &g);
  if (status != SEGPIPE_OK) {
    fail(exit_code_for(status), path + ": " + segpipe_context_last_error(ctx));
  }
  return GraphPtr(g);
}

struct Globals {
  std::string config;
  std::vector<std::string> device;
  std::vector<std::string> cost;
};

// Built-ins, then the config file (--config, else $SEGPIPE_CONFIG), then flags.
void configure(segpipe_context* ctx, const Globals& g) {
  std::string config = g.config;
  if (config.empty()) {
    if (const char* env = std::getenv("SEGPIPE_CONFIG"); env && *env) config = env;
  }
  if (!config.empty()) {
    const auto status = segpipe_context_load_config(ctx, config.c_str());
    if (status != SEGPIPE_OK) {
      fail(kExitUsage, "config '" + config + "': " + segpipe_context_last_error(ctx));
    }
  }
  for (const auto* list : {&g.device, &g.cost}) {
    for (const auto& kv : *list) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) fail(kExitUsage, "expected key=value, got '" + kv + "'");
      const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
      check(ctx, segpipe_context_set(ctx, key.c_str(), value.c_str()));
    }
  }
}

// ---- synth -----------------------------------------------------------------

struct SynthArgs {
  segpipe_synth_spec spec{};
  std::uint64_t f = 0;
  std::uint64_t F = 0;
  std::string sweep;
  std::string out;
};

void run_synth(segpipe_context* ctx, SynthArgs& a) {
  if (a.F) a.spec.filter_w = a.spec.filter_h = a.F;
  if (a.sweep.empty()) {
    if (!a.f) fail(kExitUsage, "synth needs --f or --sweep");
    a.spec.filters = a.f;
    segpipe_graph* g = nullptr;
    check(ctx, segpipe_graph_synth(ctx, &a.spec, &g));
    GraphPtr graph(g);
    char* json = nullptr;
    check(ctx, segpipe_graph_to_json(ctx, graph.get(), &json));
    write_output(a.out, take(json));
    return;
  }

  if (a.f) fail(kExitUsage, "--f and --sweep are mutually exclusive");
  std::uint64_t lo = 0, hi = 0, step = 0;
  char tail = 0;
  if (std::sscanf(a.sweep.c_str(), "%lu:%lu:%lu%c", &lo, &hi, &step, &tail) != 3 || lo == 0 ||
      step == 0 || hi < lo) {
    fail(kExitUsage, "--sweep expects f_min:f_max:step with 1 <= f_min <= f_max, step >= 1");
  }
  if (a.out.empty()) fail(kExitUsage, "--sweep needs -o <directory>");
  std::error_code ec;
  std::filesystem::create_directories(a.out, ec);
  if (ec) fail(kExitUsage, "cannot create '" + a.out + "': " + ec.message());
  std::size_t written = 0;
  for (std::uint64_t f = lo; f <= hi; f += step) {
    a.spec.filters = f;
    segpipe_graph* g = nullptr;
    check(ctx, segpipe_graph_synth(ctx, &a.spec, &g));
    GraphPtr graph(g);
    char* json = nullptr;
    check(ctx, segpipe_graph_to_json(ctx, graph.get(), &json));
    const std::string name = "synth_L" + std::to_string(a.spec.layers) + "_f" + std::to_string(f);
    write_file((std::filesystem::path(a.out) / (name + ".json")).string(), take(json));
    ++written;
  }
  std::cerr << "wrote " << written << " graphs to " << a.out << "\n";
}

// ---- partition -------------------------------------------------------------

struct PartitionArgs {
  std::string graph;
  std::string strategy = "balanced";
  int tpus = 0;
  bool autosize = false;
  bool fast = false;
  int max_iters = 0;
  std::uint64_t limit = 100000;
  int batch = 15;
  std::string out;
  std::string assignment;
  std::string trace;
};

segpipe_strategy parse_strategy(const std::string& name) {
  if (name == "balanced") return SEGPIPE_STRATEGY_BALANCED;
  if (name == "compiler" || name == "compiler_like") return SEGPIPE_STRATEGY_COMPILER_LIKE;
  if (name == "profile" || name == "profiled") return SEGPIPE_STRATEGY_PROFILED;
  fail(kExitUsage, "unknown strategy '" + name + "' (balanced, compiler, profile)");
}

int run_partition(segpipe_context* ctx, const PartitionArgs& a) {
  if (a.tpus > 0 && a.autosize) fail(kExitUsage, "--tpus and --auto are mutually exclusive");
  if (a.tpus <= 0 && !a.autosize) fail(kExitUsage, "partition needs --tpus N or --auto");
  const GraphPtr graph = load_graph(ctx, a.graph);

  segpipe_plan_options opts;
  segpipe_plan_options_init(&opts);
  opts.strategy = parse_strategy(a.strategy);
  opts.segments = a.autosize ? 0 : a.tpus;
  opts.fast = a.fast;
  opts.max_iters = a.max_iters;
  opts.profile_limit = a.limit;
  opts.batch = a.batch;
  if (a.autosize) {
    segpipe_graph_info info;
    check(ctx, segpipe_graph_get_info(ctx, graph.get(), &info));
    std::cerr << "auto: " << info.total_params << " parameter bytes need " << info.tpus_needed
              << " devices\n";
  }

  segpipe_plan* p = nullptr;
  check(ctx, segpipe_plan_create(ctx, graph.get(), &opts, &p));
  const PlanPtr plan(p);

  char* text = nullptr;
  check(ctx, segpipe_plan_table(ctx, plan.get(), &text));
  std::cout << take(text);
  if (!a.out.empty()) {
    check(ctx, segpipe_plan_partition_json(ctx, plan.get(), &text));
    write_output(a.out, take(text));
  }
  if (!a.assignment.empty()) {
    check(ctx, segpipe_plan_assignment_json(ctx, plan.get(), &text));
    write_output(a.assignment, take(text));
  }
  if (!a.trace.empty()) {
    check(ctx, segpipe_plan_trace_jsonl(ctx, plan.get(), &text));
    write_output(a.trace, take(text));
  }

  const auto status = segpipe_plan_refine_status(plan.get());
  if (status == SEGPIPE_REFINE_INFEASIBLE || status == SEGPIPE_REFINE_UNRESOLVED) {
    std::cerr << "segpipe: partition still spills to host memory ("
              << (status == SEGPIPE_REFINE_INFEASIBLE ? "infeasible" : "unresolved") << ")\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

// ---- simulate --------------------------------------------------------------

struct SimulateArgs {
  std::string graph;
  std::string partition;
  int batch = 15;
  std::string baseline;
  std::string mode = "analytic";
  std::string format = "json";
  std::string out;
};

void run_simulate(segpipe_context* ctx, const SimulateArgs& a) {
  if (!a.baseline.empty() && a.baseline != "single") {
    fail(kExitUsage, "--baseline only supports 'single'");
  }
  const GraphPtr graph = load_graph(ctx, a.graph);
  const std::string partition_json = read_file(a.partition);
  segpipe_plan* p = nullptr;
  const auto status = segpipe_plan_from_partition(ctx, graph.get(), partition_json.c_str(), &p);
  if (status != SEGPIPE_OK) {
    fail(exit_code_for(status), a.partition + ": " + segpipe_context_last_error(ctx));
  }
  const PlanPtr plan(p);

  segpipe_sim_options opts;
  segpipe_sim_options_init(&opts);
  opts.batch = a.batch;
  opts.baseline_single = a.baseline == "single";
  opts.concurrent = a.mode == "concurrent";
  char* json = nullptr;
  char* csv = nullptr;
  check(ctx, segpipe_simulate(ctx, plan.get(), &opts, a.format == "json" ? &json : nullptr,
                              a.format == "csv" ? &csv : nullptr));
  write_output(a.out, a.format == "json" ? take(json) : take(csv));
}

// ---- compare ---------------------------------------------------------------

struct CompareArgs {
  std::vector<std::string> graphs;
  int tpus = 0;
  bool autosize = false;
  int batch = 15;
  std::uint64_t limit = 100000;
  bool fast = false;
  std::string csv;
  std::string plot;
};

void run_compare(segpipe_context* ctx, const CompareArgs& a) {
  if (a.graphs.empty()) fail(kExitUsage, "compare needs at least one graph file");
  if (a.tpus > 0 && a.autosize) fail(kExitUsage, "--tpus and --auto are mutually exclusive");
  std::vector<GraphPtr> owned;
  std::vector<const segpipe_graph*> graphs;
  for (const auto& path : a.graphs) {
    owned.push_back(load_graph(ctx, path));
    graphs.push_back(owned.back().get());
  }
  segpipe_compare_options opts;
  segpipe_compare_options_init(&opts);
  opts.segments = a.autosize ? 0 : a.tpus;
  opts.batch = a.batch;
  opts.profile_limit = a.limit;
  opts.fast = a.fast;
  char* csv = nullptr;
  char* table = nullptr;
  char* svg = nullptr;
  check(ctx, segpipe_compare(ctx, graphs.data(), graphs.size(), &opts,
                             a.csv.empty() ? nullptr : &csv, &table,
                             a.plot.empty() ? nullptr : &svg));
  std::cout << take(table);
  if (!a.csv.empty()) write_output(a.csv, take(csv));
  if (!a.plot.empty()) write_output(a.plot, take(svg));
}

// ---- canon -----------------------------------------------------------------

void run_canon(segpipe_context* ctx, const std::string& path, const std::string& out) {
  const std::string text = read_file(path);
  char* canonical = nullptr;
  const auto status = segpipe_canonicalize(ctx, text.c_str(), &canonical);
  if (status != SEGPIPE_OK) {
    fail(exit_code_for(status), path + ": " + segpipe_context_last_error(ctx));
  }
  write_output(out, take(canonical));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"segpipe: partition CNN models across a pipeline of edge accelerators"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(segpipe_version()));

  Globals globals;
  app.add_option("--config", globals.config, "key = value config file (default $SEGPIPE_CONFIG)");
  app.add_option("--device", globals.device, "device override, e.g. reserved_bytes=0")
      ->type_name("KEY=VALUE");
  app.add_option("--cost", globals.cost, "cost-model override, e.g. eff_tops=2.0")
      ->type_name("KEY=VALUE");

  SynthArgs synth;
  segpipe_synth_spec_init(&synth.spec);
  auto* synth_cmd = app.add_subcommand("synth", "generate synthetic conv chains");
  synth_cmd->add_option("--L", synth.spec.layers, "layers")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--C", synth.spec.in_channels, "input channels")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--W", synth.spec.width, "input width")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--H", synth.spec.height, "input height")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--F", synth.F, "square filter size")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--Fw", synth.spec.filter_w, "filter width")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--Fh", synth.spec.filter_h, "filter height")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--f", synth.f, "filters per layer")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--dtype-bytes", synth.spec.dtype_bytes, "bytes per activation element")
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--sweep", synth.sweep, "f_min:f_max:step, one file per f");
  synth_cmd->add_option("-o,--output", synth.out, "output file, or directory with --sweep");

  PartitionArgs part;
  auto* part_cmd = app.add_subcommand("partition", "split a model into pipeline segments");
  part_cmd->add_option("graph", part.graph, "graph JSON")->required();
  part_cmd->add_option("--strategy", part.strategy, "balanced | compiler | profile");
  part_cmd->add_option("--tpus", part.tpus, "number of segments")->check(CLI::PositiveNumber);
  part_cmd->add_flag("--auto", part.autosize, "use as many devices as the weights need");
  part_cmd->add_flag("--fast", part.fast, "move splits several levels per step");
  part_cmd->add_option("--max-iters", part.max_iters, "refinement rounds (default 10 x depth)");
  part_cmd->add_option("--limit", part.limit, "largest partition count to profile");
  part_cmd->add_option("--batch", part.batch, "batch for profiled scoring")
      ->check(CLI::PositiveNumber);
  part_cmd->add_option("-o,--output", part.out, "partition JSON");
  part_cmd->add_option("--assignment", part.assignment, "segment assignment JSON");
  part_cmd->add_option("--trace", part.trace, "refinement trace JSONL");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "simulate pipelined inference");
  sim_cmd->add_option("graph", sim.graph, "graph JSON")->required();
  sim_cmd->add_option("partition", sim.partition, "partition JSON")->required();
  sim_cmd->add_option("--batch", sim.batch, "inputs per batch")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--baseline", sim.baseline, "add speedup against: single");
  sim_cmd->add_option("--mode", sim.mode, "analytic | concurrent")
      ->check(CLI::IsMember({"analytic", "concurrent"}));
  sim_cmd->add_option("--format", sim.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  sim_cmd->add_option("-o,--output", sim.out, "output file (default stdout)");

  CompareArgs cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "compare strategies across models");
  cmp_cmd->add_option("graphs", cmp.graphs, "graph JSON files")->required();
  cmp_cmd->add_option("--tpus", cmp.tpus, "segments per model")->check(CLI::PositiveNumber);
  cmp_cmd->add_flag("--auto", cmp.autosize, "max(2, devices the weights need) (default)");
  cmp_cmd->add_option("--batch", cmp.batch, "inputs per batch")->check(CLI::PositiveNumber);
  cmp_cmd->add_option("--limit", cmp.limit, "largest partition count to profile");
  cmp_cmd->add_flag("--fast", cmp.fast, "multi-level refinement moves");
  cmp_cmd->add_option("--csv", cmp.csv, "comparison CSV");
  cmp_cmd->add_option("--plot", cmp.plot, "SVG chart of slowest-stage times");

  std::string canon_in, canon_out;
  auto* canon_cmd = app.add_subcommand("canon", "re-serialize a JSON artifact canonically");
  canon_cmd->add_option("file", canon_in, "artifact")->required();
  canon_cmd->add_option("-o,--output", canon_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  segpipe_context* raw = nullptr;
  if (segpipe_context_create(&raw) != SEGPIPE_OK) {
    std::cerr << "segpipe: error: cannot create context\n";
    return kExitFailure;
  }
  const ContextPtr ctx(raw);
  try {
    configure(ctx.get(), globals);
    if (*synth_cmd) {
      run_synth(ctx.get(), synth);
    } else if (*part_cmd) {
      return run_partition(ctx.get(), part);
    } else if (*sim_cmd) {
      run_simulate(ctx.get(), sim);
    } else if (*cmp_cmd) {
      run_compare(ctx.get(), cmp);
    } else if (*canon_cmd) {
      run_canon(ctx.get(), canon_in, canon_out);
    }
  } catch (const Exit& e) {
    return e.code;
  }
  return kExitOk;
}
