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

#include "segpipe/io.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "segpipe/error.hpp"

namespace segpipe {

namespace {

using json = nlohmann::ordered_json;

json parse(std::string_view text, const char* what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw schema_error(std::string("malformed ") + what + " JSON: " + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Field access on one JSON object with unknown-field rejection.
class Fields {
 public:
  Fields(const json& obj, std::string where, std::initializer_list<std::string_view> allowed)
      : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) throw schema_error(where_ + " must be a JSON object");
    for (const auto& [key, _] : obj_.items()) {
      bool known = false;
      for (auto a : allowed) known = known || a == key;
      if (!known) throw schema_error("unknown field '" + key + "' in " + where_);
    }
  }

  bool has(const char* key) const { return obj_.contains(key); }

  const json& raw(const char* key) const {
    if (!obj_.contains(key)) {
      throw schema_error("missing field '" + std::string(key) + "' in " + where_);
    }
    return obj_.at(key);
  }

  std::uint64_t uint(const char* key) const { return as_uint(raw(key), key); }

  std::int64_t integer(const char* key) const {
    const json& v = raw(key);
    if (!v.is_number_integer()) throw type_error(key, "an integer");
    if (v.is_number_unsigned() &&
        v.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      throw type_error(key, "an integer in range");
    }
    return v.get<std::int64_t>();
  }

  double number(const char* key) const {
    const json& v = raw(key);
    if (!v.is_number()) throw type_error(key, "a number");
    return v.get<double>();
  }

  std::string string(const char* key) const {
    const json& v = raw(key);
    if (!v.is_string()) throw type_error(key, "a string");
    return v.get<std::string>();
  }

  const json& array(const char* key) const {
    const json& v = raw(key);
    if (!v.is_array()) throw type_error(key, "an array");
    return v;
  }

  std::uint64_t as_uint(const json& v, const char* key) const {
    if (!v.is_number_unsigned()) throw type_error(key, "a non-negative integer");
    return v.get<std::uint64_t>();
  }

  std::vector<int> int_list(const char* key) const {
    std::vector<int> out;
    for (const auto& v : array(key)) {
      if (!v.is_number_integer() || v.get<std::int64_t>() < std::numeric_limits<int>::min() ||
          v.get<std::int64_t>() > std::numeric_limits<int>::max()) {
        throw type_error(key, "a list of integers");
      }
      out.push_back(v.get<int>());
    }
    return out;
  }

  std::vector<std::uint64_t> uint_list(const char* key) const {
    std::vector<std::uint64_t> out;
    for (const auto& v : array(key)) out.push_back(as_uint(v, key));
    return out;
  }

  std::vector<double> number_list(const char* key) const {
    std::vector<double> out;
    for (const auto& v : array(key)) {
      if (!v.is_number()) throw type_error(key, "a list of numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }

 private:
  Error type_error(const char* key, const char* expected) const {
    return schema_error("field '" + std::string(key) + "' in " + where_ + " must be " + expected);
  }

  const json& obj_;
  std::string where_;
};

Strategy strategy_field(const Fields& f) {
  const std::string text = f.string("strategy");
  auto s = parse_strategy(text);
  if (!s) throw schema_error("unknown strategy '" + text + "'");
  return *s;
}

json memory_json(const MemoryReport& r) {
  json placement = json::object();
  for (const auto& [id, where] : r.placement) {
    placement[std::to_string(id)] = where == Placement::kDevice ? "device" : "host";
  }
  return json{{"device_bytes", r.device_bytes},
              {"host_bytes", r.host_bytes},
              {"padded_overhead_bytes", r.padded_overhead_bytes},
              {"placement", placement}};
}

MemoryReport memory_from(const json& j, const std::string& where) {
  Fields f(j, where, {"device_bytes", "host_bytes", "padded_overhead_bytes", "placement"});
  MemoryReport r;
  r.device_bytes = f.uint("device_bytes");
  r.host_bytes = f.uint("host_bytes");
  r.padded_overhead_bytes = f.uint("padded_overhead_bytes");
  const json& placement = f.raw("placement");
  if (!placement.is_object()) throw schema_error("placement in " + where + " must be an object");
  for (const auto& [key, value] : placement.items()) {
    NodeId id = 0;
    try {
      std::size_t used = 0;
      id = std::stoll(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw schema_error("placement key '" + key + "' in " + where + " is not a node id");
    }
    if (value == "device") {
      r.placement[id] = Placement::kDevice;
    } else if (value == "host") {
      r.placement[id] = Placement::kHost;
    } else {
      throw schema_error("placement of node " + key + " must be \"device\" or \"host\"");
    }
  }
  return r;
}

json sim_json(const SimResult& r) {
  return json{{"batch", r.batch},
              {"stage_times_s", r.stage_times_s},
              {"makespan_s", r.makespan_s},
              {"throughput_ips", r.throughput_ips},
              {"speedup_vs_single", r.speedup_vs_single ? json(*r.speedup_vs_single) : json(nullptr)},
              {"max_stage_s", r.max_stage_s},
              {"mean_stage_s", r.mean_stage_s},
              {"stage_deviation_s", r.stage_deviation_s}};
}

std::optional<RefineStatus> parse_refine_status(const std::string& text) {
  for (auto s : {RefineStatus::kResolved, RefineStatus::kUnresolved, RefineStatus::kInfeasible}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

ModelGraph graph_from_json(std::string_view text) {
  const json j = parse(text, "graph");
  Fields top(j, "graph", {"name", "nodes", "edges"});
  ModelGraph g;
  g.name = top.string("name");
  for (const auto& node : top.array("nodes")) {
    const std::string where =
        "node" + (node.is_object() && node.contains("id") ? " " + node["id"].dump() : std::string());
    Fields f(node, where,
             {"id", "name", "op_kind", "param_count", "mac_count", "activation_bytes"});
    LayerNode n;
    n.id = f.integer("id");
    n.name = f.string("name");
    const std::string kind = f.string("op_kind");
    auto parsed = parse_op_kind(kind);
    if (!parsed) throw schema_error("unknown op_kind '" + kind + "' in " + where);
    n.op_kind = *parsed;
    n.param_count = f.uint("param_count");
    n.mac_count = f.uint("mac_count");
    n.activation_bytes = f.uint("activation_bytes");
    g.nodes.push_back(std::move(n));
  }
  for (const auto& edge : top.array("edges")) {
    if (!edge.is_array() || edge.size() != 2 || !edge[0].is_number_integer() ||
        !edge[1].is_number_integer()) {
      throw schema_error("edge " + edge.dump() + " must be a [src, dst] pair of integers");
    }
    g.edges.push_back({edge[0].get<NodeId>(), edge[1].get<NodeId>()});
  }
  return g;
}

std::string graph_to_json(const ModelGraph& graph) {
  json nodes = json::array();
  for (const auto& n : graph.nodes) {
    nodes.push_back(json{{"id", n.id},
                         {"name", n.name},
                         {"op_kind", std::string(to_string(n.op_kind))},
                         {"param_count", n.param_count},
                         {"mac_count", n.mac_count},
                         {"activation_bytes", n.activation_bytes}});
  }
  json edges = json::array();
  for (const auto& e : graph.edges) edges.push_back(json::array({e.src, e.dst}));
  return dump(json{{"name", graph.name}, {"nodes", nodes}, {"edges", edges}});
}

PartitionFile partition_from_json(std::string_view text) {
  const json j = parse(text, "partition");
  Fields f(j, "partition", {"strategy", "splits", "s", "d"});
  PartitionFile out;
  out.partition.strategy = strategy_field(f);
  out.partition.splits = f.int_list("splits");
  out.partition.s = static_cast<int>(f.integer("s"));
  if (f.has("d")) out.d = static_cast<int>(f.integer("d"));
  if (out.partition.splits.size() + 1 != static_cast<std::size_t>(std::max(out.partition.s, 0))) {
    throw schema_error("partition lists " + std::to_string(out.partition.splits.size()) +
                       " splits but s=" + std::to_string(out.partition.s));
  }
  return out;
}

std::string partition_to_json(const Partition& partition, int d) {
  return dump(json{{"strategy", std::string(to_string(partition.strategy))},
                   {"splits", partition.splits},
                   {"s", partition.s},
                   {"d", d}});
}

std::string memory_report_to_json(const MemoryReport& report) { return dump(memory_json(report)); }

MemoryReport memory_report_from_json(std::string_view text) {
  return memory_from(parse(text, "memory report"), "memory report");
}

std::string assignment_to_json(const SegmentAssignment& assignment,
                               std::optional<RefineStatus> refine_status) {
  json segments = json::array();
  for (std::size_t i = 0; i < assignment.segments.size(); ++i) {
    const auto& seg = assignment.segments[i];
    segments.push_back(json{{"index", i},
                            {"first_depth", seg.first_depth},
                            {"last_depth", seg.last_depth},
                            {"nodes", seg.node_ids},
                            {"raw_param_bytes", seg.raw_param_bytes},
                            {"padded_bytes", seg.padded_bytes},
                            {"mac_count", seg.mac_count},
                            {"incoming_activation_bytes", seg.incoming_activation_bytes},
                            {"memory", memory_json(seg.memory)}});
  }
  return dump(json{
      {"model", assignment.model},
      {"strategy", std::string(to_string(assignment.partition.strategy))},
      {"s", assignment.partition.s},
      {"splits", assignment.partition.splits},
      {"refine_status", refine_status ? json(std::string(to_string(*refine_status))) : json(nullptr)},
      {"delta_s_bytes", imbalance_delta(assignment)},
      {"host_bytes", assignment.host_bytes()},
      {"segments", segments}});
}

AssignmentFile assignment_from_json(std::string_view text) {
  const json j = parse(text, "assignment");
  Fields f(j, "assignment",
           {"model", "strategy", "s", "splits", "refine_status", "delta_s_bytes", "host_bytes",
            "segments"});
  AssignmentFile out;
  auto& a = out.assignment;
  a.model = f.string("model");
  a.partition.strategy = strategy_field(f);
  a.partition.s = static_cast<int>(f.integer("s"));
  a.partition.splits = f.int_list("splits");
  const json& status = f.raw("refine_status");
  if (!status.is_null()) {
    if (!status.is_string() || !parse_refine_status(status.get<std::string>())) {
      throw schema_error("refine_status must be resolved, unresolved, infeasible or null");
    }
    out.refine_status = parse_refine_status(status.get<std::string>());
  }
  for (const auto& sj : f.array("segments")) {
    Fields sf(sj, "segment",
              {"index", "first_depth", "last_depth", "nodes", "raw_param_bytes", "padded_bytes",
               "mac_count", "incoming_activation_bytes", "memory"});
    if (sf.uint("index") != a.segments.size()) throw schema_error("segments out of order");
    Segment seg;
    seg.first_depth = static_cast<int>(sf.integer("first_depth"));
    seg.last_depth = static_cast<int>(sf.integer("last_depth"));
    for (const auto& id : sf.array("nodes")) {
      if (!id.is_number_integer()) throw schema_error("segment nodes must be integers");
      seg.node_ids.push_back(id.get<NodeId>());
    }
    seg.raw_param_bytes = sf.uint("raw_param_bytes");
    seg.padded_bytes = sf.uint("padded_bytes");
    seg.mac_count = sf.uint("mac_count");
    seg.incoming_activation_bytes = sf.uint("incoming_activation_bytes");
    seg.memory = memory_from(sf.raw("memory"), "segment memory");
    a.segments.push_back(std::move(seg));
  }
  if (a.segments.size() != static_cast<std::size_t>(std::max(a.partition.s, 0))) {
    throw schema_error("assignment has " + std::to_string(a.segments.size()) +
                       " segments but s=" + std::to_string(a.partition.s));
  }
  if (f.uint("delta_s_bytes") != imbalance_delta(a) || f.uint("host_bytes") != a.host_bytes()) {
    throw schema_error("assignment totals disagree with its segments");
  }
  return out;
}

std::string sim_result_to_json(const SimResult& result) { return dump(sim_json(result)); }

SimResult sim_result_from_json(std::string_view text) {
  const json j = parse(text, "simulation result");
  Fields f(j, "simulation result",
           {"batch", "stage_times_s", "makespan_s", "throughput_ips", "speedup_vs_single",
            "max_stage_s", "mean_stage_s", "stage_deviation_s"});
  SimResult r;
  r.batch = static_cast<int>(f.integer("batch"));
  r.stage_times_s = f.number_list("stage_times_s");
  r.makespan_s = f.number("makespan_s");
  r.throughput_ips = f.number("throughput_ips");
  if (!f.raw("speedup_vs_single").is_null()) r.speedup_vs_single = f.number("speedup_vs_single");
  r.max_stage_s = f.number("max_stage_s");
  r.mean_stage_s = f.number("mean_stage_s");
  r.stage_deviation_s = f.number("stage_deviation_s");
  return r;
}

std::string trace_to_jsonl(const std::vector<RefineMove>& trace) {
  std::string out;
  for (const auto& m : trace) {
    out += json{{"round", m.round},
                {"split_index", m.split_index},
                {"direction", std::string(to_string(m.direction))},
                {"steps", m.steps},
                {"splits", m.splits},
                {"device_bytes", m.device_bytes},
                {"host_bytes", m.host_bytes}}
               .dump();
    out += '\n';
  }
  return out;
}

std::vector<RefineMove> trace_from_jsonl(std::string_view text) {
  std::vector<RefineMove> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const json j = parse(line, "trace line");
    Fields f(j, "trace line " + std::to_string(lineno),
             {"round", "split_index", "direction", "steps", "splits", "device_bytes",
              "host_bytes"});
    RefineMove m;
    m.round = static_cast<int>(f.integer("round"));
    m.split_index = static_cast<int>(f.integer("split_index"));
    const std::string dir = f.string("direction");
    if (dir == "earlier") {
      m.direction = MoveDirection::kEarlier;
    } else if (dir == "deeper") {
      m.direction = MoveDirection::kDeeper;
    } else {
      throw schema_error("direction must be earlier or deeper on trace line " +
                         std::to_string(lineno));
    }
    m.steps = static_cast<int>(f.integer("steps"));
    m.splits = f.int_list("splits");
    m.device_bytes = f.uint_list("device_bytes");
    m.host_bytes = f.uint_list("host_bytes");
    out.push_back(std::move(m));
  }
  return out;
}

std::string rows_to_csv(const std::vector<StrategyRow>& rows) {
  std::string out =
      "model,strategy,s,delta_s_bytes,host_bytes,makespan_s,throughput_ips,speedup,max_stage_s,"
      "stage_deviation_s\n";
  for (const auto& r : rows) {
    out += r.model + "," + r.strategy + "," + std::to_string(r.s) + "," +
           std::to_string(r.delta_s_bytes) + "," + std::to_string(r.host_bytes) + "," +
           format_double(r.sim.makespan_s) + "," + format_double(r.sim.throughput_ips) + "," +
           (r.sim.speedup_vs_single ? format_double(*r.sim.speedup_vs_single) : std::string()) +
           "," + format_double(r.sim.max_stage_s) + "," + format_double(r.sim.stage_deviation_s) +
           "\n";
  }
  return out;
}

std::string canonicalize(std::string_view text, ArtifactKind* kind) {
  auto set = [&](ArtifactKind k) {
    if (kind) *kind = k;
  };
  // A trace with several moves is not a single JSON document.
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error&) {
    set(ArtifactKind::kTrace);
    return trace_to_jsonl(trace_from_jsonl(text));
  }
  if (j.is_object() && j.contains("split_index")) {
    set(ArtifactKind::kTrace);
    return trace_to_jsonl(trace_from_jsonl(text));
  }
  if (!j.is_object()) throw schema_error("artifact must be a JSON object");
  if (j.contains("nodes")) {
    set(ArtifactKind::kGraph);
    return graph_to_json(graph_from_json(text));
  }
  if (j.contains("segments")) {
    set(ArtifactKind::kAssignment);
    const auto a = assignment_from_json(text);
    return assignment_to_json(a.assignment, a.refine_status);
  }
  if (j.contains("makespan_s")) {
    set(ArtifactKind::kSimResult);
    return sim_result_to_json(sim_result_from_json(text));
  }
  if (j.contains("splits")) {
    set(ArtifactKind::kPartition);
    const auto p = partition_from_json(text);
    if (!p.d) throw schema_error("partition artifact lacks 'd'");
    return partition_to_json(p.partition, *p.d);
  }
  throw schema_error("unrecognized artifact: expected a graph, partition, assignment, "
                     "simulation result or trace");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

}  // namespace segpipe
