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

#include "segpipe/graph.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <queue>
#include <set>
#include <unordered_set>

#include "segpipe/error.hpp"

namespace segpipe {

namespace {

constexpr std::array<std::pair<OpKind, std::string_view>, 8> kOpKindNames{{
    {OpKind::kConv2d, "conv2d"},
    {OpKind::kDense, "dense"},
    {OpKind::kPool, "pool"},
    {OpKind::kConcat, "concat"},
    {OpKind::kAdd, "add"},
    {OpKind::kInput, "input"},
    {OpKind::kOutput, "output"},
    {OpKind::kOther, "other"},
}};

// Adjacency over the edges whose endpoints both exist.
struct Adjacency {
  std::unordered_map<NodeId, std::vector<NodeId>> succ;
  std::unordered_map<NodeId, std::size_t> indegree;
};

Adjacency build_adjacency(const ModelGraph& graph) {
  Adjacency adj;
  for (const auto& n : graph.nodes) {
    adj.succ[n.id];
    adj.indegree[n.id] = 0;
  }
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const auto& e : graph.edges) {
    if (!adj.indegree.contains(e.src) || !adj.indegree.contains(e.dst)) continue;
    if (!seen.emplace(e.src, e.dst).second) continue;
    adj.succ[e.src].push_back(e.dst);
    ++adj.indegree[e.dst];
  }
  return adj;
}

// Kahn with a min-heap so ties resolve by ascending id. Returns the nodes
// that could be ordered; anything left out sits on or behind a cycle.
std::vector<NodeId> kahn(const ModelGraph& graph, Adjacency adj) {
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  for (const auto& [id, deg] : adj.indegree) {
    if (deg == 0) ready.push(id);
  }
  std::vector<NodeId> order;
  order.reserve(graph.nodes.size());
  while (!ready.empty()) {
    const NodeId u = ready.top();
    ready.pop();
    order.push_back(u);
    for (NodeId v : adj.succ[u]) {
      if (--adj.indegree[v] == 0) ready.push(v);
    }
  }
  return order;
}

// Some node on a cycle among the nodes Kahn could not release. Each of them
// keeps an unreleased predecessor, so walking predecessors must repeat.
NodeId find_cycle_node(const ModelGraph& graph, const std::vector<NodeId>& ordered) {
  const std::unordered_set<NodeId> done(ordered.begin(), ordered.end());
  std::unordered_map<NodeId, std::vector<NodeId>> pred;
  for (const auto& [u, vs] : build_adjacency(graph).succ) {
    for (NodeId v : vs) pred[v].push_back(u);
  }
  NodeId cur = -1;
  bool any = false;
  for (const auto& n : graph.nodes) {
    if (!done.contains(n.id) && (!any || n.id < cur)) {
      cur = n.id;
      any = true;
    }
  }
  std::unordered_map<NodeId, std::size_t> visit_index;
  std::vector<NodeId> path;
  while (!visit_index.contains(cur)) {
    visit_index[cur] = path.size();
    path.push_back(cur);
    auto& ps = pred[cur];
    std::sort(ps.begin(), ps.end());
    for (NodeId u : ps) {
      if (!done.contains(u)) {
        cur = u;
        break;
      }
    }
  }
  return *std::min_element(path.begin() + static_cast<std::ptrdiff_t>(visit_index[cur]),
                           path.end());
}

}  // namespace

std::string_view to_string(OpKind kind) {
  for (const auto& [k, name] : kOpKindNames) {
    if (k == kind) return name;
  }
  return "other";
}

std::optional<OpKind> parse_op_kind(std::string_view text) {
  for (const auto& [k, name] : kOpKindNames) {
    if (name == text) return k;
  }
  return std::nullopt;
}

bool is_weightless(OpKind kind) {
  return kind == OpKind::kInput || kind == OpKind::kPool || kind == OpKind::kConcat ||
         kind == OpKind::kAdd;
}

const LayerNode* ModelGraph::find(NodeId id) const {
  auto it = std::find_if(nodes.begin(), nodes.end(), [&](const LayerNode& n) { return n.id == id; });
  return it == nodes.end() ? nullptr : &*it;
}

std::uint64_t ModelGraph::total_params() const {
  std::uint64_t total = 0;
  for (const auto& n : nodes) total += n.param_count;
  return total;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kEmptyGraph: return "empty_graph";
    case ViolationKind::kDuplicateNode: return "duplicate_node";
    case ViolationKind::kDanglingEdge: return "dangling_edge";
    case ViolationKind::kDuplicateEdge: return "duplicate_edge";
    case ViolationKind::kSelfLoop: return "self_loop";
    case ViolationKind::kCycle: return "cycle";
    case ViolationKind::kNoSource: return "no_source";
    case ViolationKind::kMultipleSources: return "multiple_sources";
    case ViolationKind::kNoSink: return "no_sink";
    case ViolationKind::kWeightsOnWeightlessKind: return "weights_on_weightless_kind";
    case ViolationKind::kMissingActivation: return "missing_activation";
  }
  return "unknown";
}

bool ValidationResult::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.kind == kind; });
}

ValidationResult validate(const ModelGraph& graph) {
  ValidationResult result;
  auto add = [&](ViolationKind kind, std::string message) {
    result.violations.push_back({kind, std::move(message)});
  };

  if (graph.nodes.empty()) {
    add(ViolationKind::kEmptyGraph, "graph has no nodes");
    return result;
  }

  std::unordered_set<NodeId> ids;
  for (const auto& n : graph.nodes) {
    if (!ids.insert(n.id).second) {
      add(ViolationKind::kDuplicateNode, "duplicate node id " + std::to_string(n.id));
    }
    if (is_weightless(n.op_kind) && n.param_count != 0) {
      add(ViolationKind::kWeightsOnWeightlessKind,
          "node " + std::to_string(n.id) + " of kind " + std::string(to_string(n.op_kind)) +
              " has param_count " + std::to_string(n.param_count));
    }
    if (n.op_kind != OpKind::kOutput && n.activation_bytes == 0) {
      add(ViolationKind::kMissingActivation,
          "node " + std::to_string(n.id) + " has activation_bytes 0");
    }
  }

  std::set<std::pair<NodeId, NodeId>> seen;
  for (const auto& e : graph.edges) {
    if (!ids.contains(e.src) || !ids.contains(e.dst)) {
      const NodeId missing = ids.contains(e.src) ? e.dst : e.src;
      add(ViolationKind::kDanglingEdge, "edge " + std::to_string(e.src) + "->" +
                                            std::to_string(e.dst) + " references unknown id " +
                                            std::to_string(missing));
      continue;
    }
    if (e.src == e.dst) {
      add(ViolationKind::kSelfLoop, "self loop on node " + std::to_string(e.src));
    }
    if (!seen.emplace(e.src, e.dst).second) {
      add(ViolationKind::kDuplicateEdge,
          "duplicate edge " + std::to_string(e.src) + "->" + std::to_string(e.dst));
    }
  }

  const Adjacency adj = build_adjacency(graph);
  const auto ordered = kahn(graph, adj);
  if (ordered.size() != ids.size() && !result.has(ViolationKind::kDuplicateNode)) {
    add(ViolationKind::kCycle,
        "cycle through node " + std::to_string(find_cycle_node(graph, ordered)));
  }

  std::vector<NodeId> sources;
  std::size_t sinks = 0;
  for (const auto& [id, deg] : adj.indegree) {
    if (deg == 0) sources.push_back(id);
    if (adj.succ.at(id).empty()) ++sinks;
  }
  std::sort(sources.begin(), sources.end());
  if (sources.empty()) {
    add(ViolationKind::kNoSource, "graph has no source node");
  } else if (sources.size() > 1) {
    std::string list;
    for (NodeId s : sources) list += (list.empty() ? "" : ",") + std::to_string(s);
    add(ViolationKind::kMultipleSources, "graph has multiple sources: " + list);
  }
  if (sinks == 0) add(ViolationKind::kNoSink, "graph has no sink node");
  return result;
}

std::vector<NodeId> topological_order(const ModelGraph& graph) {
  for (const auto& e : graph.edges) {
    if (!graph.find(e.src) || !graph.find(e.dst)) {
      throw schema_error("edge " + std::to_string(e.src) + "->" + std::to_string(e.dst) +
                         " references an unknown node");
    }
  }
  auto order = kahn(graph, build_adjacency(graph));
  if (order.size() != graph.nodes.size()) {
    throw Error(ErrorCode::kCycle,
                "cycle detected through node " + std::to_string(find_cycle_node(graph, order)));
  }
  return order;
}

DepthProfile compute_depths(const ModelGraph& graph) {
  const auto order = topological_order(graph);
  std::unordered_map<NodeId, std::vector<NodeId>> pred;
  for (const auto& e : graph.edges) pred[e.dst].push_back(e.src);

  DepthProfile profile;
  int max_depth = 0;
  for (NodeId v : order) {
    int depth = 0;
    for (NodeId u : pred[v]) depth = std::max(depth, profile.depth_of.at(u) + 1);
    profile.depth_of[v] = depth;
    max_depth = std::max(max_depth, depth);
  }
  profile.d = order.empty() ? 0 : max_depth + 1;
  if (!order.empty()) {
    const LayerNode* source = graph.find(order.front());
    if (source->op_kind == OpKind::kInput) profile.model_input_bytes = source->activation_bytes;
  }
  depth_param_profile(graph, profile);
  return profile;
}

void depth_param_profile(const ModelGraph& graph, DepthProfile& depths) {
  depths.P.assign(static_cast<std::size_t>(depths.d), 0);
  depths.activations_at_cut.assign(depths.d > 0 ? static_cast<std::size_t>(depths.d - 1) : 0, 0);
  for (const auto& n : graph.nodes) {
    depths.P[static_cast<std::size_t>(depths.depth(n.id))] += n.param_count;
  }
  // Deepest consumer per producer: the tensor travels through every cut up
  // to that consumer's level.
  std::unordered_map<NodeId, int> furthest;
  for (const auto& e : graph.edges) {
    auto& f = furthest.try_emplace(e.src, depths.depth(e.src)).first->second;
    f = std::max(f, depths.depth(e.dst));
  }
  for (const auto& [src, reach] : furthest) {
    const std::uint64_t bytes = graph.find(src)->activation_bytes;
    for (int i = depths.depth(src); i < reach; ++i) {
      depths.activations_at_cut[static_cast<std::size_t>(i)] += bytes;
    }
  }
}

std::vector<NodeId> nodes_in_depth_order(const ModelGraph& graph, const DepthProfile& depths) {
  std::vector<NodeId> ids;
  ids.reserve(graph.nodes.size());
  for (const auto& n : graph.nodes) ids.push_back(n.id);
  std::sort(ids.begin(), ids.end(), [&](NodeId a, NodeId b) {
    const int da = depths.depth(a), db = depths.depth(b);
    return da != db ? da < db : a < b;
  });
  return ids;
}

}  // namespace segpipe
