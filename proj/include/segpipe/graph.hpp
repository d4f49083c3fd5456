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

// Layer-graph data model: a feed-forward CNN as a DAG of layers carrying
// parameter, MAC and activation metadata. No tensor data is held.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace segpipe {

using NodeId = std::int64_t;

enum class OpKind { kConv2d, kDense, kPool, kConcat, kAdd, kInput, kOutput, kOther };

std::string_view to_string(OpKind kind);
std::optional<OpKind> parse_op_kind(std::string_view text);

/// True for kinds that never carry weights (input, pool, concat, add).
bool is_weightless(OpKind kind);

struct LayerNode {
  NodeId id = 0;
  std::string name;
  OpKind op_kind = OpKind::kOther;
  std::uint64_t param_count = 0;       // weights, one byte each once quantized
  std::uint64_t mac_count = 0;         // per single-input forward pass
  std::uint64_t activation_bytes = 0;  // output tensor size for one input

  bool operator==(const LayerNode&) const = default;
};

struct Edge {
  NodeId src = 0;
  NodeId dst = 0;

  bool operator==(const Edge&) const = default;
};

struct ModelGraph {
  std::string name;
  std::vector<LayerNode> nodes;
  std::vector<Edge> edges;

  bool operator==(const ModelGraph&) const = default;

  const LayerNode* find(NodeId id) const;
  std::uint64_t total_params() const;
};

enum class ViolationKind {
  kEmptyGraph,
  kDuplicateNode,
  kDanglingEdge,
  kDuplicateEdge,
  kSelfLoop,
  kCycle,
  kNoSource,
  kMultipleSources,
  kNoSink,
  kWeightsOnWeightlessKind,
  kMissingActivation,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string message;
};

struct ValidationResult {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind kind) const;
};

/// Structural and metadata checks. Violations are returned as data.
ValidationResult validate(const ModelGraph& graph);

/// Kahn's algorithm; ready nodes are released in ascending id order.
/// Throws Error(kCycle) naming a node on a cycle, Error(kSchema) on a dangling
/// edge.
std::vector<NodeId> topological_order(const ModelGraph& graph);

struct DepthProfile {
  std::unordered_map<NodeId, int> depth_of;
  int d = 0;
  std::vector<std::uint64_t> P;  // parameters per depth level
  // Bytes a horizontal cut between level i and i+1 must forward.
  std::vector<std::uint64_t> activations_at_cut;
  // activation_bytes of the source when it is an input node, else 0.
  std::uint64_t model_input_bytes = 0;

  int depth(NodeId id) const { return depth_of.at(id); }
};

/// Longest distance from the source for every node, plus the per-depth
/// profile. Single pass over topological order.
DepthProfile compute_depths(const ModelGraph& graph);

/// Fills P and activations_at_cut of an already-computed depth mapping.
/// A tensor produced at depth u and consumed at depth v is charged once to
/// every cut i with u <= i < v, however many of its consumers sit past i.
void depth_param_profile(const ModelGraph& graph, DepthProfile& depths);

/// Nodes sorted by (depth, id); the order segments are compiled in.
std::vector<NodeId> nodes_in_depth_order(const ModelGraph& graph, const DepthProfile& depths);

}  // namespace segpipe
