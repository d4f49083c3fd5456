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

#include "segpipe/synthgen.hpp"

#include <string>

#include "segpipe/error.hpp"

namespace segpipe {

void check(const SynthSpec& spec) {
  const std::uint64_t fields[] = {spec.L, spec.C, spec.W, spec.H, spec.Fw, spec.Fh, spec.f,
                                  spec.dtype_bytes};
  for (auto v : fields) {
    if (v < 1) throw invalid_argument("synthetic spec fields must all be >= 1");
  }
}

std::uint64_t param_count(const SynthSpec& spec) {
  check(spec);
  return spec.Fw * spec.Fh * spec.f * (spec.C + spec.f * (spec.L - 1));
}

ModelGraph generate(const SynthSpec& spec) {
  check(spec);
  ModelGraph graph;
  graph.name = "synth_L" + std::to_string(spec.L) + "_f" + std::to_string(spec.f);
  for (std::uint64_t i = 0; i < spec.L; ++i) {
    LayerNode node;
    node.id = static_cast<NodeId>(i);
    node.name = "conv" + std::to_string(i);
    node.op_kind = OpKind::kConv2d;
    const std::uint64_t in_channels = i == 0 ? spec.C : spec.f;
    node.param_count = in_channels * spec.f * spec.Fw * spec.Fh;
    // Same padding keeps W x H at every layer.
    node.mac_count = node.param_count * spec.W * spec.H;
    node.activation_bytes = spec.W * spec.H * spec.f * spec.dtype_bytes;
    graph.nodes.push_back(std::move(node));
    if (i > 0) graph.edges.push_back({static_cast<NodeId>(i - 1), static_cast<NodeId>(i)});
  }
  return graph;
}

std::vector<ModelGraph> sweep(std::uint64_t f_min, std::uint64_t f_max, std::uint64_t f_step,
                              const SynthSpec& base) {
  if (f_step < 1) throw invalid_argument("sweep step must be >= 1");
  if (f_min > f_max) throw invalid_argument("sweep requires f_min <= f_max");
  std::vector<ModelGraph> graphs;
  for (std::uint64_t f = f_min; f <= f_max; f += f_step) {
    SynthSpec spec = base;
    spec.f = f;
    graphs.push_back(generate(spec));
  }
  return graphs;
}

}  // namespace segpipe
