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

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "segpipe/error.hpp"
#include "segpipe/io.hpp"
#include "test_graphs.hpp"

namespace segpipe {
namespace {

using testing::chain;
using testing::conv;
using testing::diamond;
using testing::graph;

TEST(Validate, ChainIsOk) {
  EXPECT_TRUE(validate(chain({1, 2, 3})).ok());
}

TEST(Validate, TwoCycle) {
  const auto r = validate(graph({conv(0, 1), conv(1, 1)}, {{0, 1}, {1, 0}}));
  EXPECT_TRUE(r.has(ViolationKind::kCycle));
  EXPECT_TRUE(r.has(ViolationKind::kNoSource));
}

TEST(Validate, DanglingEdgeNamesTheId) {
  const auto r = validate(graph({conv(0, 1), conv(1, 1)}, {{0, 1}, {1, 99}}));
  ASSERT_TRUE(r.has(ViolationKind::kDanglingEdge));
  bool named = false;
  for (const auto& v : r.violations) named |= v.message.find("99") != std::string::npos;
  EXPECT_TRUE(named);
}

TEST(Validate, StructuralViolations) {
  EXPECT_TRUE(validate(ModelGraph{}).has(ViolationKind::kEmptyGraph));
  EXPECT_TRUE(validate(graph({conv(0, 1), conv(0, 1)}, {})).has(ViolationKind::kDuplicateNode));
  EXPECT_TRUE(validate(graph({conv(0, 1), conv(1, 1)}, {{0, 1}, {0, 1}}))
                  .has(ViolationKind::kDuplicateEdge));
  EXPECT_TRUE(validate(graph({conv(0, 1), conv(1, 1)}, {{0, 1}, {1, 1}}))
                  .has(ViolationKind::kSelfLoop));
  EXPECT_TRUE(validate(graph({conv(0, 1), conv(1, 1), conv(2, 1)}, {{0, 2}, {1, 2}}))
                  .has(ViolationKind::kMultipleSources));
}

TEST(Validate, LayerAttributes) {
  auto g = chain({1, 2});
  g.nodes[1].op_kind = OpKind::kPool;
  EXPECT_TRUE(validate(g).has(ViolationKind::kWeightsOnWeightlessKind));
  g = chain({1, 2});
  g.nodes[0].activation_bytes = 0;
  EXPECT_TRUE(validate(g).has(ViolationKind::kMissingActivation));
  g.nodes[0].activation_bytes = 1;
  g.nodes[1].op_kind = OpKind::kOutput;
  g.nodes[1].activation_bytes = 0;
  EXPECT_TRUE(validate(g).ok());
}

TEST(OpKind, NamesRoundTrip) {
  for (auto k : {OpKind::kConv2d, OpKind::kDense, OpKind::kPool, OpKind::kConcat, OpKind::kAdd,
                 OpKind::kInput, OpKind::kOutput, OpKind::kOther}) {
    EXPECT_EQ(parse_op_kind(to_string(k)), k);
  }
  EXPECT_FALSE(parse_op_kind("lstm").has_value());
}

TEST(TopologicalOrder, Chain) {
  EXPECT_EQ(topological_order(chain({1, 1, 1})), (std::vector<NodeId>{0, 1, 2}));
}

TEST(TopologicalOrder, DiamondIsSmallestValidOrder) {
  const auto g = diamond();
  const auto orders = oracle::all_topological_orders(g);
  EXPECT_EQ(orders.size(), 2u);
  EXPECT_EQ(topological_order(g), *std::min_element(orders.begin(), orders.end()));
  EXPECT_EQ(topological_order(g), (std::vector<NodeId>{0, 1, 2, 3}));
}

TEST(TopologicalOrder, TieBreakIgnoresInsertionOrder) {
  // Same diamond with nodes listed backwards and ids permuted.
  const auto g = graph({conv(9, 1), conv(5, 1), conv(7, 1), conv(1, 1)},
                       {{1, 7}, {1, 5}, {7, 9}, {5, 9}});
  EXPECT_EQ(topological_order(g), (std::vector<NodeId>{1, 5, 7, 9}));
}

TEST(TopologicalOrder, SingleNode) {
  EXPECT_EQ(topological_order(chain({5})), (std::vector<NodeId>{0}));
}

TEST(TopologicalOrder, CycleThrowsNamingANodeOnIt) {
  const auto g = graph({conv(0, 1), conv(1, 1), conv(2, 1), conv(3, 1)},
                       {{0, 1}, {1, 2}, {2, 3}, {3, 1}});
  try {
    topological_order(g);
    FAIL() << "expected a cycle error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCycle);
    EXPECT_NE(std::string(e.what()).find("node 1"), std::string::npos) << e.what();
  }
}

TEST(TopologicalOrder, DanglingEdgeIsSchemaError) {
  try {
    topological_order(graph({conv(0, 1)}, {{0, 4}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchema);
  }
}

TEST(ComputeDepths, Diamond) {
  const auto p = compute_depths(diamond());
  EXPECT_EQ(p.d, 3);
  EXPECT_EQ(p.depth(0), 0);
  EXPECT_EQ(p.depth(1), 1);
  EXPECT_EQ(p.depth(2), 1);
  EXPECT_EQ(p.depth(3), 2);
  EXPECT_EQ(p.P, (std::vector<std::uint64_t>{10, 50, 40}));
}

TEST(ComputeDepths, FiveLayerChain) {
  const auto p = compute_depths(chain({1, 2, 3, 4, 5}));
  EXPECT_EQ(p.d, 5);
  for (NodeId i = 0; i < 5; ++i) EXPECT_EQ(p.depth(i), i);
}

TEST(ComputeDepths, SkipEdgeTakesLongestPath) {
  const auto p = compute_depths(graph({conv(0, 1), conv(1, 1), conv(2, 1)}, {{0, 1}, {1, 2}, {0, 2}}));
  EXPECT_EQ(p.depth(2), 2);
  EXPECT_EQ(p.d, 3);
}

TEST(ComputeDepths, SingleLayer) {
  const auto p = compute_depths(chain({77}));
  EXPECT_EQ(p.P, (std::vector<std::uint64_t>{77}));
  EXPECT_TRUE(p.activations_at_cut.empty());
  EXPECT_EQ(p.model_input_bytes, 0u);
}

TEST(ComputeDepths, CutsCarryEveryCrossingTensor) {
  const auto p = compute_depths(diamond());
  // Cut after depth 0: A's output (fan-out, sent once). After depth 1: B and C.
  EXPECT_EQ(p.activations_at_cut, (std::vector<std::uint64_t>{100, 200 + 300}));
}

TEST(ComputeDepths, SkipTensorChargedAtEveryCutItCrosses) {
  const auto g = graph({conv(0, 1, 10), conv(1, 1, 20), conv(2, 1, 40), conv(3, 1, 80)},
                       {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  const auto p = compute_depths(g);
  EXPECT_EQ(p.activations_at_cut, (std::vector<std::uint64_t>{10, 20 + 10, 40 + 10}));
}

TEST(ComputeDepths, InputNodeSetsModelInputBytes) {
  auto g = chain({0, 5, 5});
  g.nodes[0].op_kind = OpKind::kInput;
  g.nodes[0].activation_bytes = 3072;
  EXPECT_EQ(compute_depths(g).model_input_bytes, 3072u);
}

TEST(ComputeDepths, NodesInDepthOrder) {
  const auto g = graph({conv(3, 1), conv(2, 1), conv(1, 1), conv(0, 1)}, {{0, 2}, {0, 1}, {1, 3}, {2, 3}});
  const auto p = compute_depths(g);
  EXPECT_EQ(nodes_in_depth_order(g, p), (std::vector<NodeId>{0, 1, 2, 3}));
}

TEST(ComputeDepths, InceptionFixtureMatchesOracle) {
  const auto g = graph_from_json(read_text_file(SEGPIPE_FIXTURES "/inception_block.json"));
  ASSERT_TRUE(validate(g).ok());
  const auto p = compute_depths(g);
  const auto expected = oracle::longest_paths(g);
  for (const auto& [id, depth] : expected) EXPECT_EQ(p.depth(id), depth) << "node " << id;
  EXPECT_EQ(p.d, 6);
}

// Random single-source DAGs: edges only go from lower to higher rank.
TEST(ComputeDepths, RandomDagsMatchOracle) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 12);
    std::vector<NodeId> ids(static_cast<std::size_t>(n));
    std::iota(ids.begin(), ids.end(), 100);
    std::shuffle(ids.begin(), ids.end(), rng);
    ModelGraph g;
    for (int i = 0; i < n; ++i) g.nodes.push_back(conv(ids[static_cast<std::size_t>(i)], 1));
    for (int j = 1; j < n; ++j) {
      // Guarantee reachability from rank 0, then sprinkle extra edges.
      g.edges.push_back({ids[rng() % static_cast<std::size_t>(j)], ids[static_cast<std::size_t>(j)]});
      for (int i = 0; i < j; ++i) {
        if (rng() % 4 == 0) {
          const Edge e{ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(j)]};
          if (std::none_of(g.edges.begin(), g.edges.end(),
                           [&](const Edge& x) { return x.src == e.src && x.dst == e.dst; })) {
            g.edges.push_back(e);
          }
        }
      }
    }
    ASSERT_TRUE(validate(g).ok());
    const auto p = compute_depths(g);
    int max_depth = 0;
    for (const auto& [id, depth] : oracle::longest_paths(g)) {
      ASSERT_EQ(p.depth(id), depth);
      max_depth = std::max(max_depth, depth);
    }
    EXPECT_EQ(p.d, max_depth + 1);
    EXPECT_EQ(std::accumulate(p.P.begin(), p.P.end(), std::uint64_t{0}), g.total_params());
  }
}

}  // namespace
}  // namespace segpipe
