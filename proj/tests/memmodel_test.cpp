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

#include "segpipe/memmodel.hpp"

#include <gtest/gtest.h>

#include <random>

#include "segpipe/error.hpp"
#include "segpipe/synthgen.hpp"
#include "test_graphs.hpp"

namespace segpipe {
namespace {

using testing::conv;

std::uint64_t round_up(std::uint64_t v, std::uint64_t m) { return (v + m - 1) / m * m; }

TEST(PaddedWeightBytes, RoundsToSystolicTile) {
  const DeviceSpec spec;
  EXPECT_EQ(padded_weight_bytes(conv(0, 13824), spec), 16384u);
  EXPECT_EQ(padded_weight_bytes(conv(0, 4096), spec), 4096u);
  EXPECT_EQ(padded_weight_bytes(conv(0, 0), spec), 0u);
  EXPECT_EQ(padded_weight_bytes(conv(0, 1), spec), 4096u);
  DeviceSpec small;
  small.systolic_dim = 8;
  EXPECT_EQ(padded_weight_bytes(conv(0, 65), small), 128u);
}

TEST(CompileSegment, F512WholeModelSpillsOneLargeLayer) {
  SynthSpec s;
  s.f = 512;
  const auto g = generate(s);
  const auto r = compile_segment(g.nodes, DeviceSpec{});
  EXPECT_EQ(r.host_bytes, 2359296u);
  EXPECT_EQ(r.device_bytes, 16384u + 3u * 2359296u);
  EXPECT_EQ(r.padded_overhead_bytes, 16384u - 13824u);
  for (NodeId i = 0; i < 4; ++i) EXPECT_EQ(r.placement.at(i), Placement::kDevice);
  EXPECT_EQ(r.placement.at(4), Placement::kHost);
  EXPECT_TRUE(r.spills());
}

TEST(CompileSegment, SmallLayerIsPadded) {
  const std::vector<LayerNode> one{conv(7, 1024)};
  const auto r = compile_segment(one, DeviceSpec{});
  EXPECT_EQ(r.device_bytes, 4096u);
  EXPECT_EQ(r.host_bytes, 0u);
  EXPECT_FALSE(r.spills());
}

TEST(CompileSegment, ExactBudgetFits) {
  DeviceSpec spec;
  const std::vector<LayerNode> layers{conv(0, spec.device_capacity_bytes - spec.reserved_bytes)};
  EXPECT_FALSE(compile_segment(layers, spec).spills());
  spec.reserved_bytes += 1;
  EXPECT_TRUE(compile_segment(layers, spec).spills());
}

TEST(CompileSegment, OnceSpilledLaterLayersStayOnHost) {
  // A later small layer would fit in the leftover space but follows a spill.
  DeviceSpec spec;
  spec.reserved_bytes = 0;
  const std::vector<LayerNode> layers{conv(0, 6 * kMiB), conv(1, 3 * kMiB), conv(2, 4096)};
  const auto r = compile_segment(layers, spec);
  EXPECT_EQ(r.placement.at(1), Placement::kHost);
  EXPECT_EQ(r.placement.at(2), Placement::kHost);
  EXPECT_EQ(r.device_bytes, 6 * kMiB);
}

// Reference placement: fill in order until the first layer that doesn't fit.
TEST(CompileSegment, FortyMiBMatchesPlacementOracle) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    DeviceSpec spec;
    spec.reserved_bytes = (rng() % 3) * 262144;
    std::vector<LayerNode> layers;
    std::uint64_t total = 0;
    while (total < 40 * kMiB) {
      const std::uint64_t p = 1 + rng() % (3 * kMiB);
      layers.push_back(conv(static_cast<NodeId>(layers.size()), p));
      total += p;
    }
    const std::uint64_t budget = spec.device_capacity_bytes - spec.reserved_bytes;
    std::uint64_t dev = 0, host = 0;
    bool spilled = false;
    for (const auto& l : layers) {
      const std::uint64_t padded = round_up(l.param_count, 4096);
      if (!spilled && dev + padded <= budget) {
        dev += padded;
      } else {
        spilled = true;
        host += padded;
      }
    }
    const auto r = compile_segment(layers, spec);
    ASSERT_EQ(r.device_bytes, dev);
    ASSERT_EQ(r.host_bytes, host);
    EXPECT_LE(r.device_bytes, budget);
    EXPECT_GT(r.host_bytes, 0u);
  }
}

TEST(CompileSegment, RejectsEmptyAndBadSpecs) {
  EXPECT_THROW(compile_segment({}, DeviceSpec{}), Error);
  DeviceSpec bad;
  bad.reserved_bytes = bad.device_capacity_bytes;
  const std::vector<LayerNode> one{conv(0, 1)};
  EXPECT_THROW(compile_segment(one, bad), Error);
}

TEST(TpusNeeded, Boundaries) {
  const DeviceSpec spec;
  EXPECT_EQ(tpus_needed(93218406, spec), 12u);  // 88.9 MiB
  EXPECT_EQ(tpus_needed(8 * kMiB, spec), 1u);
  EXPECT_EQ(tpus_needed(8 * kMiB + 1, spec), 2u);
  EXPECT_EQ(tpus_needed(0, spec), 1u);
  EXPECT_EQ(tpus_needed(1, spec), 1u);
}

}  // namespace
}  // namespace segpipe
