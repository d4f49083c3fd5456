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

#include <gtest/gtest.h>

#include "segpipe/error.hpp"
#include "segpipe/memmodel.hpp"

namespace segpipe {
namespace {

SynthSpec with_f(std::uint64_t f) {
  SynthSpec s;
  s.f = f;
  return s;
}

TEST(ParamCount, PaperFormula) {
  EXPECT_EQ(param_count(with_f(32)), 37728u);
  EXPECT_EQ(param_count(with_f(512)), 9451008u);
  SynthSpec one = with_f(10);
  one.L = 1;
  EXPECT_EQ(param_count(one), 270u);
  // Linear in f when L = 1.
  one.f = 20;
  EXPECT_EQ(param_count(one), 540u);
}

TEST(ParamCount, RejectsZeroFields) {
  SynthSpec s;
  s.C = 0;
  EXPECT_THROW(param_count(s), Error);
  s = SynthSpec{};
  s.dtype_bytes = 0;
  EXPECT_THROW(generate(s), Error);
}

TEST(Generate, F512Profile) {
  const auto g = generate(with_f(512));
  EXPECT_EQ(g.name, "synth_L5_f512");
  ASSERT_EQ(g.nodes.size(), 5u);
  ASSERT_EQ(g.edges.size(), 4u);
  const std::vector<std::uint64_t> expected{13824, 2359296, 2359296, 2359296, 2359296};
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(g.nodes[i].param_count, expected[i]);
    EXPECT_EQ(g.nodes[i].op_kind, OpKind::kConv2d);
  }
  EXPECT_EQ(g.nodes[1].mac_count, 9663676416u);
  EXPECT_EQ(g.total_params(), param_count(with_f(512)));
  EXPECT_TRUE(validate(g).ok());
}

TEST(Generate, ActivationBytes) {
  const auto g = generate(with_f(32));
  for (const auto& n : g.nodes) EXPECT_EQ(n.activation_bytes, 131072u);
  SynthSpec wide = with_f(32);
  wide.dtype_bytes = 4;
  const auto g4 = generate(wide);
  EXPECT_EQ(g4.nodes[0].activation_bytes, 4u * 131072u);
  // Weights stay one byte per parameter.
  EXPECT_EQ(g4.total_params(), g.total_params());
}

TEST(Generate, TotalMatchesFormulaAcrossShapes) {
  for (std::uint64_t L : {1, 2, 7}) {
    for (std::uint64_t f : {1, 13, 64}) {
      SynthSpec s;
      s.L = L;
      s.f = f;
      s.C = 5;
      s.Fw = 3;
      s.Fh = 5;
      EXPECT_EQ(generate(s).total_params(), s.Fw * s.Fh * f * (s.C + f * (L - 1)));
    }
  }
}

TEST(Sweep, Counts) {
  EXPECT_EQ(sweep(32, 52, 10, {}).size(), 3u);
  EXPECT_EQ(sweep(32, 1152, 10, {}).size(), 113u);
  EXPECT_EQ(sweep(32, 32, 10, {}).size(), 1u);
  const auto s = sweep(32, 52, 10, {});
  EXPECT_EQ(s[1].name, "synth_L5_f42");
  EXPECT_THROW(sweep(40, 30, 1, {}), Error);
  EXPECT_THROW(sweep(30, 40, 0, {}), Error);
}

TEST(Sweep, SpillOnsetNeighborhood) {
  // Raw size against 8 * 10^6 bytes crosses between f=471 and f=472.
  EXPECT_LT(param_count(with_f(471)), 8000000u);
  EXPECT_GT(param_count(with_f(472)), 8000000u);
  // Against 8 MiB, between 482 and 483.
  EXPECT_LE(param_count(with_f(482)), 8 * kMiB);
  EXPECT_GT(param_count(with_f(483)), 8 * kMiB);
  // The memmodel (padding + reserve) spills a single device from f=467 on.
  const DeviceSpec spec;
  int onset = 0;
  for (std::uint64_t f = 400; f <= 520 && !onset; ++f) {
    const auto g = generate(with_f(f));
    if (compile_segment(g.nodes, spec).spills()) onset = static_cast<int>(f);
  }
  EXPECT_EQ(onset, 467);
}

}  // namespace
}  // namespace segpipe
