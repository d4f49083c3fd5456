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

#include "segpipe/pipesim.hpp"

#include <gtest/gtest.h>

#include <random>
#include <thread>

#include "oracles.hpp"
#include "segpipe/bounded_queue.hpp"
#include "segpipe/error.hpp"
#include "segpipe/plan.hpp"
#include "segpipe/synthgen.hpp"
#include "test_graphs.hpp"

namespace segpipe {
namespace {

ModelGraph synth(std::uint64_t f) {
  SynthSpec s;
  s.f = f;
  return generate(s);
}

TEST(StageTime, FixedOverheadOnly) {
  EXPECT_DOUBLE_EQ(stage_time(Segment{}, CostModel{}), 1e-4);
}

TEST(StageTime, SpilledLargeLayerCostsAboutTenMs) {
  Segment seg;
  seg.memory.host_bytes = 2359296;
  EXPECT_NEAR(stage_time(seg, CostModel{}) - 1e-4, 9.909e-3, 1e-6);
}

TEST(StageTime, F512SingleDeviceComputeTerm) {
  const auto g = synth(512);
  const auto a = single_device_assignment(g, compute_depths(g), DeviceSpec{});
  ASSERT_EQ(a.segments.size(), 1u);
  EXPECT_EQ(a.segments[0].mac_count, 9451008ull * 4096ull);
  CostModel compute_only;
  compute_only.host_read_penalty_s_per_byte = 0;
  compute_only.fixed_overhead_s = 0;
  EXPECT_NEAR(stage_time(a.segments[0], compute_only), 55.3e-3, 0.05e-3);
}

TEST(Makespan, Formula) {
  const std::vector<double> t{2, 2, 2};
  EXPECT_DOUBLE_EQ(pipeline_makespan(t, 15), 34.0);
  const auto r = simulate_stages({3}, 4);
  EXPECT_DOUBLE_EQ(r.makespan_s, 12.0);
  EXPECT_DOUBLE_EQ(r.throughput_ips, 4.0 / 12.0);
  const auto one = simulate_stages({1, 2, 4}, 1);
  EXPECT_DOUBLE_EQ(one.throughput_ips, 1.0 / 7.0);
  EXPECT_DOUBLE_EQ(one.max_stage_s, 4.0);
  EXPECT_DOUBLE_EQ(one.stage_deviation_s, 4.0 - 7.0 / 3.0);
  EXPECT_THROW(simulate_stages({1}, 0), Error);
  EXPECT_THROW(simulate_stages({}, 1), Error);
}

TEST(Makespan, MatchesEventStepper) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t s = 1 + rng() % 8;
    std::vector<double> t(s);
    for (auto& v : t) v = static_cast<double>(1 + rng() % 100);
    const int batch = 1 + static_cast<int>(rng() % 50);
    ASSERT_EQ(pipeline_makespan(t, batch), oracle::event_stepper(t, batch));
  }
}

TEST(Simulate, SingleStageSpeedupIsOne) {
  const auto g = synth(512);
  const auto depths = compute_depths(g);
  const auto a = single_device_assignment(g, depths, DeviceSpec{});
  const auto r = simulate(a, CostModel{}, 15);
  EXPECT_DOUBLE_EQ(r.makespan_s, 15 * r.stage_times_s[0]);
  EXPECT_EQ(r.speedup_vs_single, 1.0);
}

TEST(Simulate, F512TwoDevicesIsSuperLinear) {
  const auto g = synth(512);
  const auto depths = compute_depths(g);
  const auto single = single_device_assignment(g, depths, DeviceSpec{});
  const auto two = materialize(balanced_split(depths.P, 2), g, depths, DeviceSpec{});
  const auto r = simulate(two, CostModel{}, 15, &single);
  ASSERT_TRUE(r.speedup_vs_single.has_value());
  EXPECT_GT(*r.speedup_vs_single, 2.0);
  EXPECT_FALSE(simulate(two, CostModel{}, 15).speedup_vs_single.has_value());
}

TEST(CostModel, Validation) {
  CostModel c;
  c.eff_tops = 5.0;
  EXPECT_THROW(check(c, DeviceSpec{}), Error);
  c = CostModel{};
  c.transfer_s_per_byte = -1;
  EXPECT_THROW(check(c, DeviceSpec{}), Error);
  EXPECT_NO_THROW(check(CostModel{}, DeviceSpec{}));
}

TEST(BoundedQueue, FifoCapacityAndClose) {
  BoundedQueue<int> q(2);
  EXPECT_EQ(q.capacity(), 2u);
  EXPECT_TRUE(q.push(1));
  EXPECT_TRUE(q.push(2));
  std::atomic<bool> pushed{false};
  std::jthread producer([&] {
    q.push(3);
    pushed = true;
  });
  std::this_thread::sleep_for(std::chrono::milliseconds(30));
  EXPECT_FALSE(pushed.load());
  EXPECT_EQ(q.pop(), 1);
  producer.join();
  EXPECT_TRUE(pushed.load());
  EXPECT_EQ(q.pop(), 2);
  EXPECT_EQ(q.pop(), 3);
  EXPECT_FALSE(q.pop_for(std::chrono::milliseconds(5)).has_value());
  q.close();
  EXPECT_FALSE(q.push(4));
  EXPECT_FALSE(q.pop().has_value());
  EXPECT_EQ(BoundedQueue<int>(0).capacity(), 1u);
}

RunOptions concurrent(std::size_t capacity = 2) {
  RunOptions o;
  o.mode = RunMode::kConcurrent;
  o.queue_capacity = capacity;
  return o;
}

TEST(RunStages, AnalyticModeIsTheFormula) {
  const std::vector<double> t{1, 2, 3};
  const auto r = run_stages(t, 4, RunOptions{});
  EXPECT_DOUBLE_EQ(r.wall_makespan_s, 6.0 + 3 * 3.0);
  EXPECT_EQ(r.output_order, (std::vector<int>{0, 1, 2, 3}));
}

TEST(RunStages, SingleInputTakesSumOfStages) {
  const std::vector<double> t{0.01, 0.02, 0.01};
  const auto r = run_stages(t, 1, concurrent());
  EXPECT_EQ(r.output_order, (std::vector<int>{0}));
  EXPECT_NEAR(r.wall_makespan_s, 0.04, 0.02);
}

TEST(RunStages, EqualStagesTrackAnalytic) {
  const std::vector<double> t(4, 0.010);
  const auto r = run_stages(t, 15, concurrent());
  EXPECT_EQ(r.output_order.size(), 15u);
  EXPECT_NEAR(r.wall_makespan_s / r.analytic.makespan_s, 1.0, 0.2);
}

TEST(RunStages, CapacityOneKeepsOrder) {
  const std::vector<double> t{0.001, 0.003, 0.002};
  const auto r = run_stages(t, 5, concurrent(1));
  EXPECT_EQ(r.output_order, (std::vector<int>{0, 1, 2, 3, 4}));
}

TEST(RunStages, StageFailureNamesTheStage) {
  auto o = concurrent();
  o.executor = [](int stage, int token, double) {
    if (stage == 2 && token == 3) throw std::runtime_error("device lost");
  };
  try {
    run_stages(std::vector<double>{0, 0, 0, 0}, 8, o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPipeline);
    EXPECT_NE(std::string(e.what()).find("stage 2"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("device lost"), std::string::npos);
  }
}

TEST(RunStages, StallIsReported) {
  auto o = concurrent();
  o.stall_timeout = std::chrono::milliseconds(40);
  o.executor = [](int stage, int token, double) {
    if (stage == 1 && token == 1) std::this_thread::sleep_for(std::chrono::milliseconds(250));
  };
  try {
    run_stages(std::vector<double>{0, 0, 0}, 4, o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPipeline);
    EXPECT_NE(std::string(e.what()).find("stalled"), std::string::npos) << e.what();
  }
}

TEST(Compare, F512FourDevices) {
  const auto cmp = compare_strategies(synth(512), 4, DeviceSpec{}, CostModel{});
  ASSERT_EQ(cmp.rows.size(), 4u);
  EXPECT_EQ(cmp.rows[0].strategy, "single");
  EXPECT_EQ(cmp.rows[1].strategy, "compiler_like");
  EXPECT_EQ(cmp.rows[2].strategy, "balanced");
  EXPECT_EQ(cmp.rows[3].strategy, "profiled");
  const auto& compiler = cmp.rows[1];
  const auto& balanced = cmp.rows[2];
  EXPECT_EQ(balanced.host_bytes, 0u);
  EXPECT_EQ(balanced.status, "resolved");
  // 1-1-1-2 still fits here (2 x 2.25 MiB + reserve < 8 MiB) but is slower.
  EXPECT_EQ(compiler.host_bytes, 0u);
  EXPECT_LT(balanced.sim.makespan_s, compiler.sim.makespan_s);
  EXPECT_GT(cmp.rows[0].host_bytes, 0u);
}

TEST(Compare, CompilerLikeSpillsWhenTwoLargeLayersShareADevice) {
  const auto cmp = compare_strategies(synth(702), 4, DeviceSpec{}, CostModel{});
  EXPECT_GT(cmp.rows[1].host_bytes, 0u);
  EXPECT_EQ(cmp.rows[2].host_bytes, 0u);
  EXPECT_LT(cmp.rows[2].sim.makespan_s, cmp.rows[1].sim.makespan_s);
}

TEST(Compare, SpillFreeModelTwoDevices) {
  const auto cmp = compare_strategies(synth(32), 2, DeviceSpec{}, CostModel{});
  EXPECT_EQ(cmp.rows[1].host_bytes, 0u);
  EXPECT_EQ(cmp.rows[2].host_bytes, 0u);
  EXPECT_LE(cmp.rows[2].sim.max_stage_s, cmp.rows[1].sim.max_stage_s);
}

TEST(Compare, Preconditions) {
  EXPECT_THROW(compare_strategies(synth(32), 6, DeviceSpec{}, CostModel{}), Error);
  EXPECT_THROW(compare_strategies(synth(32), 1, DeviceSpec{}, CostModel{}), Error);
  CompareOptions tight;
  tight.profile_limit = 1;
  EXPECT_EQ(compare_strategies(synth(32), 2, DeviceSpec{}, CostModel{}, tight).rows.size(), 3u);
}

TEST(Compare, ModelsKeepInputOrder) {
  std::vector<ModelGraph> models;
  for (std::uint64_t f : {900, 32, 512, 702, 64}) models.push_back(synth(f));
  const auto out = compare_models(models, 0, DeviceSpec{}, CostModel{});
  ASSERT_EQ(out.size(), models.size());
  for (std::size_t i = 0; i < models.size(); ++i) EXPECT_EQ(out[i].model, models[i].name);
  // f=32 fits one device: auto picks the 2-device minimum.
  EXPECT_EQ(out[1].rows[1].s, 2);
  EXPECT_EQ(out[0].rows[1].s, 4);
}

TEST(Plan, Strategies) {
  const auto g = synth(512);
  const auto depths = compute_depths(g);
  PlanOptions o;
  o.s = 4;
  auto plan = make_plan(g, depths, DeviceSpec{}, o);
  EXPECT_EQ(plan.refine_status, RefineStatus::kResolved);
  EXPECT_EQ(plan.partition().splits, (std::vector<int>{1, 2, 3}));
  o.strategy = Strategy::kCompilerLike;
  plan = make_plan(g, depths, DeviceSpec{}, o);
  EXPECT_FALSE(plan.refine_status.has_value());
  EXPECT_EQ(plan.partition().splits, (std::vector<int>{0, 1, 2}));
  o.strategy = Strategy::kProfiled;
  plan = make_plan(g, depths, DeviceSpec{}, o);
  EXPECT_EQ(plan.partition().strategy, Strategy::kProfiled);
  EXPECT_EQ(plan.partition().splits, (std::vector<int>{1, 2, 3}));
  o.strategy = Strategy::kManual;
  EXPECT_THROW(make_plan(g, depths, DeviceSpec{}, o), Error);
}

}  // namespace
}  // namespace segpipe
