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

#include <algorithm>
#include <atomic>
#include <exception>
#include <numeric>
#include <thread>

#include "segpipe/bounded_queue.hpp"
#include "segpipe/error.hpp"

namespace segpipe {

void check(const CostModel& cost, const DeviceSpec& spec) {
  if (!(cost.eff_tops > 0.0)) throw invalid_argument("eff_tops must be positive");
  if (cost.eff_tops > spec.peak_tops) {
    throw invalid_argument("eff_tops exceeds the device peak of " + std::to_string(spec.peak_tops));
  }
  if (cost.host_read_penalty_s_per_byte < 0.0 || cost.transfer_s_per_byte < 0.0 ||
      cost.fixed_overhead_s < 0.0) {
    throw invalid_argument("cost model knobs must be non-negative");
  }
}

double stage_time(const Segment& segment, const CostModel& cost) {
  const double ops = 2.0 * static_cast<double>(segment.mac_count);
  return ops / (cost.eff_tops * 1e12) +
         static_cast<double>(segment.memory.host_bytes) * cost.host_read_penalty_s_per_byte +
         static_cast<double>(segment.incoming_activation_bytes) * cost.transfer_s_per_byte +
         cost.fixed_overhead_s;
}

double pipeline_makespan(std::span<const double> stage_times, int batch) {
  if (stage_times.empty()) return 0.0;
  const double sum = std::accumulate(stage_times.begin(), stage_times.end(), 0.0);
  const double slowest = *std::max_element(stage_times.begin(), stage_times.end());
  return sum + static_cast<double>(batch - 1) * slowest;
}

SimResult simulate_stages(std::vector<double> stage_times, int batch) {
  if (batch < 1) throw invalid_argument("batch must be >= 1");
  if (stage_times.empty()) throw invalid_argument("pipeline needs at least one stage");
  SimResult r;
  r.batch = batch;
  r.makespan_s = pipeline_makespan(stage_times, batch);
  r.throughput_ips = r.makespan_s > 0.0 ? batch / r.makespan_s : 0.0;
  r.max_stage_s = *std::max_element(stage_times.begin(), stage_times.end());
  r.mean_stage_s = std::accumulate(stage_times.begin(), stage_times.end(), 0.0) /
                   static_cast<double>(stage_times.size());
  r.stage_deviation_s = r.max_stage_s - r.mean_stage_s;
  r.stage_times_s = std::move(stage_times);
  return r;
}

SimResult simulate(const SegmentAssignment& assignment, const CostModel& cost, int batch,
                   const SegmentAssignment* baseline) {
  std::vector<double> times;
  times.reserve(assignment.segments.size());
  for (const auto& seg : assignment.segments) times.push_back(stage_time(seg, cost));
  SimResult r = simulate_stages(std::move(times), batch);
  if (baseline) {
    const SimResult single = simulate(*baseline, cost, batch);
    r.speedup_vs_single = single.makespan_s / r.makespan_s;
  } else if (assignment.segments.size() == 1) {
    r.speedup_vs_single = 1.0;
  }
  return r;
}

SegmentAssignment single_device_assignment(const ModelGraph& graph, const DepthProfile& depths,
                                           const DeviceSpec& spec) {
  Partition whole;
  whole.s = 1;
  whole.strategy = Strategy::kManual;
  return materialize(whole, graph, depths, spec);
}

RunResult run_stages(std::span<const double> stage_times, int batch, const RunOptions& options) {
  RunResult out;
  out.analytic = simulate_stages({stage_times.begin(), stage_times.end()}, batch);
  if (options.mode == RunMode::kAnalytic) {
    out.output_order.resize(static_cast<std::size_t>(batch));
    std::iota(out.output_order.begin(), out.output_order.end(), 0);
    out.wall_makespan_s = out.analytic.makespan_s;
    return out;
  }

  using Clock = std::chrono::steady_clock;
  const auto execute = options.executor ? options.executor : [](int, int, double seconds) {
    std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
  };
  const std::size_t stages = stage_times.size();
  // queues[i] feeds stage i; queues[stages] collects outputs.
  std::vector<std::unique_ptr<BoundedQueue<int>>> queues;
  for (std::size_t i = 0; i < stages; ++i) {
    queues.push_back(std::make_unique<BoundedQueue<int>>(options.queue_capacity));
  }
  queues.push_back(std::make_unique<BoundedQueue<int>>(static_cast<std::size_t>(batch)));

  std::vector<std::exception_ptr> failures(stages);
  std::vector<std::atomic<int>> processed(stages);
  auto close_all = [&] {
    for (auto& q : queues) q->close();
  };

  const auto start = Clock::now();
  Clock::time_point finish = start;
  {
    std::vector<std::jthread> workers;
    for (std::size_t i = 0; i < stages; ++i) {
      workers.emplace_back([&, i] {
        try {
          for (int n = 0; n < batch; ++n) {
            int token = n;
            if (i > 0) {
              auto next = queues[i]->pop();
              if (!next) return;
              token = *next;
            }
            execute(static_cast<int>(i), token, stage_times[i]);
            if (!queues[i + 1]->push(token)) return;
            processed[i].fetch_add(1);
          }
        } catch (...) {
          failures[i] = std::current_exception();
          close_all();
        }
      });
    }

    auto& sink = *queues.back();
    while (out.output_order.size() < static_cast<std::size_t>(batch)) {
      auto token = sink.pop_for(options.stall_timeout);
      if (!token) break;
      out.output_order.push_back(*token);
    }
    finish = Clock::now();
    close_all();
  }

  for (std::size_t i = 0; i < stages; ++i) {
    if (!failures[i]) continue;
    std::string what = "unknown failure";
    try {
      std::rethrow_exception(failures[i]);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    throw Error(ErrorCode::kPipeline, "stage " + std::to_string(i) + " failed: " + what);
  }
  if (out.output_order.size() != static_cast<std::size_t>(batch)) {
    std::size_t stalled = 0;
    while (stalled + 1 < stages && processed[stalled].load() == batch) ++stalled;
    throw Error(ErrorCode::kPipeline, "stage " + std::to_string(stalled) + " stalled after " +
                                          std::to_string(processed[stalled].load()) + " of " +
                                          std::to_string(batch) + " inputs");
  }
  for (int k = 0; k < batch; ++k) {
    if (out.output_order[static_cast<std::size_t>(k)] != k) {
      throw Error(ErrorCode::kPipeline, "stage " + std::to_string(stages - 1) +
                                            " delivered input " +
                                            std::to_string(out.output_order[static_cast<std::size_t>(k)]) +
                                            " at position " + std::to_string(k));
    }
  }
  out.wall_makespan_s = std::chrono::duration<double>(finish - start).count();
  return out;
}

RunResult run_pipeline(const SegmentAssignment& assignment, const CostModel& cost, int batch,
                       const RunOptions& options) {
  std::vector<double> times;
  for (const auto& seg : assignment.segments) times.push_back(stage_time(seg, cost));
  return run_stages(times, batch, options);
}

}  // namespace segpipe
