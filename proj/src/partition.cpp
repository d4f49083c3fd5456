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

#include "segpipe/partition.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <string>
#include <thread>

#include "segpipe/error.hpp"

namespace segpipe {

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::kBalanced: return "balanced";
    case Strategy::kCompilerLike: return "compiler_like";
    case Strategy::kProfiled: return "profiled";
    case Strategy::kManual: return "manual";
  }
  return "manual";
}

std::optional<Strategy> parse_strategy(std::string_view text) {
  for (Strategy s : {Strategy::kBalanced, Strategy::kCompilerLike, Strategy::kProfiled,
                     Strategy::kManual}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

void check(const Partition& p, int d) {
  if (p.s < 1) throw invalid_argument("partition must have at least one segment");
  if (p.s > d) {
    throw invalid_argument("cannot split " + std::to_string(d) + " depth levels into " +
                           std::to_string(p.s) + " segments");
  }
  if (p.splits.size() != static_cast<std::size_t>(p.s - 1)) {
    throw invalid_argument("partition with s=" + std::to_string(p.s) + " needs " +
                           std::to_string(p.s - 1) + " splits, got " +
                           std::to_string(p.splits.size()));
  }
  int prev = -1;
  for (int k : p.splits) {
    if (k <= prev || k >= d - 1) {
      throw invalid_argument("split " + std::to_string(k) +
                             " out of order or outside [0, " + std::to_string(d - 2) + "]");
    }
    prev = k;
  }
}

std::uint64_t max_segment_sum(std::span<const std::uint64_t> P, std::span<const int> splits) {
  std::uint64_t best = 0, acc = 0;
  std::size_t next = 0;
  for (std::size_t i = 0; i < P.size(); ++i) {
    acc += P[i];
    if (next < splits.size() && static_cast<std::size_t>(splits[next]) == i) {
      best = std::max(best, acc);
      acc = 0;
      ++next;
    }
  }
  return std::max(best, acc);
}

SplitCheckResult split_check(std::span<const std::uint64_t> P, int s, std::uint64_t bound) {
  if (P.empty() || s < 1) throw invalid_argument("split_check needs a nonempty P and s >= 1");
  SplitCheckResult result;
  // A level larger than the bound would otherwise become an over-full segment.
  if (*std::max_element(P.begin(), P.end()) > bound) return result;
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < P.size(); ++i) {
    if (acc + P[i] > bound) {
      result.splits.push_back(static_cast<int>(i) - 1);
      acc = P[i];
    } else {
      acc += P[i];
    }
  }
  result.feasible = result.splits.size() + 1 <= static_cast<std::size_t>(s);
  return result;
}

Partition balanced_split(std::span<const std::uint64_t> P, int s, int* probes) {
  if (s < 1) throw invalid_argument("segment count must be >= 1");
  if (P.empty() || static_cast<std::size_t>(s) > P.size()) {
    throw invalid_argument("cannot split " + std::to_string(P.size()) + " depth levels into " +
                           std::to_string(s) + " segments");
  }
  int calls = 0;
  std::uint64_t lo = *std::max_element(P.begin(), P.end());
  std::uint64_t hi = std::accumulate(P.begin(), P.end(), std::uint64_t{0});
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    ++calls;
    if (split_check(P, s, mid).feasible) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  ++calls;
  SplitCheckResult best = split_check(P, s, lo);
  if (probes) *probes = calls;

  Partition partition;
  partition.s = s;
  partition.strategy = Strategy::kBalanced;
  partition.splits = std::move(best.splits);
  for (int gap = 0; partition.splits.size() + 1 < static_cast<std::size_t>(s); ++gap) {
    if (!std::binary_search(partition.splits.begin(), partition.splits.end(), gap)) {
      partition.splits.insert(
          std::lower_bound(partition.splits.begin(), partition.splits.end(), gap), gap);
    }
  }
  return partition;
}

Partition compiler_like_split(const ModelGraph& graph, const DepthProfile& depths, int s) {
  const int d = depths.d;
  if (s < 1 || s > d) {
    throw invalid_argument("cannot split " + std::to_string(d) + " depth levels into " +
                           std::to_string(s) + " segments");
  }
  std::vector<std::uint64_t> cumulative(static_cast<std::size_t>(d), 0);
  for (const auto& n : graph.nodes) {
    if (n.op_kind == OpKind::kInput || n.op_kind == OpKind::kOutput) continue;
    ++cumulative[static_cast<std::size_t>(depths.depth(n.id))];
  }
  std::partial_sum(cumulative.begin(), cumulative.end(), cumulative.begin());
  const std::uint64_t layers = cumulative.back();
  if (layers < static_cast<std::uint64_t>(s)) {
    throw invalid_argument("cannot spread " + std::to_string(layers) + " layers over " +
                           std::to_string(s) + " segments");
  }
  const std::uint64_t base = layers / static_cast<std::uint64_t>(s);
  const std::uint64_t larger = layers % static_cast<std::uint64_t>(s);

  Partition partition;
  partition.s = s;
  partition.strategy = Strategy::kCompilerLike;
  std::uint64_t target = 0;
  int prev = -1;
  for (int j = 0; j + 1 < s; ++j) {
    // The last `larger` segments take one extra layer.
    target += base + (static_cast<std::uint64_t>(j) >= static_cast<std::uint64_t>(s) - larger ? 1 : 0);
    const int last_allowed = d - 1 - (s - 1 - j);
    int best_k = prev + 1;
    std::uint64_t best_err = std::numeric_limits<std::uint64_t>::max();
    for (int k = prev + 1; k <= last_allowed; ++k) {
      const std::uint64_t c = cumulative[static_cast<std::size_t>(k)];
      const std::uint64_t err = c > target ? c - target : target - c;
      if (err < best_err) {
        best_err = err;
        best_k = k;
      }
    }
    partition.splits.push_back(best_k);
    prev = best_k;
  }
  return partition;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  for (std::uint64_t i = 0; i < k; ++i) {
    r = r * (n - i) / (i + 1);
    if (r > kMax) return kMax;
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t count_partitions(int d, int s) {
  if (s < 1 || s > d) return 0;
  return binomial(static_cast<std::uint64_t>(d - 1), static_cast<std::uint64_t>(s - 1));
}

PartitionRange::iterator::iterator(int d, int s) : d_(d), done_(false) {
  current_.s = s;
  current_.strategy = Strategy::kProfiled;
  current_.splits.resize(static_cast<std::size_t>(s - 1));
  std::iota(current_.splits.begin(), current_.splits.end(), 0);
}

PartitionRange::iterator& PartitionRange::iterator::operator++() {
  auto& c = current_.splits;
  const int m = static_cast<int>(c.size());
  // Position i may reach at most (d-2) - (m-1-i).
  int i = m - 1;
  while (i >= 0 && c[static_cast<std::size_t>(i)] == (d_ - 2) - (m - 1 - i)) --i;
  if (i < 0) {
    done_ = true;
    return *this;
  }
  ++c[static_cast<std::size_t>(i)];
  for (int j = i + 1; j < m; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
  return *this;
}

PartitionRange::PartitionRange(int d, int s) : d_(d), s_(s) {}

PartitionRange enumerate_partitions(int d, int s) {
  if (s < 1 || s > d) {
    throw invalid_argument("cannot enumerate " + std::to_string(s) + "-way partitions of " +
                           std::to_string(d) + " depth levels");
  }
  return PartitionRange(d, s);
}

Partition profiled_best(const ModelGraph& graph, const DepthProfile& depths, int s,
                        const PartitionScorer& scorer, std::uint64_t limit, unsigned threads) {
  (void)graph;
  const std::uint64_t count = count_partitions(depths.d, s);
  if (count == 0) {
    throw invalid_argument("cannot split " + std::to_string(depths.d) +
                           " depth levels into " + std::to_string(s) + " segments");
  }
  if (count > limit) {
    throw Error(ErrorCode::kTooManyPartitions,
                "profiling needs C(" + std::to_string(depths.d - 1) + "," +
                    std::to_string(s - 1) + ") = " + std::to_string(count) +
                    " partitions, above the limit of " + std::to_string(limit));
  }
  std::vector<Partition> candidates;
  candidates.reserve(static_cast<std::size_t>(count));
  for (const auto& p : enumerate_partitions(depths.d, s)) candidates.push_back(p);

  std::vector<double> scores(candidates.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, candidates.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < candidates.size(); ++i) scores[i] = scorer(candidates[i]);
  } else {
    std::vector<std::exception_ptr> errors(threads);
    {
      std::vector<std::jthread> workers;
      for (unsigned t = 0; t < threads; ++t) {
        workers.emplace_back([&, t] {
          try {
            for (std::size_t i = t; i < candidates.size(); i += threads) {
              scores[i] = scorer(candidates[i]);
            }
          } catch (...) {
            errors[t] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  // Enumeration order is lexicographic, so the first minimum wins ties.
  const auto best = std::min_element(scores.begin(), scores.end());
  return candidates[static_cast<std::size_t>(best - scores.begin())];
}

std::uint64_t SegmentAssignment::host_bytes() const {
  std::uint64_t total = 0;
  for (const auto& seg : segments) total += seg.memory.host_bytes;
  return total;
}

int SegmentAssignment::spilling_segments() const {
  return static_cast<int>(std::count_if(segments.begin(), segments.end(),
                                        [](const Segment& s) { return s.memory.spills(); }));
}

SegmentAssignment materialize(const Partition& partition, const ModelGraph& graph,
                              const DepthProfile& depths, const DeviceSpec& spec) {
  check(partition, depths.d);
  std::unordered_map<NodeId, const LayerNode*> by_id;
  for (const auto& n : graph.nodes) by_id[n.id] = &n;

  SegmentAssignment out;
  out.model = graph.name;
  out.partition = partition;
  out.segments.resize(static_cast<std::size_t>(partition.s));
  std::vector<int> segment_of_depth(static_cast<std::size_t>(depths.d));
  int first = 0;
  for (int i = 0; i < partition.s; ++i) {
    const int last = i + 1 < partition.s ? partition.splits[static_cast<std::size_t>(i)] : depths.d - 1;
    auto& seg = out.segments[static_cast<std::size_t>(i)];
    seg.first_depth = first;
    seg.last_depth = last;
    seg.incoming_activation_bytes =
        i == 0 ? depths.model_input_bytes
               : depths.activations_at_cut[static_cast<std::size_t>(first - 1)];
    for (int k = first; k <= last; ++k) segment_of_depth[static_cast<std::size_t>(k)] = i;
    first = last + 1;
  }

  std::vector<std::vector<LayerNode>> layers(out.segments.size());
  for (NodeId id : nodes_in_depth_order(graph, depths)) {
    const auto i = static_cast<std::size_t>(segment_of_depth[static_cast<std::size_t>(depths.depth(id))]);
    const LayerNode& node = *by_id.at(id);
    auto& seg = out.segments[i];
    seg.node_ids.push_back(id);
    seg.raw_param_bytes += node.param_count;
    seg.padded_bytes += padded_weight_bytes(node, spec);
    seg.mac_count += node.mac_count;
    layers[i].push_back(node);
  }
  for (std::size_t i = 0; i < out.segments.size(); ++i) {
    out.segments[i].memory = compile_segment(layers[i], spec);
  }
  return out;
}

std::uint64_t imbalance_delta(const SegmentAssignment& assignment) {
  if (assignment.segments.empty()) return 0;
  const auto [lo, hi] = std::minmax_element(
      assignment.segments.begin(), assignment.segments.end(),
      [](const Segment& a, const Segment& b) { return a.padded_bytes < b.padded_bytes; });
  return hi->padded_bytes - lo->padded_bytes;
}

}  // namespace segpipe
