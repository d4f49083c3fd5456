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

// Horizontal segmentation of a depth profile into contiguous depth ranges.
//
// A split value k places a segment boundary between depth k and k+1, so a
// partition of d levels into s segments has s-1 strictly increasing splits in
// [0, d-2].

#pragma once

#include <cstdint>
#include <functional>
#include <iterator>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "segpipe/graph.hpp"
#include "segpipe/memmodel.hpp"

namespace segpipe {

enum class Strategy { kBalanced, kCompilerLike, kProfiled, kManual };

std::string_view to_string(Strategy strategy);
std::optional<Strategy> parse_strategy(std::string_view text);

struct Partition {
  std::vector<int> splits;
  int s = 1;
  Strategy strategy = Strategy::kManual;

  bool operator==(const Partition&) const = default;
};

/// Throws Error(kInvalidArgument) unless `p` is a valid s-way partition of d
/// depth levels.
void check(const Partition& p, int d);

/// Largest segment sum of P under the given splits.
std::uint64_t max_segment_sum(std::span<const std::uint64_t> P, std::span<const int> splits);

struct SplitCheckResult {
  bool feasible = false;
  std::vector<int> splits;
};

/// Greedy left-to-right fill: a new segment starts whenever adding the next
/// level would push the running sum past `bound`. Feasible iff no single
/// level exceeds `bound` and at most s segments were used.
SplitCheckResult split_check(std::span<const std::uint64_t> P, int s, std::uint64_t bound);

/// Exact min-max contiguous partition. Binary search over bounds in
/// [max(P), sum(P)], keeping the greedy splits of the lowest feasible bound.
/// If greedy used fewer than s segments, the lowest unused gaps are split.
/// `probes`, when given, receives the number of split_check calls.
/// Throws Error(kInvalidArgument) if s < 1 or s > P.size().
Partition balanced_split(std::span<const std::uint64_t> P, int s, int* probes = nullptr);

/// Emulates a compiler that balances layer counts, not parameters: layer
/// counts per segment as equal as possible, smaller counts first.
Partition compiler_like_split(const ModelGraph& graph, const DepthProfile& depths, int s);

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Number of s-way partitions of d levels: C(d-1, s-1).
std::uint64_t count_partitions(int d, int s);

/// Lexicographic enumeration of every s-way partition of d levels.
class PartitionRange {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = Partition;
    using difference_type = std::ptrdiff_t;
    using pointer = const Partition*;
    using reference = const Partition&;

    iterator() = default;
    iterator(int d, int s);

    reference operator*() const { return current_; }
    pointer operator->() const { return &current_; }
    iterator& operator++();
    iterator operator++(int) {
      iterator tmp = *this;
      ++*this;
      return tmp;
    }
    bool operator==(const iterator& other) const { return done_ == other.done_ && (done_ || current_ == other.current_); }

   private:
    int d_ = 0;
    Partition current_;
    bool done_ = true;
  };

  PartitionRange(int d, int s);

  iterator begin() const { return iterator(d_, s_); }
  iterator end() const { return iterator(); }

 private:
  int d_;
  int s_;
};

/// Throws Error(kInvalidArgument) if s < 1 or s > d.
PartitionRange enumerate_partitions(int d, int s);

using PartitionScorer = std::function<double(const Partition&)>;

/// Scores every partition and keeps the lowest score; ties go to the
/// lexicographically first. `scorer` must be pure and thread-safe: candidates
/// are scored on `threads` workers (0 = hardware concurrency).
/// Throws Error(kTooManyPartitions) stating the count when it exceeds `limit`.
Partition profiled_best(const ModelGraph& graph, const DepthProfile& depths, int s,
                        const PartitionScorer& scorer, std::uint64_t limit = 100000,
                        unsigned threads = 0);

struct Segment {
  int first_depth = 0;
  int last_depth = 0;
  std::vector<NodeId> node_ids;  // depth order
  std::uint64_t raw_param_bytes = 0;
  std::uint64_t padded_bytes = 0;
  std::uint64_t mac_count = 0;
  std::uint64_t incoming_activation_bytes = 0;
  MemoryReport memory;

  bool operator==(const Segment&) const = default;
};

struct SegmentAssignment {
  std::string model;
  Partition partition;
  std::vector<Segment> segments;

  std::uint64_t host_bytes() const;
  int spilling_segments() const;
  bool operator==(const SegmentAssignment&) const = default;
};

/// Assigns each node to the segment covering its depth and compiles every
/// segment. Segment 0 receives the model input; segment i > 0 receives
/// activations_at_cut[splits[i-1]].
SegmentAssignment materialize(const Partition& partition, const ModelGraph& graph,
                              const DepthProfile& depths, const DeviceSpec& spec);

/// Largest minus smallest padded segment size.
std::uint64_t imbalance_delta(const SegmentAssignment& assignment);

}  // namespace segpipe
