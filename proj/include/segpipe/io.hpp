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

// JSON, JSON-lines and CSV encodings of the toolkit's artifacts. Parsers are
// strict: unknown or mistyped fields raise Error(kSchema) naming the field.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "segpipe/pipesim.hpp"
#include "segpipe/refine.hpp"

namespace segpipe {

ModelGraph graph_from_json(std::string_view text);
std::string graph_to_json(const ModelGraph& graph);

/// Partition file: {"strategy", "splits", "s", "d"}. "d" is optional on input.
struct PartitionFile {
  Partition partition;
  std::optional<int> d;
};
PartitionFile partition_from_json(std::string_view text);
std::string partition_to_json(const Partition& partition, int d);

std::string memory_report_to_json(const MemoryReport& report);
MemoryReport memory_report_from_json(std::string_view text);

struct AssignmentFile {
  SegmentAssignment assignment;
  std::optional<RefineStatus> refine_status;
};
std::string assignment_to_json(const SegmentAssignment& assignment,
                               std::optional<RefineStatus> refine_status = std::nullopt);
AssignmentFile assignment_from_json(std::string_view text);

std::string sim_result_to_json(const SimResult& result);
SimResult sim_result_from_json(std::string_view text);

/// One JSON object per move, newline-terminated.
std::string trace_to_jsonl(const std::vector<RefineMove>& trace);
std::vector<RefineMove> trace_from_jsonl(std::string_view text);

/// model,strategy,s,delta_s_bytes,host_bytes,makespan_s,throughput_ips,
/// speedup,max_stage_s,stage_deviation_s
std::string rows_to_csv(const std::vector<StrategyRow>& rows);

enum class ArtifactKind { kGraph, kPartition, kAssignment, kSimResult, kTrace };

/// Identifies an emitted artifact by its fields and re-serializes it.
std::string canonicalize(std::string_view text, ArtifactKind* kind = nullptr);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace segpipe
