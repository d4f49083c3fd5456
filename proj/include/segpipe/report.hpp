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

// Human-readable tables and the SVG chart of slowest-stage times.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "segpipe/pipesim.hpp"

namespace segpipe {

std::string segment_table(const SegmentAssignment& assignment,
                          std::optional<RefineStatus> refine_status);

std::string comparison_table(const std::vector<Comparison>& comparisons);

/// Grouped bars per model: slowest stage per strategy, with the gap to the
/// mean stage time drawn as a darker cap.
std::string comparison_svg(const std::vector<Comparison>& comparisons);

}  // namespace segpipe
