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

#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "segpipe/memmodel.hpp"
#include "segpipe/pipesim.hpp"

namespace segpipe {

struct Settings {
  DeviceSpec device;
  CostModel cost;
};

/// Known keys: device_capacity_bytes, systolic_dim, peak_tops, reserved_bytes,
/// eff_tops, host_read_penalty_s_per_byte, transfer_s_per_byte,
/// fixed_overhead_s. Throws Error(kInvalidArgument) for anything else.
void apply_setting(Settings& settings, std::string_view key, std::string_view value);

/// `key = value` lines; '#' starts a comment; [section] headers are accepted
/// and ignored.
double get_setting(const Settings& settings, std::string_view key);

void apply_config_text(Settings& settings, std::string_view text);

void apply_config_file(Settings& settings, const std::filesystem::path& path);

std::vector<std::string_view> setting_keys();

}  // namespace segpipe
