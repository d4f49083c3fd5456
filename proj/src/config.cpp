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

#include "segpipe/config.hpp"

#include <charconv>
#include <cstdlib>
#include <string>

#include "segpipe/error.hpp"
#include "segpipe/io.hpp"

namespace segpipe {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t to_uint(std::string_view key, std::string_view value) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw invalid_argument(std::string(key) + " expects a non-negative integer, got '" +
                           std::string(value) + "'");
  }
  return out;
}

double to_double(std::string_view key, std::string_view value) {
  // from_chars for double is missing on older libstdc++.
  const std::string text(value);
  char* end = nullptr;
  const double out = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw invalid_argument(std::string(key) + " expects a number, got '" + text + "'");
  }
  return out;
}

}  // namespace

std::vector<std::string_view> setting_keys() {
  return {"device_capacity_bytes", "systolic_dim",        "peak_tops",
          "reserved_bytes",        "eff_tops",            "host_read_penalty_s_per_byte",
          "transfer_s_per_byte",   "fixed_overhead_s"};
}

void apply_setting(Settings& settings, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "device_capacity_bytes") {
    settings.device.device_capacity_bytes = to_uint(key, value);
  } else if (key == "systolic_dim") {
    settings.device.systolic_dim = to_uint(key, value);
  } else if (key == "peak_tops") {
    settings.device.peak_tops = to_double(key, value);
  } else if (key == "reserved_bytes") {
    settings.device.reserved_bytes = to_uint(key, value);
  } else if (key == "eff_tops") {
    settings.cost.eff_tops = to_double(key, value);
  } else if (key == "host_read_penalty_s_per_byte") {
    settings.cost.host_read_penalty_s_per_byte = to_double(key, value);
  } else if (key == "transfer_s_per_byte") {
    settings.cost.transfer_s_per_byte = to_double(key, value);
  } else if (key == "fixed_overhead_s") {
    settings.cost.fixed_overhead_s = to_double(key, value);
  } else {
    throw invalid_argument("unknown setting '" + std::string(key) + "'");
  }
}

double get_setting(const Settings& settings, std::string_view key) {
  key = trim(key);
  if (key == "device_capacity_bytes") return static_cast<double>(settings.device.device_capacity_bytes);
  if (key == "systolic_dim") return static_cast<double>(settings.device.systolic_dim);
  if (key == "peak_tops") return settings.device.peak_tops;
  if (key == "reserved_bytes") return static_cast<double>(settings.device.reserved_bytes);
  if (key == "eff_tops") return settings.cost.eff_tops;
  if (key == "host_read_penalty_s_per_byte") return settings.cost.host_read_penalty_s_per_byte;
  if (key == "transfer_s_per_byte") return settings.cost.transfer_s_per_byte;
  if (key == "fixed_overhead_s") return settings.cost.fixed_overhead_s;
  throw invalid_argument("unknown setting '" + std::string(key) + "'");
}

void apply_config_text(Settings& settings, std::string_view text) {
  int lineno = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty() || (line.front() == '[' && line.back() == ']')) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw invalid_argument("config line " + std::to_string(lineno) + " is not key = value");
    }
    apply_setting(settings, line.substr(0, eq), line.substr(eq + 1));
  }
}

void apply_config_file(Settings& settings, const std::filesystem::path& path) {
  apply_config_text(settings, read_text_file(path));
}

}  // namespace segpipe
