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

#include "segpipe/report.hpp"

#include <algorithm>
#include <cstdio>
#include <string>

namespace segpipe {

namespace {

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string mib(std::uint64_t bytes) {
  return fmt("%.3f", static_cast<double>(bytes) / static_cast<double>(kMiB));
}

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string segment_table(const SegmentAssignment& assignment,
                          std::optional<RefineStatus> refine_status) {
  std::string out = "model " + assignment.model + "  strategy " +
                    std::string(to_string(assignment.partition.strategy)) + "  s=" +
                    std::to_string(assignment.partition.s) + "  splits=[";
  for (std::size_t i = 0; i < assignment.partition.splits.size(); ++i) {
    out += (i ? "," : "") + std::to_string(assignment.partition.splits[i]);
  }
  out += "]";
  if (refine_status) out += "  refine=" + std::string(to_string(*refine_status));
  out += "\n";
  out += " seg  depths     layers  raw_MiB  padded_MiB  device_MiB  host_MiB\n";
  for (std::size_t i = 0; i < assignment.segments.size(); ++i) {
    const auto& seg = assignment.segments[i];
    const std::string depths = std::to_string(seg.first_depth) + "-" + std::to_string(seg.last_depth);
    out += pad_left(std::to_string(i), 4) + "  " + pad_right(depths, 9) +
           pad_left(std::to_string(seg.node_ids.size()), 7) + pad_left(mib(seg.raw_param_bytes), 9) +
           pad_left(mib(seg.padded_bytes), 12) + pad_left(mib(seg.memory.device_bytes), 12) +
           pad_left(mib(seg.memory.host_bytes), 10) + "\n";
  }
  out += "delta_s " + mib(imbalance_delta(assignment)) + " MiB, host total " +
         mib(assignment.host_bytes()) + " MiB\n";
  return out;
}

std::string comparison_table(const std::vector<Comparison>& comparisons) {
  std::string out =
      "model                    strategy       s  delta_s_MiB  host_MiB  makespan_ms  speedup  "
      "max_stage_ms  deviation_ms  status\n";
  for (const auto& cmp : comparisons) {
    for (const auto& r : cmp.rows) {
      out += pad_right(r.model, 24) + " " + pad_right(r.strategy, 13) +
             pad_left(std::to_string(r.s), 3) + pad_left(mib(r.delta_s_bytes), 13) +
             pad_left(mib(r.host_bytes), 10) + pad_left(fmt("%.3f", r.sim.makespan_s * 1e3), 13) +
             pad_left(r.sim.speedup_vs_single ? fmt("%.2f", *r.sim.speedup_vs_single) : "-", 9) +
             pad_left(fmt("%.3f", r.sim.max_stage_s * 1e3), 14) +
             pad_left(fmt("%.3f", r.sim.stage_deviation_s * 1e3), 14) + "  " + r.status + "\n";
    }
  }
  return out;
}

std::string comparison_svg(const std::vector<Comparison>& comparisons) {
  const char* colors[] = {"#9e9e9e", "#e57373", "#64b5f6", "#81c784", "#ffb74d"};
  std::vector<std::string> strategies;
  double peak = 0.0;
  for (const auto& cmp : comparisons) {
    for (const auto& r : cmp.rows) {
      if (std::find(strategies.begin(), strategies.end(), r.strategy) == strategies.end()) {
        strategies.push_back(r.strategy);
      }
      peak = std::max(peak, r.sim.max_stage_s);
    }
  }
  if (peak <= 0.0) peak = 1.0;

  const double bar = 18.0, gap = 24.0, left = 60.0, top = 30.0, plot_h = 240.0;
  const double group_w = bar * static_cast<double>(std::max<std::size_t>(strategies.size(), 1)) + gap;
  const double width = left + group_w * static_cast<double>(comparisons.size()) + 160.0;
  const double height = top + plot_h + 90.0;

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.0f", width) +
                    "\" height=\"" + fmt("%.0f", height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<text x=\"" + fmt("%.0f", left) + "\" y=\"18\">slowest stage (ms); dark cap = gap to mean stage</text>\n";
  svg += "<line x1=\"" + fmt("%.1f", left) + "\" y1=\"" + fmt("%.1f", top + plot_h) + "\" x2=\"" +
         fmt("%.1f", width - 150.0) + "\" y2=\"" + fmt("%.1f", top + plot_h) + "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = peak * t / 4.0;
    const double y = top + plot_h - plot_h * t / 4.0;
    svg += "<text x=\"" + fmt("%.1f", left - 6.0) + "\" y=\"" + fmt("%.1f", y + 4.0) +
           "\" text-anchor=\"end\">" + fmt("%.2f", v * 1e3) + "</text>\n";
  }
  for (std::size_t g = 0; g < comparisons.size(); ++g) {
    const double gx = left + gap / 2.0 + group_w * static_cast<double>(g);
    for (const auto& r : comparisons[g].rows) {
      const auto idx = static_cast<std::size_t>(
          std::find(strategies.begin(), strategies.end(), r.strategy) - strategies.begin());
      const double x = gx + bar * static_cast<double>(idx);
      const double h = plot_h * r.sim.max_stage_s / peak;
      const double cap = plot_h * r.sim.stage_deviation_s / peak;
      svg += "<rect x=\"" + fmt("%.1f", x) + "\" y=\"" + fmt("%.1f", top + plot_h - h) +
             "\" width=\"" + fmt("%.1f", bar - 2.0) + "\" height=\"" + fmt("%.1f", h) +
             "\" fill=\"" + colors[idx % 5] + "\"><title>" + escape_xml(r.model + " " + r.strategy) +
             "</title></rect>\n";
      svg += "<rect x=\"" + fmt("%.1f", x) + "\" y=\"" + fmt("%.1f", top + plot_h - h) +
             "\" width=\"" + fmt("%.1f", bar - 2.0) + "\" height=\"" + fmt("%.1f", cap) +
             "\" fill=\"black\" fill-opacity=\"0.35\"/>\n";
    }
    svg += "<text transform=\"translate(" + fmt("%.1f", gx) + "," + fmt("%.1f", top + plot_h + 12.0) +
           ") rotate(30)\">" + escape_xml(comparisons[g].model) + "</text>\n";
  }
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    const double y = top + 14.0 * static_cast<double>(i);
    svg += "<rect x=\"" + fmt("%.1f", width - 140.0) + "\" y=\"" + fmt("%.1f", y) +
           "\" width=\"10\" height=\"10\" fill=\"" + colors[i % 5] + "\"/>\n";
    svg += "<text x=\"" + fmt("%.1f", width - 125.0) + "\" y=\"" + fmt("%.1f", y + 9.0) + "\">" +
           escape_xml(strategies[i]) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace segpipe
