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

// Independent reference implementations used to check the library. None of
// these share code with src/; they are deliberately the slow, obvious way.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "segpipe/graph.hpp"

namespace segpipe::oracle {

// Longest path (in edges) from any source to each node, by walking every
// path explicitly.
inline std::map<NodeId, int> longest_paths(const ModelGraph& g) {
  std::map<NodeId, std::vector<NodeId>> succ;
  std::map<NodeId, int> indeg;
  for (const auto& n : g.nodes) indeg[n.id] = 0;
  for (const auto& e : g.edges) {
    succ[e.src].push_back(e.dst);
    ++indeg[e.dst];
  }
  std::map<NodeId, int> best;
  for (const auto& n : g.nodes) best[n.id] = 0;
  std::function<void(NodeId, int)> walk = [&](NodeId u, int len) {
    best[u] = std::max(best[u], len);
    for (NodeId v : succ[u]) walk(v, len + 1);
  };
  for (const auto& [id, deg] : indeg) {
    if (deg == 0) walk(id, 0);
  }
  return best;
}

// Min over all contiguous s-way partitions of the max segment sum, by
// enumerating every choice of s-1 cut gaps.
inline std::uint64_t brute_minmax(const std::vector<std::uint64_t>& P, int s) {
  const int n = static_cast<int>(P.size());
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  std::vector<int> cuts(static_cast<std::size_t>(s - 1));
  std::function<void(int, int)> rec = [&](int idx, int from) {
    if (idx == s - 1) {
      std::uint64_t worst = 0, acc = 0;
      std::size_t c = 0;
      for (int i = 0; i < n; ++i) {
        acc += P[static_cast<std::size_t>(i)];
        if (c < cuts.size() && cuts[c] == i) {
          worst = std::max(worst, acc);
          acc = 0;
          ++c;
        }
      }
      best = std::min(best, std::max(worst, acc));
      return;
    }
    for (int g = from; g <= n - 2 - (s - 2 - idx); ++g) {
      cuts[static_cast<std::size_t>(idx)] = g;
      rec(idx + 1, g + 1);
    }
  };
  rec(0, 0);
  return best;
}

// Same quantity by dynamic programming over prefix sums.
inline std::uint64_t dp_minmax(const std::vector<std::uint64_t>& P, int s) {
  const std::size_t n = P.size();
  constexpr auto kInf = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> prefix(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + P[i];
  // f[k][i]: best max over the first i entries in k nonempty segments.
  std::vector<std::vector<std::uint64_t>> f(static_cast<std::size_t>(s) + 1,
                                            std::vector<std::uint64_t>(n + 1, kInf));
  f[0][0] = 0;
  for (std::size_t k = 1; k <= static_cast<std::size_t>(s); ++k) {
    for (std::size_t i = k; i <= n; ++i) {
      for (std::size_t j = k - 1; j < i; ++j) {
        if (f[k - 1][j] == kInf) continue;
        f[k][i] = std::min(f[k][i], std::max(f[k - 1][j], prefix[i] - prefix[j]));
      }
    }
  }
  return f[static_cast<std::size_t>(s)][n];
}

// Discrete-event flow shop: item i leaves stage k at
// C[i][k] = max(C[i-1][k], C[i][k-1]) + t_k, one item per stage at a time,
// unbounded buffers between stages.
inline double event_stepper(const std::vector<double>& t, int batch) {
  std::vector<double> done(t.size(), 0.0);
  double finish = 0.0;
  for (int i = 0; i < batch; ++i) {
    double ready = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
      const double start = std::max(ready, done[k]);
      done[k] = start + t[k];
      ready = done[k];
    }
    finish = ready;
  }
  return finish;
}

// Every topological order of g (small graphs only).
inline std::vector<std::vector<NodeId>> all_topological_orders(const ModelGraph& g) {
  std::map<NodeId, int> indeg;
  for (const auto& n : g.nodes) indeg[n.id] = 0;
  for (const auto& e : g.edges) ++indeg[e.dst];
  std::vector<std::vector<NodeId>> out;
  std::vector<NodeId> cur;
  std::function<void()> rec = [&] {
    if (cur.size() == g.nodes.size()) {
      out.push_back(cur);
      return;
    }
    for (auto& [id, deg] : indeg) {
      if (deg != 0) continue;
      deg = -1;
      for (const auto& e : g.edges) if (e.src == id) --indeg[e.dst];
      cur.push_back(id);
      rec();
      cur.pop_back();
      for (const auto& e : g.edges) if (e.src == id) ++indeg[e.dst];
      deg = 0;
    }
  };
  rec();
  return out;
}

}  // namespace segpipe::oracle
