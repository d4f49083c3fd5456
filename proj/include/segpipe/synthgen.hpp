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

#include <cstdint>
#include <vector>

#include "segpipe/graph.hpp"

namespace segpipe {

/// Parametric chain of L same-padded convolutions with f filters each.
struct SynthSpec {
  std::uint64_t L = 5;
  std::uint64_t C = 3;
  std::uint64_t W = 64;
  std::uint64_t H = 64;
  std::uint64_t Fw = 3;
  std::uint64_t Fh = 3;
  std::uint64_t f = 32;
  std::uint64_t dtype_bytes = 1;  // scales activations; weights stay 1 byte
};

/// Throws Error(kInvalidArgument) unless every field is >= 1.
void check(const SynthSpec& spec);

/// Kernel weights only: Fw*Fh*f*(C + f*(L-1)).
std::uint64_t param_count(const SynthSpec& spec);

ModelGraph generate(const SynthSpec& spec);

/// One graph per f in [f_min, f_max] stepping by f_step.
std::vector<ModelGraph> sweep(std::uint64_t f_min, std::uint64_t f_max, std::uint64_t f_step,
                              const SynthSpec& base);

}  // namespace segpipe
