// Copyright 2026 The HKLUT Authors
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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hklut/image.hpp"
#include "hklut/inference.hpp"
#include "hklut/model.hpp"

namespace hklut {

using ForwardFn = std::function<ImagePlane(const ImagePlane&, const ModelSpec&)>;

// First differing pixel between two planes, or nullopt when equal.
struct Mismatch {
  int y = 0;
  int x = 0;
  int expected = 0;
  int actual = 0;
  std::string describe() const;
};
std::optional<Mismatch> first_mismatch(const ImagePlane& expected, const ImagePlane& actual);

struct SuiteResult {
  std::string suite;
  int cases = 0;
  int failed = 0;
  // Smallest failing case, rendered for humans.
  std::string first_failure;

  bool ok() const { return failed == 0; }
  void record(bool pass, const std::string& detail);
};

// Image sizes covering degenerate, non-square and larger planes; ordered so
// failures are reported on the smallest input first.
std::vector<std::pair<int, int>> verification_sizes(int count, std::uint64_t seed);

SuiteResult check_oracle_equivalence(const ModelSpec& model, int cases, std::uint64_t seed,
                                     const ForwardFn& engine);
SuiteResult check_rotation_equivariance(const ModelSpec& model, int cases, std::uint64_t seed,
                                        const ForwardFn& engine);
// Replaces every table with zeros and compares with the composed nearest
// upsampler.
SuiteResult check_zero_neutrality(const ModelSpec& model, int cases, std::uint64_t seed, const ForwardFn& engine);

// The optimized engine with the given options.
ForwardFn engine_forward(ForwardOptions opts = {});

ModelSpec zeroed(const ModelSpec& model);

// Shapes drawn by randomized verification.
std::vector<ModelShape> verification_shapes();

std::string describe_plane(const ImagePlane& plane, int max_side = 8);

}  // namespace hklut
