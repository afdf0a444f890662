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

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hklut/image.hpp"
#include "hklut/model.hpp"

namespace hklut {

// Per-pixel r x r accumulator blocks, laid out as an (r*height) x (r*width)
// row-major map.
struct SignedMap {
  int height = 0;  // input rows
  int width = 0;   // input columns
  int scale = 1;
  std::vector<std::int32_t> values;

  SignedMap() = default;
  SignedMap(int h, int w, int r)
      : height(h), width(w), scale(r), values(static_cast<std::size_t>(h) * r * w * r, 0) {}

  int out_height() const { return height * scale; }
  int out_width() const { return width * scale; }
  std::int32_t at(int oy, int ox) const { return values[static_cast<std::size_t>(oy) * out_width() + ox]; }

  friend bool operator==(const SignedMap&, const SignedMap&) = default;
};

struct BranchSum {
  SignedMap sum;
  int divisor = 1;
};

struct ForwardOptions {
  // Worker threads for row tiling; 0 selects hardware concurrency. Output
  // does not depend on this value.
  unsigned threads = 1;
};

std::pair<ImagePlane, ImagePlane> split_nibbles(const ImagePlane& img);

// Neighbor values at (y, x) + offset, clamped to the image border.
std::vector<int> gather_tuple(const ImagePlane& plane, const KernelPattern& pattern, int y, int x);

// Base-v positional index, first element most significant.
std::size_t lut_index(std::span<const int> tuple, int levels);

// Round half away from zero of s / d, d > 0.
constexpr std::int32_t div_round(std::int32_t s, std::int32_t d) {
  return s >= 0 ? (2 * s + d) / (2 * d) : -((-2 * s + d) / (2 * d));
}

// Raw rotation-ensemble sum for one kernel (no division).
SignedMap kernel_forward(const ImagePlane& plane, const KernelPattern& pattern, const LutTable& table,
                         const ForwardOptions& opts = {});

BranchSum branch_forward(const ImagePlane& plane, const BranchSpec& branch, const ForwardOptions& opts = {});

ImagePlane upsample(const ImagePlane& img, int r, ResidualMode mode);

ImagePlane stage_forward(const ImagePlane& img, const StageSpec& stage, const ForwardOptions& opts = {});

ImagePlane model_forward(const ImagePlane& img, const ModelSpec& model, const ForwardOptions& opts = {});

// Runs the model on every channel of the image independently.
Image model_forward(const Image& img, const ModelSpec& model, const ForwardOptions& opts = {});

}  // namespace hklut
