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

#include <vector>

#include "hklut/image.hpp"
#include "hklut/model.hpp"

namespace hklut {

using Interpolation = ResidualMode;

// Integer upscaling by r with half-pixel centers and clamp-to-edge borders.
// Bilinear and bicubic (Keys, a = -0.5) use 14-bit fixed-point weights and
// a single round-half-away-from-zero at the end, so results are exact and
// commute with 90-degree rotations and mirroring.
ImagePlane classical_upscale(const ImagePlane& img, int r, Interpolation method);
Image classical_upscale(const Image& img, int r, Interpolation method);

// Keys cubic convolution kernel.
double keys_cubic(double x, double a = -0.5);

struct ResampleTap {
  int offset = 0;  // relative to the source pixel containing the output center
  int weight = 0;  // fixed point, sums to 1 << kResampleWeightBits per phase
};

inline constexpr int kResampleWeightBits = 14;

// Taps for each of the r output phases along one axis.
std::vector<std::vector<ResampleTap>> resample_phases(int r, Interpolation method);

}  // namespace hklut
