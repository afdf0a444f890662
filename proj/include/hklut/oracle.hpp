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
#include <random>
#include <span>
#include <vector>

#include "hklut/image.hpp"
#include "hklut/model.hpp"

namespace hklut::oracle {

// Naive nested-loop twin of model_forward. Shares no code with the engine
// apart from the classical bilinear/bicubic residual upsamplers.
ImagePlane reference_forward(const ImagePlane& img, const ModelSpec& model);

// Maps an n-tuple to an r*r block (row-major).
using LutFunction = std::function<std::vector<int>(std::span<const int>)>;

// Enumerates all v^n tuples, first element most significant.
LutTable build_lut_from_function(const LutFunction& f, int levels, int inputs, int scale);

// Fixture functions for analytic tables.
LutFunction constant_function(int value, int scale);
// clamp(t[0] - t[1], -127, 127) in every cell; 0 for single-input kernels.
LutFunction difference_function(int scale);

ImagePlane random_plane(int height, int width, std::mt19937_64& rng);
LutTable random_table(int levels, int inputs, int scale, std::mt19937_64& rng);
ModelSpec random_model(const ModelShape& shape, std::mt19937_64& rng);

}  // namespace hklut::oracle
