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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hklut/image.hpp"
#include "hklut/model.hpp"

namespace hklut {

// Decodes to 8 bits: 16-bit samples keep their high byte, palettes expand to
// RGB, alpha is dropped. Gray sources give one channel, the rest three.
Image read_png(const std::filesystem::path& path);
void write_png(const Image& image, const std::filesystem::path& path);

struct DatasetRecord {
  std::string name;  // HR file stem
  std::filesystem::path hr;
  std::filesystem::path lr;  // empty when the LR must be generated
  int scale = 4;
  bool generated_lr = false;
};

struct DatasetIndex {
  std::string name;
  std::vector<DatasetRecord> records;
};

struct IndexOptions {
  // Missing LR partners become records flagged generated_lr instead of errors.
  bool allow_generated_lr = false;
};

// Pairs <dir>/HR/*.png with <dir>/LR_bicubic/X<scale>/ files named either
// "<stem>.png" or "<stem>x<scale>.png", in lexicographic order.
DatasetIndex index_dataset(const std::filesystem::path& dataset_dir, int scale, const IndexOptions& opts = {});

// Antialiased bicubic downscale (Keys a = -0.5 kernel stretched by the
// scale, clamp-to-edge). Output is ceil(dims / scale). Not bit-identical to
// any official benchmark LR set.
ImagePlane make_lr(const ImagePlane& hr, int scale);
Image make_lr(const Image& hr, int scale);

// Weights of one output sample of make_lr, source index -> weight, before
// edge clamping. Exposed for tests.
std::vector<std::pair<int, double>> downscale_weights(int output_index, int scale);

struct EvalPair {
  Image hr;
  Image lr;
};

// Loads a record, generating the LR if needed and cropping HR so that
// HR dims == LR dims * scale.
EvalPair load_pair(const DatasetRecord& record);

}  // namespace hklut
