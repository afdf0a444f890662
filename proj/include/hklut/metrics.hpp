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
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "hklut/image.hpp"
#include "hklut/inference.hpp"
#include "hklut/model.hpp"

namespace hklut {

inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

// 10 log10(255^2 / MSE) after cropping `shave` pixels from every border.
double psnr(const ImagePlane& a, const ImagePlane& b, int shave = 0);

// Single-scale SSIM: 11x11 Gaussian (sigma 1.5), K1 = 0.01, K2 = 0.03,
// averaged over valid window positions. Planes smaller than the window use
// a window shrunk to the largest odd size that fits.
double ssim(const ImagePlane& a, const ImagePlane& b, int shave = 0);

// BT.601 studio-swing luma.
ImagePlane to_luma(const Image& rgb);

struct YCbCrPlanes {
  ImagePlane y;
  ImagePlane cb;
  ImagePlane cr;
};
YCbCrPlanes rgb_to_ycbcr(const Image& rgb);
Image ycbcr_to_rgb(const YCbCrPlanes& planes);

// Per-operation energy in picojoules. Table lookups are costed as one
// 8-bit add unless overridden.
struct EnergyCosts {
  double int8_add = 0.03;
  double int32_add = 0.1;
  double int8_mult = 0.2;
  double int32_mult = 3.1;
  double float_add = 0.9;
  double float_mult = 3.7;
  double lookup = 0.03;

  // "key = value" lines; an optional [energy] header and '#' comments are
  // accepted. Unknown keys are an error.
  static EnergyCosts parse(std::string_view text);
  static EnergyCosts load(const std::filesystem::path& path);
};

struct OpCounts {
  std::uint64_t lookups = 0;
  std::uint64_t int8_adds = 0;
  std::uint64_t int32_adds = 0;
  std::uint64_t int8_mults = 0;
  std::uint64_t int32_mults = 0;
  std::uint64_t float_adds = 0;
  std::uint64_t float_mults = 0;

  std::uint64_t float_ops() const { return float_adds + float_mults; }
  double energy_pj(const EnergyCosts& costs = {}) const;

  OpCounts& operator+=(const OpCounts& o);
  friend bool operator==(const OpCounts&, const OpCounts&) = default;
};

// Operation counts for producing one out_height x out_width plane.
// Per stage with input H x W, upscale r and a branch of N kernels:
//   lookups           H*W*N*M
//   index arithmetic  (n-1) int32 adds per lookup
//   accumulation      (N*M - 1) * r^2 int32 adds per pixel
//   rounding          2 int32 adds + 1 int32 mult per output cell
// plus nibble split (2 int8 ops per input pixel), residual add and clamp
// (4 int32 adds per output cell), and the fixed-point residual upsampler.
OpCounts estimate_ops(const ModelSpec& model, int out_height, int out_width);

// Single-stage S-kernel table with 4-simplex interpolation between v-level
// samples, the comparison point for interpolation-based LUT methods.
struct InterpolatedLutConfig {
  int levels = 17;
  int inputs = 4;
  int scale = 4;
  int rotations = 4;
};
OpCounts estimate_interpolated_lut_ops(const InterpolatedLutConfig& config, int out_height, int out_width);

struct BenchStats {
  std::vector<double> samples_ms;
  double mean_ms = 0.0;
  double stddev_ms = 0.0;
};

// Times model_forward on a seeded random plane; one warm-up run discarded.
BenchStats bench_runtime(const ModelSpec& model, int height, int width, int repeats,
                         const ForwardOptions& opts = {});

struct ImageScore {
  std::string dataset;
  std::string image;
  double psnr = 0.0;
  double ssim = 0.0;
  bool generated_lr = false;
};

struct DatasetSummary {
  std::string dataset;
  double mean_psnr = 0.0;
  double mean_ssim = 0.0;
  std::size_t images = 0;
};

struct EvalReport {
  std::string method;
  int scale = 4;
  std::vector<ImageScore> images;
  std::size_t model_bytes = 0;
  OpCounts ops;
  double energy_pj = 0.0;
  double wall_ms = 0.0;

  std::vector<DatasetSummary> summaries() const;
  // Line-oriented human summary.
  void write_text(std::ostream& os) const;
  // One "dataset image metric value" line per metric; dataset means use the
  // image name "mean", model-wide values use "-" "-".
  void write_key_values(std::ostream& os) const;
};

}  // namespace hklut
