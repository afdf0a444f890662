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

#include "hklut/oracle.hpp"

#include <cmath>

#include "hklut/resample.hpp"

namespace hklut::oracle {

namespace {

int clamp_coord(int v, int hi) {
  if (v < 0) return 0;
  if (v > hi) return hi;
  return v;
}

int branch_correction(const ImagePlane& img, const BranchSpec& branch, bool high_nibble, int y, int x, int cy,
                      int cx) {
  const int r = branch.scale();
  long sum = 0;
  int terms = 0;
  for (const auto& kernel : branch.kernels()) {
    const auto& table = kernel.table;
    for (int j = 0; j < kernel.pattern.rotations(); ++j) {
      long index = 0;
      for (Offset o : kernel.pattern.offsets()) {
        int dy = o.dy;
        int dx = o.dx;
        for (int t = 0; t < j; ++t) {
          const int ny = dx;
          const int nx = -dy;
          dy = ny;
          dx = nx;
        }
        const int pixel = img.at(clamp_coord(y + dy, img.height() - 1), clamp_coord(x + dx, img.width() - 1));
        const int nibble = high_nibble ? pixel / 16 : pixel % 16;
        index = index * table.levels() + nibble;
      }
      // The block is turned clockwise j times; undo that on the cell
      // coordinate with j counterclockwise steps (y, x) -> (r-1-x, y).
      int sy = cy;
      int sx = cx;
      for (int t = 0; t < j; ++t) {
        const int ny = r - 1 - sx;
        const int nx = sy;
        sy = ny;
        sx = nx;
      }
      sum += table.entries()[static_cast<std::size_t>(index) * r * r + sy * r + sx];
      ++terms;
    }
  }
  return static_cast<int>(std::lround(static_cast<double>(sum) / terms));
}

ImagePlane nearest(const ImagePlane& img, int r) {
  ImagePlane out(img.height() * r, img.width() * r);
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) out.at(y, x) = img.at(y / r, x / r);
  }
  return out;
}

ImagePlane reference_stage(const ImagePlane& img, const StageSpec& stage) {
  const int r = stage.upscale();
  ImagePlane out = stage.residual() == ResidualMode::kNearest ? nearest(img, r)
                                                              : classical_upscale(img, r, stage.residual());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int cy = 0; cy < r; ++cy) {
        for (int cx = 0; cx < r; ++cx) {
          int v = out.at(y * r + cy, x * r + cx);
          v += branch_correction(img, stage.msb(), true, y, x, cy, cx);
          v += branch_correction(img, stage.lsb(), false, y, x, cy, cx);
          out.at(y * r + cy, x * r + cx) = static_cast<std::uint8_t>(v < 0 ? 0 : (v > 255 ? 255 : v));
        }
      }
    }
  }
  return out;
}

}  // namespace

ImagePlane reference_forward(const ImagePlane& img, const ModelSpec& model) {
  ImagePlane cur = img;
  for (const auto& stage : model.stages) cur = reference_stage(cur, stage);
  return cur;
}

LutTable build_lut_from_function(const LutFunction& f, int levels, int inputs, int scale) {
  const std::size_t count = entry_count(levels, inputs);
  const std::size_t block = static_cast<std::size_t>(scale) * scale;
  std::vector<std::int8_t> entries;
  entries.reserve(count * block);
  std::vector<int> tuple(inputs, 0);
  for (std::size_t e = 0; e < count; ++e) {
    const auto values = f(tuple);
    if (values.size() != block) {
      throw Error("table function returned " + std::to_string(values.size()) + " values, expected " +
                  std::to_string(block));
    }
    for (int v : values) {
      if (v < LutTable::kMinEntry || v > LutTable::kMaxEntry) {
        throw Error("table function value " + std::to_string(v) + " outside [-127, 127]");
      }
      entries.push_back(static_cast<std::int8_t>(v));
    }
    // Odometer, last element fastest.
    for (int i = inputs - 1; i >= 0; --i) {
      if (++tuple[i] < levels) break;
      tuple[i] = 0;
    }
  }
  return LutTable(levels, inputs, scale, std::move(entries));
}

LutFunction constant_function(int value, int scale) {
  return [value, scale](std::span<const int>) { return std::vector<int>(static_cast<std::size_t>(scale) * scale, value); };
}

LutFunction difference_function(int scale) {
  return [scale](std::span<const int> t) {
    int d = t.size() >= 2 ? t[0] - t[1] : 0;
    d = d < -127 ? -127 : (d > 127 ? 127 : d);
    return std::vector<int>(static_cast<std::size_t>(scale) * scale, d);
  };
}

ImagePlane random_plane(int height, int width, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dist(0, 255);
  ImagePlane p(height, width);
  for (auto& v : p.pixels()) v = static_cast<std::uint8_t>(dist(rng));
  return p;
}

LutTable random_table(int levels, int inputs, int scale, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dist(LutTable::kMinEntry, LutTable::kMaxEntry);
  std::vector<std::int8_t> entries(entry_count(levels, inputs) * static_cast<std::size_t>(scale) * scale);
  for (auto& e : entries) e = static_cast<std::int8_t>(dist(rng));
  return LutTable(levels, inputs, scale, std::move(entries));
}

ModelSpec random_model(const ModelShape& shape, std::mt19937_64& rng) {
  return build_model(shape, [&rng](const TableSlot& slot) {
    return random_table(slot.levels, slot.pattern->size(), slot.scale, rng);
  });
}

}  // namespace hklut::oracle
