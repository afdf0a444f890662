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
#include <span>
#include <vector>

namespace hklut {

// Single 8-bit channel, row-major.
class ImagePlane {
 public:
  ImagePlane() = default;
  ImagePlane(int height, int width, std::uint8_t fill = 0);
  ImagePlane(int height, int width, std::vector<std::uint8_t> pixels);

  int height() const { return height_; }
  int width() const { return width_; }
  bool empty() const { return pixels_.empty(); }
  std::size_t size() const { return pixels_.size(); }

  std::uint8_t at(int y, int x) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  std::uint8_t& at(int y, int x) { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  // Clamp-to-edge read.
  std::uint8_t clamped(int y, int x) const;

  std::span<const std::uint8_t> pixels() const { return pixels_; }
  std::span<std::uint8_t> pixels() { return pixels_; }
  std::span<const std::uint8_t> row(int y) const {
    return std::span(pixels_).subspan(static_cast<std::size_t>(y) * width_, width_);
  }
  std::span<std::uint8_t> row(int y) {
    return std::span(pixels_).subspan(static_cast<std::size_t>(y) * width_, width_);
  }

  friend bool operator==(const ImagePlane&, const ImagePlane&) = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<std::uint8_t> pixels_;
};

// 90-degree clockwise turns of a whole plane.
ImagePlane rotate90(const ImagePlane& plane, int quarter_turns = 1);

ImagePlane crop(const ImagePlane& plane, int top, int left, int height, int width);

// Interleaved 8-bit image with 1 (gray) or 3 (RGB) channels.
struct Image {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<std::uint8_t> data;

  Image() = default;
  Image(int h, int w, int c, std::uint8_t fill = 0);

  std::uint8_t at(int y, int x, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::uint8_t& at(int y, int x, int c) {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }

  friend bool operator==(const Image&, const Image&) = default;
};

std::vector<ImagePlane> split_channels(const Image& image);
Image merge_channels(std::span<const ImagePlane> planes);

}  // namespace hklut
