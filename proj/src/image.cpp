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

#include "hklut/image.hpp"

#include <algorithm>

#include "hklut/model.hpp"

namespace hklut {

ImagePlane::ImagePlane(int height, int width, std::uint8_t fill)
    : ImagePlane(height, width,
                 std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(height, 0)) *
                                               static_cast<std::size_t>(std::max(width, 0)),
                                           fill)) {}

ImagePlane::ImagePlane(int height, int width, std::vector<std::uint8_t> pixels)
    : height_(height), width_(width), pixels_(std::move(pixels)) {
  if (height_ < 1 || width_ < 1) throw Error("image plane dimensions must be positive");
  if (pixels_.size() != static_cast<std::size_t>(height_) * width_) {
    throw Error("image plane pixel count does not match its dimensions");
  }
}

std::uint8_t ImagePlane::clamped(int y, int x) const {
  return at(std::clamp(y, 0, height_ - 1), std::clamp(x, 0, width_ - 1));
}

ImagePlane rotate90(const ImagePlane& plane, int quarter_turns) {
  quarter_turns = ((quarter_turns % 4) + 4) % 4;
  ImagePlane cur = plane;
  for (int t = 0; t < quarter_turns; ++t) {
    const int h = cur.height();
    const int w = cur.width();
    ImagePlane next(w, h);
    // Clockwise: source (y, x) lands at (x, h - 1 - y).
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) next.at(x, h - 1 - y) = cur.at(y, x);
    }
    cur = std::move(next);
  }
  return cur;
}

ImagePlane crop(const ImagePlane& plane, int top, int left, int height, int width) {
  if (top < 0 || left < 0 || height < 1 || width < 1 || top + height > plane.height() ||
      left + width > plane.width()) {
    throw Error("crop window outside the image");
  }
  ImagePlane out(height, width);
  for (int y = 0; y < height; ++y) {
    auto src = plane.row(top + y).subspan(left, width);
    std::ranges::copy(src, out.row(y).begin());
  }
  return out;
}

Image::Image(int h, int w, int c, std::uint8_t fill)
    : height(h), width(w), channels(c),
      data(static_cast<std::size_t>(h) * w * c, fill) {
  if (h < 1 || w < 1 || (c != 1 && c != 3)) throw Error("invalid image geometry");
}

std::vector<ImagePlane> split_channels(const Image& image) {
  std::vector<ImagePlane> planes;
  for (int c = 0; c < image.channels; ++c) {
    ImagePlane p(image.height, image.width);
    for (int y = 0; y < image.height; ++y) {
      for (int x = 0; x < image.width; ++x) p.at(y, x) = image.at(y, x, c);
    }
    planes.push_back(std::move(p));
  }
  return planes;
}

Image merge_channels(std::span<const ImagePlane> planes) {
  if (planes.empty()) throw Error("no planes to merge");
  const int h = planes.front().height();
  const int w = planes.front().width();
  for (const auto& p : planes) {
    if (p.height() != h || p.width() != w) throw Error("planes differ in size");
  }
  Image out(h, w, static_cast<int>(planes.size()));
  for (int c = 0; c < out.channels; ++c) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) out.at(y, x, c) = planes[c].at(y, x);
    }
  }
  return out;
}

}  // namespace hklut
