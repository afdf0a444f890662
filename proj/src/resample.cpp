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

#include "hklut/resample.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>

namespace hklut {

double keys_cubic(double x, double a) {
  x = std::abs(x);
  if (x <= 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
  if (x < 2.0) return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
  return 0.0;
}

namespace {

// Taps for a phase whose output center lies f >= 0 pixels right of the
// source pixel center.
std::vector<ResampleTap> taps_for_offset(double f, Interpolation method) {
  std::vector<std::pair<int, double>> real;
  if (method == Interpolation::kBilinear) {
    real = {{0, 1.0 - f}, {1, f}};
  } else {
    for (int t = -1; t <= 2; ++t) real.emplace_back(t, keys_cubic(f - t));
  }
  const int one = 1 << kResampleWeightBits;
  std::vector<ResampleTap> taps;
  int sum = 0;
  for (auto [off, w] : real) {
    const int q = static_cast<int>(std::lround(w * one));
    if (q == 0) continue;
    taps.push_back({off, q});
    sum += q;
  }
  auto largest = std::ranges::max_element(taps, {}, [](const ResampleTap& t) { return std::abs(t.weight); });
  largest->weight += one - sum;
  return taps;
}

std::int64_t div_round_pow2(std::int64_t s, int bits) {
  const std::int64_t half = std::int64_t{1} << (bits - 1);
  return s >= 0 ? (s + half) >> bits : -((-s + half) >> bits);
}

}  // namespace

std::vector<std::vector<ResampleTap>> resample_phases(int r, Interpolation method) {
  if (r < 1) throw Error("upscale factor must be >= 1");
  std::vector<std::vector<ResampleTap>> phases(r);
  for (int p = 0; p < r; ++p) {
    const int mirror = r - 1 - p;
    if (p < mirror) continue;
    const double f = (p + 0.5) / r - 0.5;
    phases[p] = method == Interpolation::kNearest ? std::vector<ResampleTap>{{0, 1 << kResampleWeightBits}}
                                                  : taps_for_offset(f, method);
    if (mirror != p) {
      for (auto t : phases[p]) phases[mirror].push_back({-t.offset, t.weight});
    }
  }
  return phases;
}

ImagePlane classical_upscale(const ImagePlane& img, int r, Interpolation method) {
  if (r < 1) throw Error("upscale factor must be >= 1");
  if (r == 1) return img;
  const int h = img.height();
  const int w = img.width();
  ImagePlane out(h * r, w * r);
  if (method == Interpolation::kNearest) {
    for (int y = 0; y < h * r; ++y) {
      auto src = img.row(y / r);
      auto dst = out.row(y);
      for (int x = 0; x < w * r; ++x) dst[x] = src[x / r];
    }
    return out;
  }

  const auto phases = resample_phases(r, method);
  // Horizontal pass, exact in int32.
  const int ow = w * r;
  std::vector<std::int32_t> tmp(static_cast<std::size_t>(h) * ow);
  for (int y = 0; y < h; ++y) {
    auto src = img.row(y);
    for (int x = 0; x < ow; ++x) {
      const int base = x / r;
      std::int32_t acc = 0;
      for (const auto& t : phases[x % r]) acc += t.weight * src[std::clamp(base + t.offset, 0, w - 1)];
      tmp[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  }
  // Vertical pass in int64, then one rounding.
  for (int y = 0; y < h * r; ++y) {
    const int base = y / r;
    auto dst = out.row(y);
    for (int x = 0; x < ow; ++x) {
      std::int64_t acc = 0;
      for (const auto& t : phases[y % r]) {
        acc += static_cast<std::int64_t>(t.weight) *
               tmp[static_cast<std::size_t>(std::clamp(base + t.offset, 0, h - 1)) * ow + x];
      }
      dst[x] = static_cast<std::uint8_t>(std::clamp<std::int64_t>(div_round_pow2(acc, 2 * kResampleWeightBits), 0, 255));
    }
  }
  return out;
}

Image classical_upscale(const Image& img, int r, Interpolation method) {
  auto planes = split_channels(img);
  for (auto& p : planes) p = classical_upscale(p, r, method);
  return merge_channels(planes);
}

}  // namespace hklut
