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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hklut/oracle.hpp"

namespace hklut {
namespace {

// Floating-point separable upscale written from the definition.
double reference_sample(const ImagePlane& img, int oy, int ox, int r, Interpolation m) {
  auto weights = [&](int o, int n) {
    const double c = (o + 0.5) / r - 0.5;
    std::vector<std::pair<int, double>> w;
    if (m == Interpolation::kBilinear) {
      const int i = static_cast<int>(std::floor(c));
      const double f = c - i;
      w = {{i, 1 - f}, {i + 1, f}};
    } else {
      const int i = static_cast<int>(std::floor(c));
      for (int k = i - 1; k <= i + 2; ++k) w.emplace_back(k, keys_cubic(c - k));
    }
    for (auto& [idx, _] : w) idx = std::clamp(idx, 0, n - 1);
    return w;
  };
  double acc = 0;
  for (auto [y, wy] : weights(oy, img.height()))
    for (auto [x, wx] : weights(ox, img.width())) acc += wy * wx * img.at(y, x);
  return acc;
}

TEST(KeysCubicTest, KnownValues) {
  EXPECT_DOUBLE_EQ(keys_cubic(0), 1.0);
  EXPECT_DOUBLE_EQ(keys_cubic(1), 0.0);
  EXPECT_DOUBLE_EQ(keys_cubic(2), 0.0);
  EXPECT_DOUBLE_EQ(keys_cubic(0.5), 0.5625);
  EXPECT_DOUBLE_EQ(keys_cubic(-1.5), -0.0625);
  EXPECT_DOUBLE_EQ(keys_cubic(2.5), 0.0);
}

TEST(ResamplePhasesTest, WeightsSumToOneAndMirror) {
  for (auto m : {Interpolation::kBilinear, Interpolation::kBicubic}) {
    for (int r = 1; r <= 4; ++r) {
      const auto phases = resample_phases(r, m);
      ASSERT_EQ(static_cast<int>(phases.size()), r);
      for (const auto& taps : phases) {
        int sum = 0;
        for (auto t : taps) sum += t.weight;
        EXPECT_EQ(sum, 1 << kResampleWeightBits);
      }
      // Phase p mirrored about the pixel center is phase r-1-p.
      for (int p = 0; p < r; ++p) {
        std::vector<std::pair<int, int>> a, b;
        for (auto t : phases[p]) if (t.weight) a.emplace_back(t.offset, t.weight);
        for (auto t : phases[r - 1 - p]) if (t.weight) b.emplace_back(-t.offset, t.weight);
        std::ranges::sort(a);
        std::ranges::sort(b);
        EXPECT_EQ(a, b) << "r=" << r << " phase " << p;
      }
    }
  }
}

TEST(ClassicalUpscaleTest, BilinearRow) {
  const ImagePlane row(1, 2, std::vector<std::uint8_t>{0, 100});
  const ImagePlane up = classical_upscale(row, 2, Interpolation::kBilinear);
  ASSERT_EQ(up.width(), 4);
  EXPECT_EQ(up.at(0, 0), 0);
  EXPECT_EQ(up.at(0, 1), 25);
  EXPECT_EQ(up.at(0, 2), 75);
  EXPECT_EQ(up.at(0, 3), 100);
  EXPECT_EQ(up.at(1, 2), 75);
}

TEST(ClassicalUpscaleTest, ConstantStaysConstant) {
  for (auto m : {Interpolation::kNearest, Interpolation::kBilinear, Interpolation::kBicubic}) {
    const ImagePlane up = classical_upscale(ImagePlane(3, 2, std::uint8_t{201}), 3, m);
    EXPECT_TRUE(std::ranges::all_of(up.pixels(), [](int v) { return v == 201; }));
  }
}

TEST(ClassicalUpscaleTest, ScaleOneIsIdentity) {
  std::mt19937_64 rng(3);
  const ImagePlane img = oracle::random_plane(5, 7, rng);
  for (auto m : {Interpolation::kNearest, Interpolation::kBilinear, Interpolation::kBicubic}) {
    EXPECT_EQ(classical_upscale(img, 1, m), img);
  }
}

TEST(ClassicalUpscaleTest, AgreesWithFloatingReference) {
  std::mt19937_64 rng(5);
  for (auto m : {Interpolation::kBilinear, Interpolation::kBicubic}) {
    for (int r : {2, 3, 4}) {
      const ImagePlane img = oracle::random_plane(6, 9, rng);
      const ImagePlane up = classical_upscale(img, r, m);
      int exact = 0;
      for (int y = 0; y < up.height(); ++y) {
        for (int x = 0; x < up.width(); ++x) {
          const double want = std::clamp(reference_sample(img, y, x, r, m), 0.0, 255.0);
          EXPECT_LE(std::abs(up.at(y, x) - want), 1.0) << y << "," << x;
          exact += up.at(y, x) == std::lround(want);
        }
      }
      EXPECT_GE(exact, static_cast<int>(0.97 * up.size()));
    }
  }
}

TEST(ClassicalUpscaleTest, CommutesWithRotation) {
  std::mt19937_64 rng(6);
  for (auto m : {Interpolation::kNearest, Interpolation::kBilinear, Interpolation::kBicubic}) {
    const ImagePlane img = oracle::random_plane(7, 4, rng);
    const ImagePlane up = classical_upscale(img, 3, m);
    for (int j = 1; j < 4; ++j) EXPECT_EQ(classical_upscale(rotate90(img, j), 3, m), rotate90(up, j));
  }
}

TEST(ClassicalUpscaleTest, ImageChannels) {
  Image img(2, 2, 3);
  for (std::size_t i = 0; i < img.data.size(); ++i) img.data[i] = static_cast<std::uint8_t>(i * 20);
  const Image up = classical_upscale(img, 2, Interpolation::kNearest);
  EXPECT_EQ(up.height, 4);
  EXPECT_EQ(up.at(3, 3, 2), img.at(1, 1, 2));
}

TEST(Rotate90Test, Clockwise) {
  const ImagePlane p(2, 3, std::vector<std::uint8_t>{1, 2, 3, 4, 5, 6});
  const ImagePlane q = rotate90(p, 1);
  ASSERT_EQ(q.height(), 3);
  ASSERT_EQ(q.width(), 2);
  EXPECT_EQ(q.at(0, 0), 4);
  EXPECT_EQ(q.at(0, 1), 1);
  EXPECT_EQ(q.at(2, 1), 3);
  EXPECT_EQ(rotate90(p, 4), p);
  EXPECT_EQ(rotate90(p, -1), rotate90(p, 3));
}

}  // namespace
}  // namespace hklut
