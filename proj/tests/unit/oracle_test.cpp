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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "hklut/inference.hpp"

namespace hklut {
namespace {

std::vector<int> mixing_function(std::span<const int> t, int r) {
  std::vector<int> out(static_cast<std::size_t>(r) * r);
  for (int c = 0; c < r * r; ++c) {
    int acc = c;
    for (int v : t) acc = acc * 7 + v;
    out[c] = acc % 255 - 127;
  }
  return out;
}

void expect_table_matches(int n, int r) {
  const int v = 16;
  const LutTable t = oracle::build_lut_from_function([r](std::span<const int> x) { return mixing_function(x, r); }, v, n, r);
  std::vector<int> tuple(n, 0);
  for (int code = 0; code < static_cast<int>(entry_count(v, n)); ++code) {
    int rest = code;
    for (int i = n - 1; i >= 0; --i) {
      tuple[i] = rest % v;
      rest /= v;
    }
    const auto want = mixing_function(tuple, r);
    const auto got = t.block(lut_index(tuple, v));
    ASSERT_TRUE(std::ranges::equal(want, got)) << "tuple index " << code;
  }
}

TEST(BuildLutTest, EveryTupleLooksUpItsValue) {
  expect_table_matches(1, 3);
  expect_table_matches(2, 2);
  expect_table_matches(3, 1);
}

TEST(BuildLutTest, FixtureFunctions) {
  const LutTable d = oracle::build_lut_from_function(oracle::difference_function(2), 16, 2, 2);
  const std::vector<int> a = {15, 0};
  const std::vector<int> b = {0, 15};
  EXPECT_TRUE(std::ranges::all_of(d.block(lut_index(a, 16)), [](int x) { return x == 15; }));
  EXPECT_TRUE(std::ranges::all_of(d.block(lut_index(b, 16)), [](int x) { return x == -15; }));
  const LutTable z = oracle::build_lut_from_function(oracle::constant_function(0, 4), 16, 3, 4);
  EXPECT_TRUE(std::ranges::all_of(z.entries(), [](int x) { return x == 0; }));
  const LutTable one = oracle::build_lut_from_function(oracle::difference_function(1), 16, 1, 1);
  EXPECT_TRUE(std::ranges::all_of(one.entries(), [](int x) { return x == 0; }));
}

TEST(BuildLutTest, RejectsBadFunctions) {
  EXPECT_THROW(oracle::build_lut_from_function(oracle::constant_function(0, 2), 16, 2, 3), Error);
  EXPECT_THROW(oracle::build_lut_from_function([](std::span<const int>) { return std::vector<int>{128}; }, 16, 1, 1),
               Error);
  EXPECT_THROW(oracle::build_lut_from_function([](std::span<const int>) { return std::vector<int>{-128}; }, 16, 1, 1),
               Error);
}

TEST(ReferenceForwardTest, ZeroModelIsNearest) {
  std::mt19937_64 rng(1);
  const ImagePlane img = oracle::random_plane(3, 5, rng);
  const ImagePlane out = oracle::reference_forward(img, zero_model(ModelShape::hklut_s()));
  ASSERT_EQ(out.height(), 12);
  ASSERT_EQ(out.width(), 20);
  for (int y = 0; y < 12; ++y)
    for (int x = 0; x < 20; ++x) EXPECT_EQ(out.at(y, x), img.at(y / 4, x / 4));
}

TEST(RandomFixturesTest, ShapesAndRanges) {
  std::mt19937_64 rng(4);
  const LutTable t = oracle::random_table(17, 2, 3, rng);
  EXPECT_TRUE(std::ranges::none_of(t.entries(), [](int x) { return x == -128; }));
  EXPECT_EQ(t.entries().size(), 289u * 9);
  const ModelSpec m = oracle::random_model(ModelShape::hklut_l(), rng);
  const ModelSpec z = zero_model(ModelShape::hklut_l());
  ASSERT_EQ(m.stages.size(), z.stages.size());
  for (std::size_t i = 0; i < m.stages.size(); ++i) {
    EXPECT_EQ(m.stages[i].upscale(), z.stages[i].upscale());
    EXPECT_EQ(m.stages[i].msb().kernels().size(), z.stages[i].msb().kernels().size());
    EXPECT_EQ(lut_size_bytes(m.stages[i]), lut_size_bytes(z.stages[i]));
  }
  EXPECT_FALSE(m.same_content(z));
  std::mt19937_64 a(9), b(9);
  EXPECT_EQ(oracle::random_plane(4, 4, a), oracle::random_plane(4, 4, b));
}

}  // namespace
}  // namespace hklut
