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

#include "hklut/model.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>

namespace hklut {
namespace {

std::vector<Offset> offsets_of(const KernelPattern& p) { return {p.offsets().begin(), p.offsets().end()}; }

// Counts how often each non-pivot cell of a (2*reach+1)^2 window is hit by
// the four rotations of a kernel family. Rotation is applied here with the
// explicit formula, not with rotate_pattern.
std::map<Offset, int> coverage(const std::vector<std::string>& names) {
  std::map<Offset, int> hits;
  for (const auto& name : names) {
    const KernelPattern p = builtin_pattern(name);
    for (int j = 0; j < 4; ++j) {
      for (Offset o : p.offsets()) {
        for (int t = 0; t < j; ++t) o = Offset{o.dx, -o.dy};
        if (o != Offset{0, 0}) ++hits[o];
      }
    }
  }
  return hits;
}

void expect_exact_cover(const std::vector<std::string>& names, int reach) {
  const auto hits = coverage(names);
  int cells = 0;
  for (int dy = -reach; dy <= reach; ++dy) {
    for (int dx = -reach; dx <= reach; ++dx) {
      if (dy == 0 && dx == 0) continue;
      ++cells;
      auto it = hits.find({dy, dx});
      ASSERT_NE(it, hits.end()) << "cell (" << dy << "," << dx << ") uncovered";
      EXPECT_EQ(it->second, 1) << "cell (" << dy << "," << dx << ") covered more than once";
    }
  }
  EXPECT_EQ(static_cast<int>(hits.size()), cells) << "coverage leaks outside the window";
}

TEST(KernelPatternTest, BuiltinShapes) {
  const KernelPattern h = builtin_pattern("H");
  EXPECT_EQ(offsets_of(h), (std::vector<Offset>{{0, 0}, {0, 1}}));
  EXPECT_EQ(h.rotations(), 4);
  EXPECT_EQ(offsets_of(builtin_pattern("S")), (std::vector<Offset>{{0, 0}, {0, 1}, {1, 0}, {1, 1}}));
  EXPECT_EQ(offsets_of(builtin_pattern("HDB_C")), (std::vector<Offset>{{0, 0}, {1, 2}, {2, 1}}));
  for (const auto& name : builtin_pattern_names()) EXPECT_EQ(builtin_pattern(name).name(), name);
}

TEST(KernelPatternTest, UnknownNameThrows) { EXPECT_THROW(builtin_pattern("Q"), Error); }

TEST(KernelPatternTest, InvariantViolations) {
  EXPECT_THROW(KernelPattern("x", {{0, 1}}), Error);                  // no pivot first
  EXPECT_THROW(KernelPattern("x", {{0, 0}, {0, 1}, {0, 1}}), Error);  // duplicate
  EXPECT_THROW(KernelPattern("x", {{0, 0}, {0, 3}}), Error);          // outside 5x5
  EXPECT_THROW(KernelPattern("x", {{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}}), Error);
  EXPECT_THROW(KernelPattern("x", {}), Error);
  EXPECT_THROW(KernelPattern("x", {{0, 0}}, 3), Error);
  EXPECT_NO_THROW(KernelPattern("x", {{0, 0}}, 2));
}

TEST(KernelPatternTest, RotateExamples) {
  const KernelPattern h = builtin_pattern("H");
  EXPECT_EQ(rotate_pattern(h, 0), h);
  EXPECT_EQ(rotate_offset({0, 1}, 1), (Offset{1, 0}));
  EXPECT_EQ(rotate_offset({1, 2}, 2), (Offset{-1, -2}));
  EXPECT_EQ(rotate_pattern(h, 1).offsets()[0], (Offset{0, 0}));
}

TEST(KernelPatternTest, FourRotationsAreIdentity) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(-2, 2);
  for (int i = 0; i < 200; ++i) {
    const Offset o{d(rng), d(rng)};
    EXPECT_EQ(rotate_offset(o, 4), o);
    EXPECT_EQ(rotate_offset(rotate_offset(o, 1), 3), o);
  }
  for (const auto& name : builtin_pattern_names()) {
    const KernelPattern p = builtin_pattern(name);
    EXPECT_EQ(rotate_pattern(rotate_pattern(rotate_pattern(rotate_pattern(p, 1), 1), 1), 1), p);
  }
}

TEST(KernelPatternTest, ExactCoverOfWindows) {
  expect_exact_cover({"H", "D"}, 1);
  expect_exact_cover({"L"}, 1);
  expect_exact_cover({"HDB_A", "HDB_B", "HDB_C"}, 2);
}

TEST(KernelPatternTest, SrlutKernelOverlapsItself) {
  // The 2x2 square revisits cells across rotations; only exact-cover kernels
  // avoid that.
  const auto hits = coverage({"S"});
  EXPECT_EQ(hits.size(), 8u);
  EXPECT_EQ(hits.at({0, 1}), 2);
}

TEST(KernelPatternTest, IdentifyPattern) {
  EXPECT_EQ(identify_pattern(builtin_pattern("HDB_B").offsets()), "HDB_B");
  const std::vector<Offset> odd = {{0, 0}, {2, 0}};
  EXPECT_EQ(identify_pattern(odd), "custom");
}

TEST(LutTableTest, Invariants) {
  EXPECT_EQ(LutTable::zeros(16, 2, 2).entries().size(), 256u * 4);
  EXPECT_THROW(LutTable(16, 2, 2, std::vector<std::int8_t>(100)), Error);
  std::vector<std::int8_t> bad(16 * 1, 0);
  bad[3] = -128;
  EXPECT_THROW(LutTable(16, 1, 1, bad), Error);
  EXPECT_THROW(LutTable::zeros(16, 2, 0), Error);
  EXPECT_THROW(LutTable::zeros(1, 2, 1), Error);
  EXPECT_THROW(LutTable::zeros(16, 5, 1), Error);
}

TEST(LutTableTest, BlockLayout) {
  std::vector<std::int8_t> e(16 * 4);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = static_cast<std::int8_t>(i);
  const LutTable t(16, 1, 2, e);
  EXPECT_EQ(t.entry_count(), 16u);
  EXPECT_EQ(t.block(3)[0], 12);
  EXPECT_EQ(t.block(3)[3], 15);
}

TEST(BranchSpecTest, ConsistencyErrors) {
  const auto h = builtin_pattern("H");
  const auto l = builtin_pattern("L");
  EXPECT_THROW(BranchSpec({}), Error);
  EXPECT_THROW(BranchSpec({{h, LutTable::zeros(16, 3, 2)}}), Error);  // n mismatch
  EXPECT_THROW(BranchSpec({{h, LutTable::zeros(16, 2, 2)}, {l, LutTable::zeros(16, 3, 1)}}), Error);
  EXPECT_THROW(BranchSpec({{h, LutTable::zeros(16, 2, 2)}, {l, LutTable::zeros(17, 3, 2)}}), Error);
  const BranchSpec ok({{h, LutTable::zeros(16, 2, 2)}, {l, LutTable::zeros(16, 3, 2)}});
  EXPECT_EQ(ok.divisor(), 8);
}

TEST(StageSpecTest, BranchesMustAgreeOnScale) {
  const auto h = builtin_pattern("H");
  EXPECT_THROW(StageSpec(BranchSpec({{h, LutTable::zeros(16, 2, 2)}}), BranchSpec({{h, LutTable::zeros(16, 2, 4)}})),
               Error);
}

// Storage figures: v^n * r^2 bytes per table.
TEST(StorageTest, SingleTables) {
  EXPECT_EQ(lut_size_bytes(LutTable::zeros(17, 4, 4)), 1'336'336u);
  EXPECT_EQ(format_size(1'336'336), "1.27 MB");
  EXPECT_EQ(lut_size_bytes(LutTable::zeros(17, 3, 4)), 78'608u);
  EXPECT_EQ(2 * lut_size_bytes(LutTable::zeros(17, 2, 4)), 9'248u);
  EXPECT_EQ(format_size(9'248), "9.0 KB");
}

TEST(StorageTest, HkLutModels) {
  const ModelSpec s = zero_model(ModelShape::hklut_s());
  EXPECT_EQ(lut_size_bytes(s), 102'400u);
  EXPECT_EQ(format_size(lut_size_bytes(s)), "100.0 KB");
  const ModelSpec l = zero_model(ModelShape::hklut_l());
  EXPECT_EQ(lut_size_bytes(l), 115'200u);
  EXPECT_EQ(format_size(lut_size_bytes(l)), "112.5 KB");
  EXPECT_EQ(l.total_upscale(), 4);
  EXPECT_EQ(lut_size_bytes(ModelSpec{}), 0u);
  EXPECT_EQ(format_size(0), "0 B");
}

TEST(ModelShapeTest, Parse) {
  const ModelShape s = ModelShape::parse("HD/HDB@1x4");
  EXPECT_EQ(s.msb_family, "HD");
  EXPECT_EQ(s.lsb_family, "HDB");
  EXPECT_EQ(s.upscales, (std::vector<int>{1, 4}));
  EXPECT_EQ(ModelShape::parse("hklut-l").upscales, (std::vector<int>{2, 1, 2}));
  EXPECT_THROW(ModelShape::parse("HD@4"), Error);
  EXPECT_THROW(ModelShape::parse("HD/XX@4"), Error);
  EXPECT_THROW(ModelShape::parse("HD/HD@0"), Error);
  EXPECT_THROW(ModelShape::parse("HD/HD@2xx"), Error);
}

TEST(ModelShapeTest, ResidualNames) {
  for (auto m : {ResidualMode::kNearest, ResidualMode::kBilinear, ResidualMode::kBicubic}) {
    EXPECT_EQ(parse_residual_mode(to_string(m)), m);
  }
  EXPECT_THROW(parse_residual_mode("lanczos"), Error);
}

}  // namespace
}  // namespace hklut
