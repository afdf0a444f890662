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

#include "hklut/metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "hklut/oracle.hpp"

namespace hklut {
namespace {

// SSIM with explicit per-window loops.
double naive_ssim(const ImagePlane& a, const ImagePlane& b) {
  const int k = 11;
  std::vector<double> g(k * k);
  double total = 0;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) total += g[i * k + j] = std::exp(-((i - 5) * (i - 5) + (j - 5) * (j - 5)) / 4.5);
  for (auto& w : g) w /= total;
  const double c1 = 6.5025, c2 = 58.5225;
  double sum = 0;
  int count = 0;
  for (int y = 0; y + k <= a.height(); ++y) {
    for (int x = 0; x + k <= a.width(); ++x) {
      double ma = 0, mb = 0, saa = 0, sbb = 0, sab = 0;
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
          const double w = g[i * k + j], p = a.at(y + i, x + j), q = b.at(y + i, x + j);
          ma += w * p;
          mb += w * q;
          saa += w * p * p;
          sbb += w * q * q;
          sab += w * p * q;
        }
      }
      saa -= ma * ma;
      sbb -= mb * mb;
      sab -= ma * mb;
      sum += (2 * ma * mb + c1) * (2 * sab + c2) / ((ma * ma + mb * mb + c1) * (saa + sbb + c2));
      ++count;
    }
  }
  return sum / count;
}

TEST(PsnrTest, Values) {
  const ImagePlane black(4, 4, std::uint8_t{0});
  const ImagePlane white(4, 4, std::uint8_t{255});
  EXPECT_EQ(psnr(black, black), kInfinitePsnr);
  EXPECT_DOUBLE_EQ(psnr(black, white), 0.0);
  ImagePlane one = black;
  one.at(1, 2) = 16;
  EXPECT_NEAR(psnr(black, one), 10 * std::log10(255.0 * 255.0 / (256.0 / 16)), 1e-12);
  EXPECT_EQ(psnr(one, black), psnr(black, one));
  EXPECT_NEAR(psnr(black, one, 1), 10 * std::log10(255.0 * 255.0 / (256.0 / 4)), 1e-12);
  ImagePlane edge = black;
  edge.at(0, 0) = 200;
  EXPECT_EQ(psnr(black, edge, 1), kInfinitePsnr);
  EXPECT_THROW(psnr(black, ImagePlane(4, 5)), Error);
  EXPECT_THROW(psnr(black, black, 2), Error);
}

TEST(SsimTest, IdentityAndReference) {
  std::mt19937_64 rng(2);
  const ImagePlane a = oracle::random_plane(20, 17, rng);
  ImagePlane b = a;
  for (auto& v : b.pixels()) v = static_cast<std::uint8_t>(std::clamp<int>(v + static_cast<int>(rng() % 41) - 20, 0, 255));
  EXPECT_DOUBLE_EQ(ssim(a, a), 1.0);
  EXPECT_NEAR(ssim(a, b), naive_ssim(a, b), 1e-9);
  EXPECT_NEAR(ssim(rotate90(a), rotate90(b)), ssim(a, b), 1e-9);
  EXPECT_LT(ssim(a, b), 1.0);
}

TEST(SsimTest, SmallPlanes) {
  const ImagePlane a(3, 4, std::uint8_t{90});
  EXPECT_DOUBLE_EQ(ssim(a, a), 1.0);
  const ImagePlane one(1, 1, std::uint8_t{9});
  EXPECT_DOUBLE_EQ(ssim(one, one), 1.0);
}

TEST(LumaTest, PrimaryColors) {
  auto luma = [](int r, int g, int b) {
    Image img(1, 1, 3);
    img.data = {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g), static_cast<std::uint8_t>(b)};
    return static_cast<int>(to_luma(img).at(0, 0));
  };
  EXPECT_EQ(luma(0, 0, 0), 16);
  EXPECT_EQ(luma(255, 255, 255), 235);
  EXPECT_EQ(luma(255, 0, 0), 81);
  EXPECT_EQ(luma(0, 255, 0), 145);
  EXPECT_EQ(luma(0, 0, 255), 41);
  Image gray(1, 1, 1, 77);
  EXPECT_EQ(to_luma(gray).at(0, 0), 77);
}

TEST(YCbCrTest, RoundTripIsClose) {
  std::mt19937_64 rng(8);
  Image img(8, 8, 3);
  for (auto& v : img.data) v = static_cast<std::uint8_t>(rng());
  const Image back = ycbcr_to_rgb(rgb_to_ycbcr(img));
  for (std::size_t i = 0; i < img.data.size(); ++i) EXPECT_LE(std::abs(img.data[i] - back.data[i]), 2);
  EXPECT_EQ(rgb_to_ycbcr(img).y, to_luma(img));
}

TEST(EnergyCostsTest, ParseConfig) {
  const EnergyCosts c = EnergyCosts::parse("[energy]\n# override\nint8_add = 0.5\nlookup=0.25\n\n");
  EXPECT_DOUBLE_EQ(c.int8_add, 0.5);
  EXPECT_DOUBLE_EQ(c.lookup, 0.25);
  EXPECT_DOUBLE_EQ(c.float_mult, 3.7);
  EXPECT_THROW(EnergyCosts::parse("bogus = 1\n"), Error);
  EXPECT_THROW(EnergyCosts::parse("int8_add = abc\n"), Error);
}

TEST(OpCountTest, HkLutSLookups) {
  // 640x360 input to x4: stage one sees 640x360 pixels, stage two 1280x720.
  const ModelSpec s = zero_model(ModelShape::hklut_s());
  const OpCounts ops = estimate_ops(s, 1440, 2560);
  const std::uint64_t per_pixel = 3 * 4 + 2 * 4;
  EXPECT_EQ(ops.lookups, per_pixel * 640 * 360 + per_pixel * 1280 * 720);
  EXPECT_EQ(ops.lookups, 4'608'000u + 18'432'000u);
  EXPECT_EQ(ops.float_ops(), 0u);
}

TEST(OpCountTest, ScalesWithPixels) {
  const ModelSpec l = zero_model(ModelShape::hklut_l());
  const OpCounts a = estimate_ops(l, 128, 96);
  const OpCounts b = estimate_ops(l, 256, 192);
  EXPECT_EQ(b.lookups, 4 * a.lookups);
  EXPECT_EQ(b.int32_adds, 4 * a.int32_adds);
  EXPECT_EQ(b.int8_adds, 4 * a.int8_adds);
  EXPECT_EQ(b.int32_mults, 4 * a.int32_mults);
  EXPECT_THROW(estimate_ops(l, 130, 96), Error);
}

TEST(OpCountTest, IntegerModelBeatsInterpolatedTable) {
  const OpCounts hk = estimate_ops(zero_model(ModelShape::hklut_s()), 1440, 2560);
  const OpCounts interp = estimate_interpolated_lut_ops({}, 1440, 2560);
  EXPECT_GT(interp.float_ops(), 0u);
  EXPECT_LT(hk.energy_pj(), interp.energy_pj());
  ModelShape bicubic = ModelShape::hklut_s();
  bicubic.residual = ResidualMode::kBicubic;
  const OpCounts hb = estimate_ops(zero_model(bicubic), 1440, 2560);
  EXPECT_EQ(hb.float_ops(), 0u);
  EXPECT_GT(hb.int32_mults, hk.int32_mults);
}

TEST(OpCountTest, EnergyIsWeightedSum) {
  OpCounts o;
  o.lookups = 10;
  o.int8_adds = 3;
  o.int32_adds = 2;
  o.int32_mults = 1;
  o.float_adds = 1;
  EXPECT_NEAR(o.energy_pj(), 10 * 0.03 + 3 * 0.03 + 2 * 0.1 + 3.1 + 0.9, 1e-12);
}

TEST(BenchTest, CollectsSamples) {
  const BenchStats st = bench_runtime(zero_model(ModelShape::hklut_s()), 16, 24, 3);
  EXPECT_EQ(st.samples_ms.size(), 3u);
  EXPECT_GE(st.mean_ms, 0.0);
  EXPECT_GE(st.stddev_ms, 0.0);
}

TEST(EvalReportTest, KeyValues) {
  EvalReport r;
  r.method = "m";
  r.images = {{"Set5", "a", 30.0, 0.9, false}, {"Set5", "b", 32.0, 0.8, false}};
  r.model_bytes = 102400;
  const auto sums = r.summaries();
  ASSERT_EQ(sums.size(), 1u);
  EXPECT_DOUBLE_EQ(sums[0].mean_psnr, 31.0);
  EXPECT_NEAR(sums[0].mean_ssim, 0.85, 1e-12);
  std::ostringstream os;
  r.write_key_values(os);
  const std::string s = os.str();
  EXPECT_NE(s.find("Set5 a psnr 30"), std::string::npos) << s;
  EXPECT_NE(s.find("Set5 mean psnr 31"), std::string::npos) << s;
  EXPECT_NE(s.find("- - size_bytes 102400"), std::string::npos) << s;
}

}  // namespace
}  // namespace hklut
