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

#include "hklut/verify.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "hklut/oracle.hpp"

namespace hklut {

std::string Mismatch::describe() const {
  std::ostringstream os;
  os << "pixel (" << y << "," << x << "): expected " << expected << ", got " << actual;
  return os.str();
}

std::optional<Mismatch> first_mismatch(const ImagePlane& expected, const ImagePlane& actual) {
  if (expected.height() != actual.height() || expected.width() != actual.width()) {
    return Mismatch{-1, -1, expected.height() * 10000 + expected.width(), actual.height() * 10000 + actual.width()};
  }
  for (int y = 0; y < expected.height(); ++y) {
    for (int x = 0; x < expected.width(); ++x) {
      if (expected.at(y, x) != actual.at(y, x)) return Mismatch{y, x, expected.at(y, x), actual.at(y, x)};
    }
  }
  return std::nullopt;
}

void SuiteResult::record(bool pass, const std::string& detail) {
  ++cases;
  if (pass) return;
  if (failed == 0) first_failure = detail;
  ++failed;
}

std::vector<std::pair<int, int>> verification_sizes(int count, std::uint64_t seed) {
  std::vector<std::pair<int, int>> sizes = {{1, 1}, {1, 7}, {5, 1}, {2, 3}, {6, 6}, {8, 8}, {9, 4}, {64, 64}};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> side(1, 48);
  while (static_cast<int>(sizes.size()) < count) sizes.emplace_back(side(rng), side(rng));
  sizes.resize(static_cast<std::size_t>(std::max(count, 0)));
  std::ranges::stable_sort(sizes, {}, [](auto s) { return s.first * s.second; });
  return sizes;
}

std::string describe_plane(const ImagePlane& plane, int max_side) {
  std::ostringstream os;
  os << plane.height() << "x" << plane.width();
  if (plane.height() <= max_side && plane.width() <= max_side) {
    os << " [";
    for (int y = 0; y < plane.height(); ++y) {
      os << (y ? "; " : "");
      for (int x = 0; x < plane.width(); ++x) os << (x ? " " : "") << int(plane.at(y, x));
    }
    os << "]";
  }
  return os.str();
}

namespace {

std::string failure_text(const ImagePlane& input, const Mismatch& m) {
  return "input " + describe_plane(input) + ", " + m.describe();
}

}  // namespace

SuiteResult check_oracle_equivalence(const ModelSpec& model, int cases, std::uint64_t seed, const ForwardFn& engine) {
  SuiteResult result{"oracle equivalence", 0, 0, ""};
  std::mt19937_64 rng(seed);
  for (auto [h, w] : verification_sizes(cases, seed)) {
    const ImagePlane img = oracle::random_plane(h, w, rng);
    const auto m = first_mismatch(oracle::reference_forward(img, model), engine(img, model));
    result.record(!m, m ? failure_text(img, *m) : "");
  }
  return result;
}

SuiteResult check_rotation_equivariance(const ModelSpec& model, int cases, std::uint64_t seed,
                                        const ForwardFn& engine) {
  SuiteResult result{"rotation equivariance", 0, 0, ""};
  std::mt19937_64 rng(seed);
  for (auto [h, w] : verification_sizes(cases, seed)) {
    const ImagePlane img = oracle::random_plane(h, w, rng);
    const ImagePlane base = engine(img, model);
    bool pass = true;
    std::string detail;
    for (int j = 1; j < 4 && pass; ++j) {
      const auto m = first_mismatch(rotate90(base, j), engine(rotate90(img, j), model));
      if (m) {
        pass = false;
        detail = failure_text(img, *m) + " after " + std::to_string(j) + " quarter turn(s)";
      }
    }
    result.record(pass, detail);
  }
  return result;
}

ModelSpec zeroed(const ModelSpec& model) {
  ModelSpec out;
  out.metadata = model.metadata;
  auto zero_branch = [](const BranchSpec& b) {
    std::vector<LutKernel> kernels;
    for (const auto& k : b.kernels()) {
      kernels.push_back({k.pattern, LutTable::zeros(k.table.levels(), k.table.inputs(), k.table.scale())});
    }
    return BranchSpec(std::move(kernels));
  };
  for (const auto& s : model.stages) out.stages.emplace_back(zero_branch(s.msb()), zero_branch(s.lsb()), s.residual());
  return out;
}

SuiteResult check_zero_neutrality(const ModelSpec& model, int cases, std::uint64_t seed, const ForwardFn& engine) {
  SuiteResult result{"zero-LUT neutrality", 0, 0, ""};
  const ModelSpec zero = zeroed(model);
  std::mt19937_64 rng(seed);
  for (auto [h, w] : verification_sizes(cases, seed)) {
    const ImagePlane img = oracle::random_plane(h, w, rng);
    ImagePlane expected = img;
    for (const auto& s : zero.stages) expected = upsample(expected, s.upscale(), s.residual());
    const auto m = first_mismatch(expected, engine(img, zero));
    result.record(!m, m ? failure_text(img, *m) : "");
  }
  return result;
}

ForwardFn engine_forward(ForwardOptions opts) {
  return [opts](const ImagePlane& img, const ModelSpec& model) { return model_forward(img, model, opts); };
}

std::vector<ModelShape> verification_shapes() {
  std::vector<ModelShape> shapes = {ModelShape::hklut_s(), ModelShape::hklut_l(), ModelShape::parse("HD/HD@4"),
                                    ModelShape::parse("L/HD@3"), ModelShape::parse("HDB/HDB@1x2")};
  ModelShape bilinear = ModelShape::hklut_s();
  bilinear.residual = ResidualMode::kBilinear;
  ModelShape bicubic = ModelShape::parse("HDB/HD@2x1x2");
  bicubic.residual = ResidualMode::kBicubic;
  ModelShape srlut = ModelShape::parse("S/HD@2");
  srlut.levels = 17;
  shapes.push_back(bilinear);
  shapes.push_back(bicubic);
  shapes.push_back(srlut);
  return shapes;
}

}  // namespace hklut
