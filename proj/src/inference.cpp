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

#include "hklut/inference.hpp"

#include <algorithm>
#include <thread>

#include "hklut/resample.hpp"

namespace hklut {

namespace {

constexpr int kPad = KernelPattern::kMaxReach;

// Replicate-padded copy so kernel reads never need bounds checks.
struct PaddedPlane {
  int height;
  int width;
  int stride;
  std::vector<std::uint8_t> data;

  explicit PaddedPlane(const ImagePlane& p)
      : height(p.height()), width(p.width()), stride(p.width() + 2 * kPad),
        data(static_cast<std::size_t>(p.height() + 2 * kPad) * stride) {
    for (int y = -kPad; y < height + kPad; ++y) {
      std::uint8_t* dst = &data[static_cast<std::size_t>(y + kPad) * stride];
      for (int x = -kPad; x < width + kPad; ++x) dst[x + kPad] = p.clamped(y, x);
    }
  }

  const std::uint8_t* origin(int y, int x) const {
    return &data[static_cast<std::size_t>(y + kPad) * stride + x + kPad];
  }
};

template <typename Fn>
void parallel_rows(int rows, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max(rows, 1)));
  if (threads <= 1) {
    fn(0, rows);
    return;
  }
  std::vector<std::jthread> workers;
  const int chunk = (rows + static_cast<int>(threads) - 1) / static_cast<int>(threads);
  for (int y0 = 0; y0 < rows; y0 += chunk) {
    workers.emplace_back([&fn, y0, y1 = std::min(rows, y0 + chunk)] { fn(y0, y1); });
  }
}

// dest cell -> source cell of an r x r block turned j quarter turns clockwise.
std::vector<int> block_rotation(int r, int j) {
  std::vector<int> perm(static_cast<std::size_t>(r) * r);
  for (int i = 0; i < r * r; ++i) perm[i] = i;
  for (int t = 0; t < j; ++t) {
    std::vector<int> next(perm.size());
    // Clockwise: rotated(y, x) = block(r - 1 - x, y).
    for (int y = 0; y < r; ++y) {
      for (int x = 0; x < r; ++x) next[y * r + x] = perm[(r - 1 - x) * r + y];
    }
    perm = std::move(next);
  }
  return perm;
}

std::uint8_t plane_max(const ImagePlane& p) { return *std::ranges::max_element(p.pixels()); }

void accumulate_kernel(const PaddedPlane& plane, const KernelPattern& pattern, const LutTable& table,
                       SignedMap& acc, const ForwardOptions& opts) {
  const int n = pattern.size();
  const int r = table.scale();
  const int rr = r * r;
  const int out_w = acc.out_width();

  std::array<std::size_t, KernelPattern::kMaxInputs> weight{};
  for (int i = n - 1, m = 1; i >= 0; --i, m *= table.levels()) weight[i] = static_cast<std::size_t>(m);

  struct Rotation {
    std::array<std::ptrdiff_t, KernelPattern::kMaxInputs> delta{};
    std::vector<int> perm;
  };
  std::vector<Rotation> rotations(pattern.rotations());
  for (int j = 0; j < pattern.rotations(); ++j) {
    for (int i = 0; i < n; ++i) {
      const Offset o = rotate_offset(pattern.offsets()[i], j);
      rotations[j].delta[i] = static_cast<std::ptrdiff_t>(o.dy) * plane.stride + o.dx;
    }
    rotations[j].perm = block_rotation(r, j);
  }

  const std::int8_t* entries = table.entries().data();
  parallel_rows(plane.height, opts.threads, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y) {
      for (int x = 0; x < plane.width; ++x) {
        const std::uint8_t* px = plane.origin(y, x);
        std::int32_t* out = &acc.values[static_cast<std::size_t>(y) * r * out_w + static_cast<std::size_t>(x) * r];
        for (const auto& rot : rotations) {
          std::size_t idx = 0;
          for (int i = 0; i < n; ++i) idx += px[rot.delta[i]] * weight[i];
          const std::int8_t* block = entries + idx * rr;
          for (int c = 0; c < rr; ++c) out[(c / r) * out_w + c % r] += block[rot.perm[c]];
        }
      }
    }
  });
}

void check_plane_levels(const ImagePlane& plane, int levels) {
  if (plane_max(plane) >= levels) {
    throw Error("plane value " + std::to_string(plane_max(plane)) + " exceeds table levels " +
                std::to_string(levels));
  }
}

}  // namespace

std::pair<ImagePlane, ImagePlane> split_nibbles(const ImagePlane& img) {
  ImagePlane msb(img.height(), img.width());
  ImagePlane lsb(img.height(), img.width());
  auto src = img.pixels();
  auto hi = msb.pixels();
  auto lo = lsb.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) {
    hi[i] = static_cast<std::uint8_t>(src[i] >> 4);
    lo[i] = static_cast<std::uint8_t>(src[i] & 0x0F);
  }
  return {std::move(msb), std::move(lsb)};
}

std::vector<int> gather_tuple(const ImagePlane& plane, const KernelPattern& pattern, int y, int x) {
  std::vector<int> tuple;
  tuple.reserve(pattern.offsets().size());
  for (Offset o : pattern.offsets()) tuple.push_back(plane.clamped(y + o.dy, x + o.dx));
  return tuple;
}

std::size_t lut_index(std::span<const int> tuple, int levels) {
  std::size_t idx = 0;
  for (int v : tuple) {
    if (v < 0 || v >= levels) {
      throw Error("tuple value " + std::to_string(v) + " outside [0, " + std::to_string(levels) + ")");
    }
    idx = idx * static_cast<std::size_t>(levels) + static_cast<std::size_t>(v);
  }
  return idx;
}

SignedMap kernel_forward(const ImagePlane& plane, const KernelPattern& pattern, const LutTable& table,
                         const ForwardOptions& opts) {
  if (pattern.size() != table.inputs()) throw Error("pattern and table disagree on input count");
  check_plane_levels(plane, table.levels());
  SignedMap acc(plane.height(), plane.width(), table.scale());
  accumulate_kernel(PaddedPlane(plane), pattern, table, acc, opts);
  return acc;
}

BranchSum branch_forward(const ImagePlane& plane, const BranchSpec& branch, const ForwardOptions& opts) {
  check_plane_levels(plane, branch.levels());
  BranchSum result{SignedMap(plane.height(), plane.width(), branch.scale()), branch.divisor()};
  const PaddedPlane padded(plane);
  for (const auto& k : branch.kernels()) accumulate_kernel(padded, k.pattern, k.table, result.sum, opts);
  return result;
}

ImagePlane upsample(const ImagePlane& img, int r, ResidualMode mode) { return classical_upscale(img, r, mode); }

ImagePlane stage_forward(const ImagePlane& img, const StageSpec& stage, const ForwardOptions& opts) {
  const auto [msb, lsb] = split_nibbles(img);
  const BranchSum hi = branch_forward(msb, stage.msb(), opts);
  const BranchSum lo = branch_forward(lsb, stage.lsb(), opts);
  ImagePlane out = upsample(img, stage.upscale(), stage.residual());
  auto px = out.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    const std::int32_t v = px[i] + div_round(hi.sum.values[i], hi.divisor) + div_round(lo.sum.values[i], lo.divisor);
    px[i] = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
  }
  return out;
}

ImagePlane model_forward(const ImagePlane& img, const ModelSpec& model, const ForwardOptions& opts) {
  ImagePlane cur = img;
  for (const auto& stage : model.stages) cur = stage_forward(cur, stage, opts);
  return cur;
}

Image model_forward(const Image& img, const ModelSpec& model, const ForwardOptions& opts) {
  auto planes = split_channels(img);
  for (auto& p : planes) p = model_forward(p, model, opts);
  return merge_channels(planes);
}

}  // namespace hklut
