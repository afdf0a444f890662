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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hklut {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Offset {
  int dy = 0;
  int dx = 0;

  friend auto operator<=>(const Offset&, const Offset&) = default;
};

// Maps an offset j quarter turns clockwise: (dy, dx) -> (dx, -dy).
Offset rotate_offset(Offset o, int j);

// Ordered pixel offsets that index one LUT. The first offset is always the
// pivot (0,0); `rotations` is how many quarter-turn samplings are averaged.
class KernelPattern {
 public:
  static constexpr int kMaxInputs = 4;
  static constexpr int kMaxReach = 2;

  KernelPattern(std::string name, std::vector<Offset> offsets, int rotations = 4);

  const std::string& name() const { return name_; }
  std::span<const Offset> offsets() const { return offsets_; }
  int size() const { return static_cast<int>(offsets_.size()); }
  int rotations() const { return rotations_; }

  // Offsets and rotation count only; the name is a label.
  bool same_geometry(const KernelPattern& other) const {
    return offsets_ == other.offsets_ && rotations_ == other.rotations_;
  }
  friend bool operator==(const KernelPattern& a, const KernelPattern& b) {
    return a.same_geometry(b);
  }

 private:
  std::string name_;
  std::vector<Offset> offsets_;
  int rotations_;
};

// Names: S, H, D, L, HDB_A, HDB_B, HDB_C.
KernelPattern builtin_pattern(std::string_view name);
std::vector<std::string> builtin_pattern_names();

// Kernel families used for whole branches: "S", "L", "HD", "HDB".
std::vector<KernelPattern> kernel_family(std::string_view family);

KernelPattern rotate_pattern(const KernelPattern& p, int j);

// Returns the built-in name whose offsets match `offsets`, or "custom".
std::string identify_pattern(std::span<const Offset> offsets);

// v^n, throwing if it does not fit in 32 bits.
std::size_t entry_count(int levels, int inputs);

// A cached mapping from v^n input tuples to r x r blocks of int8 residuals.
// Entries are laid out entry-major, then row-major inside each block.
class LutTable {
 public:
  static constexpr int kMinEntry = -127;
  static constexpr int kMaxEntry = 127;

  LutTable(int levels, int inputs, int scale, std::vector<std::int8_t> entries);
  static LutTable zeros(int levels, int inputs, int scale);

  int levels() const { return levels_; }
  int inputs() const { return inputs_; }
  int scale() const { return scale_; }
  std::size_t entry_count() const { return entries_.size() / block_size(); }
  std::size_t block_size() const { return static_cast<std::size_t>(scale_) * scale_; }
  std::span<const std::int8_t> entries() const { return entries_; }
  std::span<const std::int8_t> block(std::size_t index) const {
    return std::span(entries_).subspan(index * block_size(), block_size());
  }
  std::size_t size_bytes() const { return entries_.size(); }

  friend bool operator==(const LutTable&, const LutTable&) = default;

 private:
  int levels_;
  int inputs_;
  int scale_;
  std::vector<std::int8_t> entries_;
};

struct LutKernel {
  KernelPattern pattern;
  LutTable table;

  friend bool operator==(const LutKernel&, const LutKernel&) = default;
};

// One nibble branch: N >= 1 kernels sharing the same v, r and rotation count.
class BranchSpec {
 public:
  explicit BranchSpec(std::vector<LutKernel> kernels);

  std::span<const LutKernel> kernels() const { return kernels_; }
  int levels() const { return kernels_.front().table.levels(); }
  int scale() const { return kernels_.front().table.scale(); }
  int rotations() const { return kernels_.front().pattern.rotations(); }
  // Number of summed lookups per pixel, i.e. the averaging divisor.
  int divisor() const { return rotations() * static_cast<int>(kernels_.size()); }

  friend bool operator==(const BranchSpec&, const BranchSpec&) = default;

 private:
  std::vector<LutKernel> kernels_;
};

enum class ResidualMode : std::uint8_t { kNearest = 0, kBilinear = 1, kBicubic = 2 };

std::string_view to_string(ResidualMode mode);
ResidualMode parse_residual_mode(std::string_view name);

class StageSpec {
 public:
  StageSpec(BranchSpec msb, BranchSpec lsb, ResidualMode residual = ResidualMode::kNearest);

  const BranchSpec& msb() const { return msb_; }
  const BranchSpec& lsb() const { return lsb_; }
  int upscale() const { return msb_.scale(); }
  ResidualMode residual() const { return residual_; }

  friend bool operator==(const StageSpec&, const StageSpec&) = default;

 private:
  BranchSpec msb_;
  BranchSpec lsb_;
  ResidualMode residual_;
};

struct ModelSpec {
  std::vector<StageSpec> stages;
  std::map<std::string, std::string> metadata;

  int total_upscale() const;

  // Compares stages, tables included; metadata carries no semantics.
  bool same_content(const ModelSpec& other) const { return stages == other.stages; }
};

std::size_t lut_size_bytes(const LutTable& table);
std::size_t lut_size_bytes(const BranchSpec& branch);
std::size_t lut_size_bytes(const StageSpec& stage);
std::size_t lut_size_bytes(const ModelSpec& model);

// Binary units: "0 B", "512 B", "100.0 KB", "112.5 KB", "1.27 MB".
std::string format_size(std::size_t bytes);

// Architecture without table contents.
struct ModelShape {
  std::vector<int> upscales;
  std::string msb_family = "HDB";
  std::string lsb_family = "HD";
  int levels = 16;
  ResidualMode residual = ResidualMode::kNearest;

  static ModelShape hklut_s();  // 2 stages, 2x2
  static ModelShape hklut_l();  // 3 stages, 2x1x2
  // "hklut-s", "hklut-l", or "<MSB>/<LSB>@<r1>x<r2>..." such as "HDB/HD@4".
  static ModelShape parse(std::string_view text);
};

enum class Branch : std::uint8_t { kMsb = 0, kLsb = 1 };

struct TableSlot {
  int stage = 0;
  Branch branch = Branch::kMsb;
  int kernel = 0;
  const KernelPattern* pattern = nullptr;
  int levels = 16;
  int scale = 1;
};

using TableFactory = std::function<LutTable(const TableSlot&)>;

ModelSpec build_model(const ModelShape& shape, const TableFactory& factory);
ModelSpec zero_model(const ModelShape& shape);

}  // namespace hklut
