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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

namespace hklut {

Offset rotate_offset(Offset o, int j) {
  j = ((j % 4) + 4) % 4;
  for (int i = 0; i < j; ++i) o = Offset{o.dx, -o.dy};
  return o;
}

KernelPattern::KernelPattern(std::string name, std::vector<Offset> offsets, int rotations)
    : name_(std::move(name)), offsets_(std::move(offsets)), rotations_(rotations) {
  if (offsets_.empty() || offsets_.size() > kMaxInputs) {
    throw Error("kernel pattern '" + name_ + "': needs 1.." + std::to_string(kMaxInputs) +
                " offsets, got " + std::to_string(offsets_.size()));
  }
  if (offsets_.front() != Offset{0, 0}) {
    throw Error("kernel pattern '" + name_ + "': first offset must be the pivot (0,0)");
  }
  std::set<Offset> seen;
  for (const Offset& o : offsets_) {
    if (std::abs(o.dy) > kMaxReach || std::abs(o.dx) > kMaxReach) {
      throw Error("kernel pattern '" + name_ + "': offset outside the 5x5 window");
    }
    if (!seen.insert(o).second) {
      throw Error("kernel pattern '" + name_ + "': duplicate offset");
    }
  }
  if (rotations_ != 1 && rotations_ != 2 && rotations_ != 4) {
    throw Error("kernel pattern '" + name_ + "': rotations must be 1, 2 or 4");
  }
}

namespace {

struct BuiltinEntry {
  std::string_view name;
  std::vector<Offset> offsets;
};

const std::vector<BuiltinEntry>& builtin_table() {
  // HDB_A is the straight arm, HDB_B the long diagonal, HDB_C the knight pair.
  static const std::vector<BuiltinEntry> table = {
      {"S", {{0, 0}, {0, 1}, {1, 0}, {1, 1}}},
      {"H", {{0, 0}, {0, 1}}},
      {"D", {{0, 0}, {1, 1}}},
      {"L", {{0, 0}, {0, 1}, {1, 1}}},
      {"HDB_A", {{0, 0}, {0, 1}, {0, 2}}},
      {"HDB_B", {{0, 0}, {1, 1}, {2, 2}}},
      {"HDB_C", {{0, 0}, {1, 2}, {2, 1}}},
  };
  return table;
}

}  // namespace

KernelPattern builtin_pattern(std::string_view name) {
  for (const auto& e : builtin_table()) {
    if (e.name == name) return KernelPattern(std::string(e.name), e.offsets, 4);
  }
  throw Error("unknown kernel pattern '" + std::string(name) + "'");
}

std::vector<std::string> builtin_pattern_names() {
  std::vector<std::string> names;
  for (const auto& e : builtin_table()) names.emplace_back(e.name);
  return names;
}

std::vector<KernelPattern> kernel_family(std::string_view family) {
  if (family == "S") return {builtin_pattern("S")};
  if (family == "L") return {builtin_pattern("L")};
  if (family == "HD") return {builtin_pattern("H"), builtin_pattern("D")};
  if (family == "HDB") {
    return {builtin_pattern("HDB_A"), builtin_pattern("HDB_B"), builtin_pattern("HDB_C")};
  }
  throw Error("unknown kernel family '" + std::string(family) + "'");
}

KernelPattern rotate_pattern(const KernelPattern& p, int j) {
  std::vector<Offset> rotated;
  rotated.reserve(p.offsets().size());
  for (Offset o : p.offsets()) rotated.push_back(rotate_offset(o, j));
  return KernelPattern(p.name(), std::move(rotated), p.rotations());
}

std::string identify_pattern(std::span<const Offset> offsets) {
  for (const auto& e : builtin_table()) {
    if (std::ranges::equal(e.offsets, offsets)) return std::string(e.name);
  }
  return "custom";
}

std::size_t entry_count(int levels, int inputs) {
  if (levels < 2 || levels > 255) throw Error("quantization levels must be in [2, 255]");
  if (inputs < 1 || inputs > KernelPattern::kMaxInputs) throw Error("input count must be in [1, 4]");
  std::uint64_t count = 1;
  for (int i = 0; i < inputs; ++i) count *= static_cast<std::uint64_t>(levels);
  if (count > std::numeric_limits<std::uint32_t>::max()) throw Error("table too large");
  return static_cast<std::size_t>(count);
}

LutTable::LutTable(int levels, int inputs, int scale, std::vector<std::int8_t> entries)
    : levels_(levels), inputs_(inputs), scale_(scale), entries_(std::move(entries)) {
  if (scale_ < 1 || scale_ > 255) throw Error("table upscale must be in [1, 255]");
  const std::size_t expected = hklut::entry_count(levels_, inputs_) * block_size();
  if (entries_.size() != expected) {
    throw Error("table holds " + std::to_string(entries_.size()) + " values, expected " +
                std::to_string(expected));
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i] < kMinEntry) {
      throw Error("table value " + std::to_string(entries_[i]) + " at index " + std::to_string(i) +
                  " outside [-127, 127]");
    }
  }
}

LutTable LutTable::zeros(int levels, int inputs, int scale) {
  const std::size_t n = hklut::entry_count(levels, inputs) * static_cast<std::size_t>(scale) * scale;
  return LutTable(levels, inputs, scale, std::vector<std::int8_t>(n, 0));
}

BranchSpec::BranchSpec(std::vector<LutKernel> kernels) : kernels_(std::move(kernels)) {
  if (kernels_.empty()) throw Error("branch needs at least one kernel");
  const auto& first = kernels_.front();
  for (const auto& k : kernels_) {
    if (k.pattern.size() != k.table.inputs()) {
      throw Error("kernel '" + k.pattern.name() + "' has " + std::to_string(k.pattern.size()) +
                  " offsets but its table indexes " + std::to_string(k.table.inputs()) + " inputs");
    }
    if (k.table.scale() != first.table.scale()) throw Error("mixed upscale factors within a branch");
    if (k.table.levels() != first.table.levels()) throw Error("mixed quantization levels within a branch");
    if (k.pattern.rotations() != first.pattern.rotations()) {
      throw Error("mixed rotation counts within a branch");
    }
  }
}

std::string_view to_string(ResidualMode mode) {
  switch (mode) {
    case ResidualMode::kNearest: return "nearest";
    case ResidualMode::kBilinear: return "bilinear";
    case ResidualMode::kBicubic: return "bicubic";
  }
  return "unknown";
}

ResidualMode parse_residual_mode(std::string_view name) {
  if (name == "nearest") return ResidualMode::kNearest;
  if (name == "bilinear") return ResidualMode::kBilinear;
  if (name == "bicubic") return ResidualMode::kBicubic;
  throw Error("unknown residual mode '" + std::string(name) + "'");
}

StageSpec::StageSpec(BranchSpec msb, BranchSpec lsb, ResidualMode residual)
    : msb_(std::move(msb)), lsb_(std::move(lsb)), residual_(residual) {
  if (msb_.scale() != lsb_.scale()) {
    throw Error("MSB and LSB branches disagree on the upscale factor");
  }
}

int ModelSpec::total_upscale() const {
  int total = 1;
  for (const auto& s : stages) total *= s.upscale();
  return total;
}

std::size_t lut_size_bytes(const LutTable& table) { return table.size_bytes(); }

std::size_t lut_size_bytes(const BranchSpec& branch) {
  std::size_t total = 0;
  for (const auto& k : branch.kernels()) total += lut_size_bytes(k.table);
  return total;
}

std::size_t lut_size_bytes(const StageSpec& stage) {
  return lut_size_bytes(stage.msb()) + lut_size_bytes(stage.lsb());
}

std::size_t lut_size_bytes(const ModelSpec& model) {
  std::size_t total = 0;
  for (const auto& s : model.stages) total += lut_size_bytes(s);
  return total;
}

std::string format_size(std::size_t bytes) {
  char buf[64];
  if (bytes < 1024) {
    std::snprintf(buf, sizeof buf, "%zu B", bytes);
  } else if (bytes < 1024 * 1024) {
    std::snprintf(buf, sizeof buf, "%.1f KB", static_cast<double>(bytes) / 1024.0);
  } else {
    std::snprintf(buf, sizeof buf, "%.2f MB", static_cast<double>(bytes) / (1024.0 * 1024.0));
  }
  return buf;
}

ModelShape ModelShape::hklut_s() {
  ModelShape s;
  s.upscales = {2, 2};
  return s;
}

ModelShape ModelShape::hklut_l() {
  ModelShape s;
  s.upscales = {2, 1, 2};
  return s;
}

ModelShape ModelShape::parse(std::string_view text) {
  if (text == "hklut-s") return hklut_s();
  if (text == "hklut-l") return hklut_l();
  const auto slash = text.find('/');
  const auto at = text.find('@');
  if (slash == std::string_view::npos || at == std::string_view::npos || slash > at) {
    throw Error("bad model shape '" + std::string(text) + "', expected e.g. HDB/HD@2x2");
  }
  ModelShape shape;
  shape.msb_family = std::string(text.substr(0, slash));
  shape.lsb_family = std::string(text.substr(slash + 1, at - slash - 1));
  kernel_family(shape.msb_family);
  kernel_family(shape.lsb_family);
  std::string_view rest = text.substr(at + 1);
  while (!rest.empty()) {
    const auto x = rest.find('x');
    const std::string_view part = rest.substr(0, x);
    int r = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), r);
    if (ec != std::errc() || ptr != part.data() + part.size() || r < 1 || r > 255) {
      throw Error("bad upscale factor in shape '" + std::string(text) + "'");
    }
    shape.upscales.push_back(r);
    if (x == std::string_view::npos) break;
    rest = rest.substr(x + 1);
  }
  if (shape.upscales.empty()) throw Error("shape '" + std::string(text) + "' has no stages");
  return shape;
}

ModelSpec build_model(const ModelShape& shape, const TableFactory& factory) {
  const auto msb_patterns = kernel_family(shape.msb_family);
  const auto lsb_patterns = kernel_family(shape.lsb_family);
  ModelSpec model;
  for (int s = 0; s < static_cast<int>(shape.upscales.size()); ++s) {
    const int r = shape.upscales[s];
    auto make_branch = [&](Branch which, const std::vector<KernelPattern>& patterns) {
      std::vector<LutKernel> kernels;
      for (int k = 0; k < static_cast<int>(patterns.size()); ++k) {
        TableSlot slot{s, which, k, &patterns[k], shape.levels, r};
        kernels.push_back({patterns[k], factory(slot)});
      }
      return BranchSpec(std::move(kernels));
    };
    model.stages.emplace_back(make_branch(Branch::kMsb, msb_patterns),
                              make_branch(Branch::kLsb, lsb_patterns), shape.residual);
  }
  return model;
}

ModelSpec zero_model(const ModelShape& shape) {
  return build_model(shape, [](const TableSlot& slot) {
    return LutTable::zeros(slot.levels, slot.pattern->size(), slot.scale);
  });
}

}  // namespace hklut
