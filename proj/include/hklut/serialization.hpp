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

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "hklut/model.hpp"

namespace hklut {

// .hklut layout (all counts one byte, no padding):
//   "HKLT" | version=1 | n_stages
//   per stage: upscale | residual mode (0 nearest, 1 bilinear, 2 bicubic)
//     MSB branch, then LSB branch:
//       n_kernels, per kernel: n | v | n x (int8 dy, int8 dx) | v^n * r^2 int8 entries
inline constexpr char kMagic[4] = {'H', 'K', 'L', 'T'};
inline constexpr std::uint8_t kFormatVersion = 1;

enum class FormatErrorKind {
  kBadMagic,
  kUnsupportedVersion,
  kTruncated,
  kTrailingBytes,
  kInvalidModel,
  kIo,
};

std::string_view to_string(FormatErrorKind kind);

class FormatError : public Error {
 public:
  FormatError(FormatErrorKind kind, const std::string& what) : Error(what), kind_(kind) {}
  FormatErrorKind kind() const { return kind_; }

 private:
  FormatErrorKind kind_;
};

// Header and geometry bytes; the file size is this plus lut_size_bytes(model).
std::size_t header_bytes(const ModelSpec& model);

// Returns the number of bytes written.
std::size_t save_model(const ModelSpec& model, std::ostream& sink);
ModelSpec load_model(std::istream& source);

void save_model_file(const ModelSpec& model, const std::filesystem::path& path);
// Also reads the sidecar manifest, if any, into metadata.
ModelSpec load_model_file(const std::filesystem::path& path);

// Sidecar "<model>.manifest": one "key=value" per line, no semantics.
std::filesystem::path manifest_path(const std::filesystem::path& model_path);
void write_manifest(const std::map<std::string, std::string>& metadata, const std::filesystem::path& path);
std::map<std::string, std::string> read_manifest(const std::filesystem::path& path);

// Human-readable summary; ends with a "total <size>" line.
std::string inspect(const ModelSpec& model);

}  // namespace hklut
