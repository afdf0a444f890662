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

#include "hklut/serialization.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

namespace hklut {

std::string_view to_string(FormatErrorKind kind) {
  switch (kind) {
    case FormatErrorKind::kBadMagic: return "bad magic";
    case FormatErrorKind::kUnsupportedVersion: return "unsupported version";
    case FormatErrorKind::kTruncated: return "truncated";
    case FormatErrorKind::kTrailingBytes: return "trailing bytes";
    case FormatErrorKind::kInvalidModel: return "invalid model";
    case FormatErrorKind::kIo: return "i/o";
  }
  return "unknown";
}

namespace {

std::size_t branch_header_bytes(const BranchSpec& b) {
  std::size_t n = 1;
  for (const auto& k : b.kernels()) n += 2 + 2 * static_cast<std::size_t>(k.pattern.size());
  return n;
}

void require_byte(std::size_t value, const char* what) {
  if (value > 255) throw FormatError(FormatErrorKind::kInvalidModel, std::string(what) + " does not fit in one byte");
}

class Writer {
 public:
  explicit Writer(std::ostream& os) : os_(os) {}

  void u8(std::uint8_t v) { raw(&v, 1); }
  void i8(std::int8_t v) { raw(&v, 1); }
  void raw(const void* p, std::size_t n) {
    os_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    if (!os_) throw FormatError(FormatErrorKind::kIo, "write to model sink failed");
    count_ += n;
  }
  std::size_t count() const { return count_; }

 private:
  std::ostream& os_;
  std::size_t count_ = 0;
};

void write_branch(Writer& w, const BranchSpec& b) {
  require_byte(b.kernels().size(), "kernel count");
  w.u8(static_cast<std::uint8_t>(b.kernels().size()));
  for (const auto& k : b.kernels()) {
    if (k.pattern.rotations() != 4) {
      throw FormatError(FormatErrorKind::kInvalidModel, "file format stores only 4-rotation kernels");
    }
    w.u8(static_cast<std::uint8_t>(k.table.inputs()));
    w.u8(static_cast<std::uint8_t>(k.table.levels()));
    for (Offset o : k.pattern.offsets()) {
      w.i8(static_cast<std::int8_t>(o.dy));
      w.i8(static_cast<std::int8_t>(o.dx));
    }
    w.raw(k.table.entries().data(), k.table.entries().size());
  }
}

class Reader {
 public:
  explicit Reader(std::istream& is) : is_(is) {}

  std::uint8_t u8(const char* what) {
    std::uint8_t v;
    raw(&v, 1, what);
    return v;
  }
  std::int8_t i8(const char* what) {
    std::int8_t v;
    raw(&v, 1, what);
    return v;
  }
  void raw(void* p, std::size_t n, const std::string& what) {
    is_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    const auto got = static_cast<std::size_t>(is_.gcount());
    offset_ += got;
    if (got != n) {
      throw FormatError(FormatErrorKind::kTruncated, "stream ended at byte " + std::to_string(offset_) +
                                                         " while reading " + what);
    }
  }
  // Reads up to n bytes in chunks so a corrupt header cannot force a huge
  // allocation before truncation is detected.
  std::vector<std::int8_t> block(std::size_t n, const std::string& what) {
    std::vector<std::int8_t> out;
    constexpr std::size_t kChunk = 1 << 20;
    while (out.size() < n) {
      const std::size_t take = std::min(kChunk, n - out.size());
      const std::size_t at = out.size();
      out.resize(at + take);
      raw(out.data() + at, take, what);
    }
    return out;
  }
  bool at_end() { return is_.peek() == std::char_traits<char>::eof(); }
  std::size_t offset() const { return offset_; }

 private:
  std::istream& is_;
  std::size_t offset_ = 0;
};

BranchSpec read_branch(Reader& rd, int scale, const std::string& where) {
  const int n_kernels = rd.u8("kernel count");
  if (n_kernels == 0) throw FormatError(FormatErrorKind::kInvalidModel, where + ": branch has no kernels");
  std::vector<LutKernel> kernels;
  for (int k = 0; k < n_kernels; ++k) {
    const std::string loc = where + " kernel " + std::to_string(k);
    const int n = rd.u8("input count");
    const int v = rd.u8("levels");
    if (n < 1 || n > KernelPattern::kMaxInputs) {
      throw FormatError(FormatErrorKind::kInvalidModel, loc + ": input count " + std::to_string(n) + " not in [1, 4]");
    }
    std::vector<Offset> offsets;
    for (int i = 0; i < n; ++i) {
      const int dy = rd.i8("offset");
      const int dx = rd.i8("offset");
      offsets.push_back({dy, dx});
    }
    try {
      KernelPattern pattern(identify_pattern(offsets), offsets, 4);
      const std::size_t count = entry_count(v, n) * static_cast<std::size_t>(scale) * scale;
      auto entries = rd.block(count, loc + " entries");
      auto bad = std::ranges::find(entries, std::int8_t{-128});
      if (bad != entries.end()) {
        const auto index = static_cast<std::size_t>(bad - entries.begin());
        const std::size_t bs = static_cast<std::size_t>(scale) * scale;
        throw FormatError(FormatErrorKind::kInvalidModel,
                          loc + ": entry " + std::to_string(index / bs) + " cell " + std::to_string(index % bs) +
                              " holds -128, outside [-127, 127]");
      }
      kernels.push_back({std::move(pattern), LutTable(v, n, scale, std::move(entries))});
    } catch (const FormatError&) {
      throw;
    } catch (const Error& e) {
      throw FormatError(FormatErrorKind::kInvalidModel, loc + ": " + e.what());
    }
  }
  try {
    return BranchSpec(std::move(kernels));
  } catch (const Error& e) {
    throw FormatError(FormatErrorKind::kInvalidModel, where + ": " + e.what());
  }
}

}  // namespace

std::size_t header_bytes(const ModelSpec& model) {
  std::size_t n = sizeof kMagic + 2;
  for (const auto& s : model.stages) n += 2 + branch_header_bytes(s.msb()) + branch_header_bytes(s.lsb());
  return n;
}

std::size_t save_model(const ModelSpec& model, std::ostream& sink) {
  require_byte(model.stages.size(), "stage count");
  Writer w(sink);
  w.raw(kMagic, sizeof kMagic);
  w.u8(kFormatVersion);
  w.u8(static_cast<std::uint8_t>(model.stages.size()));
  for (const auto& s : model.stages) {
    w.u8(static_cast<std::uint8_t>(s.upscale()));
    w.u8(static_cast<std::uint8_t>(s.residual()));
    write_branch(w, s.msb());
    write_branch(w, s.lsb());
  }
  sink.flush();
  if (!sink) throw FormatError(FormatErrorKind::kIo, "flushing model sink failed");
  return w.count();
}

ModelSpec load_model(std::istream& source) {
  Reader rd(source);
  for (char expected : kMagic) {
    char c = 0;
    rd.raw(&c, 1, "magic");
    if (c != expected) throw FormatError(FormatErrorKind::kBadMagic, "not an .hklut file (bad magic)");
  }
  const int version = rd.u8("version");
  if (version != kFormatVersion) {
    throw FormatError(FormatErrorKind::kUnsupportedVersion, "unsupported .hklut version " + std::to_string(version));
  }
  const int n_stages = rd.u8("stage count");
  ModelSpec model;
  for (int s = 0; s < n_stages; ++s) {
    const std::string where = "stage " + std::to_string(s);
    const int r = rd.u8("upscale");
    const int mode = rd.u8("residual mode");
    if (r < 1) throw FormatError(FormatErrorKind::kInvalidModel, where + ": upscale must be >= 1");
    if (mode > 2) {
      throw FormatError(FormatErrorKind::kInvalidModel, where + ": unknown residual mode " + std::to_string(mode));
    }
    BranchSpec msb = read_branch(rd, r, where + " msb");
    BranchSpec lsb = read_branch(rd, r, where + " lsb");
    model.stages.emplace_back(std::move(msb), std::move(lsb), static_cast<ResidualMode>(mode));
  }
  if (!rd.at_end()) {
    throw FormatError(FormatErrorKind::kTrailingBytes,
                      "unexpected bytes after offset " + std::to_string(rd.offset()));
  }
  return model;
}

void save_model_file(const ModelSpec& model, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw FormatError(FormatErrorKind::kIo, "cannot open " + path.string() + " for writing");
  save_model(model, os);
  if (!model.metadata.empty()) write_manifest(model.metadata, manifest_path(path));
}

ModelSpec load_model_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError(FormatErrorKind::kIo, "cannot open " + path.string());
  ModelSpec model = load_model(is);
  if (std::filesystem::exists(manifest_path(path))) model.metadata = read_manifest(manifest_path(path));
  return model;
}

std::filesystem::path manifest_path(const std::filesystem::path& model_path) {
  auto p = model_path;
  p += ".manifest";
  return p;
}

void write_manifest(const std::map<std::string, std::string>& metadata, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw FormatError(FormatErrorKind::kIo, "cannot write manifest " + path.string());
  for (const auto& [k, v] : metadata) {
    if (k.find_first_of("=\n") != std::string::npos || v.find('\n') != std::string::npos) {
      throw Error("manifest keys may not contain '=' or newlines, values may not contain newlines");
    }
    os << k << '=' << v << '\n';
  }
}

std::map<std::string, std::string> read_manifest(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw FormatError(FormatErrorKind::kIo, "cannot read manifest " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

std::string inspect(const ModelSpec& model) {
  std::ostringstream os;
  os << "stages " << model.stages.size() << ", total upscale x" << model.total_upscale() << '\n';
  for (const auto& [k, v] : model.metadata) os << k << ": " << v << '\n';
  for (std::size_t s = 0; s < model.stages.size(); ++s) {
    const auto& st = model.stages[s];
    os << "stage " << s << ": x" << st.upscale() << ", residual " << to_string(st.residual()) << ", "
       << format_size(lut_size_bytes(st)) << '\n';
    auto branch = [&](const char* name, const BranchSpec& b) {
      os << "  " << name << ": " << b.kernels().size() << " kernel(s), " << format_size(lut_size_bytes(b)) << '\n';
      for (const auto& k : b.kernels()) {
        os << "    " << k.pattern.name() << " [";
        for (std::size_t i = 0; i < k.pattern.offsets().size(); ++i) {
          const Offset o = k.pattern.offsets()[i];
          os << (i ? " " : "") << '(' << o.dy << ',' << o.dx << ')';
        }
        os << "] v=" << k.table.levels() << " n=" << k.table.inputs() << " r=" << k.table.scale() << "  "
           << lut_size_bytes(k.table) << " B\n";
      }
    };
    branch("msb", st.msb());
    branch("lsb", st.lsb());
  }
  const std::size_t total = lut_size_bytes(model);
  os << "total " << format_size(total) << " (" << total << " B)\n";
  return os.str();
}

}  // namespace hklut
