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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "hklut/resample.hpp"

namespace hklut {

namespace {

void check_same_dims(const ImagePlane& a, const ImagePlane& b) {
  if (a.height() != b.height() || a.width() != b.width()) {
    throw Error("image dimensions differ: " + std::to_string(a.height()) + "x" + std::to_string(a.width()) + " vs " +
                std::to_string(b.height()) + "x" + std::to_string(b.width()));
  }
}

ImagePlane shaved(const ImagePlane& p, int shave) {
  if (shave <= 0) return p;
  if (2 * shave >= p.height() || 2 * shave >= p.width()) throw Error("border shave removes the whole image");
  return crop(p, shave, shave, p.height() - 2 * shave, p.width() - 2 * shave);
}

// Valid-mode separable filtering of a double image.
std::vector<double> filter_valid(const std::vector<double>& src, int h, int w, const std::vector<double>& g) {
  const int k = static_cast<int>(g.size());
  const int oh = h - k + 1;
  const int ow = w - k + 1;
  std::vector<double> rows(static_cast<std::size_t>(h) * ow);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < k; ++i) acc += g[i] * src[static_cast<std::size_t>(y) * w + x + i];
      rows[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(oh) * ow);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < k; ++i) acc += g[i] * rows[static_cast<std::size_t>(y + i) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  }
  return out;
}

std::uint8_t round_clamp(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

}  // namespace

double psnr(const ImagePlane& a, const ImagePlane& b, int shave) {
  check_same_dims(a, b);
  const ImagePlane sa = shaved(a, shave);
  const ImagePlane sb = shaved(b, shave);
  double sse = 0.0;
  auto pa = sa.pixels();
  auto pb = sb.pixels();
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const double d = static_cast<double>(pa[i]) - static_cast<double>(pb[i]);
    sse += d * d;
  }
  const double mse = sse / static_cast<double>(pa.size());
  if (mse == 0.0) return kInfinitePsnr;
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double ssim(const ImagePlane& a, const ImagePlane& b, int shave) {
  check_same_dims(a, b);
  const ImagePlane sa = shaved(a, shave);
  const ImagePlane sb = shaved(b, shave);
  const int h = sa.height();
  const int w = sa.width();
  int k = std::min({11, h, w});
  if (k % 2 == 0) --k;
  std::vector<double> g(k);
  const double sigma = 1.5;
  for (int i = 0; i < k; ++i) {
    const double d = i - (k - 1) / 2.0;
    g[i] = std::exp(-d * d / (2.0 * sigma * sigma));
  }
  const double gs = std::accumulate(g.begin(), g.end(), 0.0);
  for (double& v : g) v /= gs;

  const std::size_t n = static_cast<std::size_t>(h) * w;
  std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = sa.pixels()[i];
    y[i] = sb.pixels()[i];
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto mx = filter_valid(x, h, w, g);
  const auto my = filter_valid(y, h, w, g);
  const auto mxx = filter_valid(xx, h, w, g);
  const auto myy = filter_valid(yy, h, w, g);
  const auto mxy = filter_valid(xy, h, w, g);
  const double c1 = (0.01 * 255.0) * (0.01 * 255.0);
  const double c2 = (0.03 * 255.0) * (0.03 * 255.0);
  double total = 0.0;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    const double vx = mxx[i] - mx[i] * mx[i];
    const double vy = myy[i] - my[i] * my[i];
    const double cov = mxy[i] - mx[i] * my[i];
    total += ((2.0 * mx[i] * my[i] + c1) * (2.0 * cov + c2)) /
             ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
  }
  return total / static_cast<double>(mx.size());
}

ImagePlane to_luma(const Image& rgb) {
  if (rgb.channels == 1) return split_channels(rgb).front();
  ImagePlane y(rgb.height, rgb.width);
  for (int r = 0; r < rgb.height; ++r) {
    for (int c = 0; c < rgb.width; ++c) {
      const double v = 16.0 + (65.738 * rgb.at(r, c, 0) + 129.057 * rgb.at(r, c, 1) + 25.064 * rgb.at(r, c, 2)) / 256.0;
      y.at(r, c) = round_clamp(v);
    }
  }
  return y;
}

YCbCrPlanes rgb_to_ycbcr(const Image& rgb) {
  if (rgb.channels != 3) throw Error("YCbCr conversion needs an RGB image");
  YCbCrPlanes out{to_luma(rgb), ImagePlane(rgb.height, rgb.width), ImagePlane(rgb.height, rgb.width)};
  for (int r = 0; r < rgb.height; ++r) {
    for (int c = 0; c < rgb.width; ++c) {
      const double R = rgb.at(r, c, 0), G = rgb.at(r, c, 1), B = rgb.at(r, c, 2);
      out.cb.at(r, c) = round_clamp(128.0 + (-37.945 * R - 74.494 * G + 112.439 * B) / 256.0);
      out.cr.at(r, c) = round_clamp(128.0 + (112.439 * R - 94.154 * G - 18.285 * B) / 256.0);
    }
  }
  return out;
}

Image ycbcr_to_rgb(const YCbCrPlanes& p) {
  const int h = p.y.height();
  const int w = p.y.width();
  Image out(h, w, 3);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const double Y = p.y.at(r, c) - 16.0, Cb = p.cb.at(r, c) - 128.0, Cr = p.cr.at(r, c) - 128.0;
      out.at(r, c, 0) = round_clamp((298.082 * Y + 408.583 * Cr) / 256.0);
      out.at(r, c, 1) = round_clamp((298.082 * Y - 100.291 * Cb - 208.120 * Cr) / 256.0);
      out.at(r, c, 2) = round_clamp((298.082 * Y + 516.412 * Cb) / 256.0);
    }
  }
  return out;
}

EnergyCosts EnergyCosts::parse(std::string_view text) {
  EnergyCosts costs;
  const std::map<std::string, double EnergyCosts::*> fields = {
      {"int8_add", &EnergyCosts::int8_add},     {"int32_add", &EnergyCosts::int32_add},
      {"int8_mult", &EnergyCosts::int8_mult},   {"int32_mult", &EnergyCosts::int32_mult},
      {"float_add", &EnergyCosts::float_add},   {"float_mult", &EnergyCosts::float_mult},
      {"lookup", &EnergyCosts::lookup},
  };
  std::istringstream is{std::string(text)};
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty() || line == "[energy]") continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error("energy config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = fields.find(key);
    if (it == fields.end()) throw Error("energy config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    try {
      std::size_t used = 0;
      costs.*(it->second) = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw Error("energy config line " + std::to_string(lineno) + ": bad number '" + value + "'");
    }
  }
  return costs;
}

EnergyCosts EnergyCosts::load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot read energy config " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse(ss.str());
}

double OpCounts::energy_pj(const EnergyCosts& c) const {
  return static_cast<double>(lookups) * c.lookup + static_cast<double>(int8_adds) * c.int8_add +
         static_cast<double>(int32_adds) * c.int32_add + static_cast<double>(int8_mults) * c.int8_mult +
         static_cast<double>(int32_mults) * c.int32_mult + static_cast<double>(float_adds) * c.float_add +
         static_cast<double>(float_mults) * c.float_mult;
}

OpCounts& OpCounts::operator+=(const OpCounts& o) {
  lookups += o.lookups;
  int8_adds += o.int8_adds;
  int32_adds += o.int32_adds;
  int8_mults += o.int8_mults;
  int32_mults += o.int32_mults;
  float_adds += o.float_adds;
  float_mults += o.float_mults;
  return *this;
}

namespace {

OpCounts branch_ops(const BranchSpec& b, std::uint64_t pixels) {
  OpCounts ops;
  const std::uint64_t cells = static_cast<std::uint64_t>(b.scale()) * b.scale();
  std::uint64_t terms = 0;
  for (const auto& k : b.kernels()) {
    const std::uint64_t rot = static_cast<std::uint64_t>(k.pattern.rotations());
    ops.lookups += pixels * rot;
    ops.int32_adds += pixels * rot * static_cast<std::uint64_t>(k.pattern.size() - 1);
    terms += rot;
  }
  ops.int32_adds += pixels * (terms - 1) * cells;
  ops.int32_adds += pixels * cells * 2;
  ops.int32_mults += pixels * cells;
  return ops;
}

OpCounts residual_ops(ResidualMode mode, int r, std::uint64_t in_h, std::uint64_t in_w) {
  OpCounts ops;
  if (mode == ResidualMode::kNearest || r == 1) return ops;
  const auto phases = resample_phases(r, mode);
  std::uint64_t taps = 0;
  for (const auto& p : phases) taps += p.size();
  // Horizontal pass covers in_h rows of in_w * r outputs, vertical pass
  // in_h * r rows; `taps` summed over phases covers r outputs per source.
  const std::uint64_t horiz = in_h * in_w * taps;
  const std::uint64_t vert = in_w * static_cast<std::uint64_t>(r) * in_h * taps;
  ops.int32_mults += horiz + vert;
  ops.int32_adds += horiz + vert;
  ops.int32_adds += in_h * in_w * static_cast<std::uint64_t>(r) * r * 2;
  return ops;
}

}  // namespace

OpCounts estimate_ops(const ModelSpec& model, int out_height, int out_width) {
  OpCounts total;
  if (model.stages.empty()) return total;
  if (out_height < 1 || out_width < 1) throw Error("output dimensions must be positive");
  const int up = model.total_upscale();
  if (out_height % up != 0 || out_width % up != 0) {
    throw Error("output dimensions must be multiples of the model upscale " + std::to_string(up));
  }
  std::uint64_t h = static_cast<std::uint64_t>(out_height / up);
  std::uint64_t w = static_cast<std::uint64_t>(out_width / up);
  for (const auto& s : model.stages) {
    const std::uint64_t pixels = h * w;
    const std::uint64_t r = static_cast<std::uint64_t>(s.upscale());
    const std::uint64_t cells = pixels * r * r;
    total.int8_adds += 2 * pixels;
    total += branch_ops(s.msb(), pixels);
    total += branch_ops(s.lsb(), pixels);
    total += residual_ops(s.residual(), s.upscale(), h, w);
    total.int32_adds += 4 * cells;
    h *= r;
    w *= r;
  }
  return total;
}

OpCounts estimate_interpolated_lut_ops(const InterpolatedLutConfig& c, int out_height, int out_width) {
  OpCounts ops;
  const std::uint64_t pixels =
      static_cast<std::uint64_t>(out_height / c.scale) * static_cast<std::uint64_t>(out_width / c.scale);
  const std::uint64_t cells = static_cast<std::uint64_t>(c.scale) * c.scale;
  const std::uint64_t n = static_cast<std::uint64_t>(c.inputs);
  const std::uint64_t vertices = n + 1;
  const std::uint64_t queries = pixels * static_cast<std::uint64_t>(c.rotations);
  // Per query: split each input into a level index and a fraction, sort the
  // fractions, then blend n + 1 simplex vertices in floating point.
  ops.int8_adds += queries * (2 * n + n * (n - 1) / 2);
  ops.int8_adds += queries * n;  // vertex weights from sorted fractions
  ops.lookups += queries * vertices;
  ops.int32_adds += queries * vertices * (n - 1);
  ops.float_mults += queries * vertices * cells;
  ops.float_adds += queries * n * cells;
  // Rotation ensemble average and residual add.
  ops.float_adds += pixels * static_cast<std::uint64_t>(c.rotations - 1) * cells;
  ops.float_mults += pixels * cells;
  ops.float_adds += pixels * cells;
  ops.int32_adds += pixels * cells * 2;
  return ops;
}

BenchStats bench_runtime(const ModelSpec& model, int height, int width, int repeats, const ForwardOptions& opts) {
  if (repeats < 1) throw Error("repeats must be >= 1");
  std::mt19937_64 rng(20240131);
  std::uniform_int_distribution<int> dist(0, 255);
  ImagePlane input(height, width);
  for (auto& v : input.pixels()) v = static_cast<std::uint8_t>(dist(rng));

  BenchStats stats;
  volatile std::size_t sink = model_forward(input, model, opts).size();
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    const ImagePlane out = model_forward(input, model, opts);
    const auto t1 = std::chrono::steady_clock::now();
    sink = sink + out.size();
    stats.samples_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  const double n = static_cast<double>(stats.samples_ms.size());
  stats.mean_ms = std::accumulate(stats.samples_ms.begin(), stats.samples_ms.end(), 0.0) / n;
  double var = 0.0;
  for (double s : stats.samples_ms) var += (s - stats.mean_ms) * (s - stats.mean_ms);
  stats.stddev_ms = stats.samples_ms.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
  return stats;
}

std::vector<DatasetSummary> EvalReport::summaries() const {
  std::vector<DatasetSummary> out;
  for (const auto& s : images) {
    auto it = std::ranges::find(out, s.dataset, &DatasetSummary::dataset);
    if (it == out.end()) {
      out.push_back({s.dataset});
      it = std::prev(out.end());
    }
    it->mean_psnr += s.psnr;
    it->mean_ssim += s.ssim;
    ++it->images;
  }
  for (auto& d : out) {
    d.mean_psnr /= static_cast<double>(d.images);
    d.mean_ssim /= static_cast<double>(d.images);
  }
  return out;
}

void EvalReport::write_text(std::ostream& os) const {
  os << std::fixed;
  os << "method " << method << ", x" << scale << '\n';
  for (const auto& s : images) {
    os << "  " << s.dataset << '/' << s.image << "  PSNR " << std::setprecision(2) << s.psnr << " dB  SSIM "
       << std::setprecision(4) << s.ssim << (s.generated_lr ? "  [generated LR]" : "") << '\n';
  }
  for (const auto& d : summaries()) {
    os << d.dataset << ": " << d.images << " images, mean PSNR " << std::setprecision(2) << d.mean_psnr
       << " dB, mean SSIM " << std::setprecision(4) << d.mean_ssim << '\n';
  }
  if (model_bytes > 0) os << "model size " << format_size(model_bytes) << " (" << model_bytes << " B)\n";
  os << "ops per image: lookups " << ops.lookups << ", int adds " << ops.int8_adds + ops.int32_adds
     << ", int mults " << ops.int8_mults + ops.int32_mults << ", float ops " << ops.float_ops() << '\n';
  os << "energy " << std::setprecision(1) << energy_pj << " pJ, wall " << std::setprecision(1) << wall_ms << " ms\n";
  os << std::defaultfloat;
}

void EvalReport::write_key_values(std::ostream& os) const {
  os << std::setprecision(10);
  for (const auto& s : images) {
    os << s.dataset << ' ' << s.image << " psnr " << s.psnr << '\n';
    os << s.dataset << ' ' << s.image << " ssim " << s.ssim << '\n';
  }
  for (const auto& d : summaries()) {
    os << d.dataset << " mean psnr " << d.mean_psnr << '\n';
    os << d.dataset << " mean ssim " << d.mean_ssim << '\n';
  }
  os << "- - size_bytes " << model_bytes << '\n';
  os << "- - lookups " << ops.lookups << '\n';
  os << "- - int_adds " << ops.int8_adds + ops.int32_adds << '\n';
  os << "- - int_mults " << ops.int8_mults + ops.int32_mults << '\n';
  os << "- - float_ops " << ops.float_ops() << '\n';
  os << "- - energy_pj " << energy_pj << '\n';
  os << "- - wall_ms " << wall_ms << '\n';
}

}  // namespace hklut
