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

#include "hklut/dataset.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <memory>

#include "hklut/resample.hpp"

namespace hklut {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct PngErrorState {
  std::jmp_buf jump;
  char message[256] = {};
};

void png_error_handler(png_structp png, png_const_charp msg) {
  auto* state = static_cast<PngErrorState*>(png_get_error_ptr(png));
  std::snprintf(state->message, sizeof state->message, "%s", msg);
  std::longjmp(state->jump, 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

// Keeps only trivially destructible locals between setjmp and libpng calls.
bool decode_png(std::FILE* fp, PngErrorState& err, int& height, int& width, int& channels,
                std::vector<std::uint8_t>& pixels) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &err, png_error_handler, png_warning_handler);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return false;
  }
  std::vector<png_bytep> rows;
  if (setjmp(err.jump)) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_init_io(png, fp);
  png_read_info(png, info);
  const png_byte color = png_get_color_type(png, info);
  const png_byte depth = png_get_bit_depth(png, info);
  if (depth == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  height = static_cast<int>(png_get_image_height(png, info));
  width = static_cast<int>(png_get_image_width(png, info));
  channels = png_get_channels(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  pixels.resize(stride * static_cast<std::size_t>(height));
  rows.resize(height);
  for (int y = 0; y < height; ++y) rows[y] = pixels.data() + stride * y;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

bool encode_png(std::FILE* fp, PngErrorState& err, const Image& image) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &err, png_error_handler, png_warning_handler);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  std::vector<png_bytep> rows(image.height);
  if (setjmp(err.jump)) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
               image.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(image.width) * image.channels;
  for (int y = 0; y < image.height; ++y) {
    rows[y] = const_cast<png_bytep>(image.data.data() + stride * y);
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

}  // namespace

Image read_png(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw Error("cannot open " + path.string());
  png_byte sig[8];
  if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw Error(path.string() + ": not a PNG file");
  }
  std::rewind(fp.get());
  PngErrorState err;
  int h = 0, w = 0, c = 0;
  std::vector<std::uint8_t> pixels;
  if (!decode_png(fp.get(), err, h, w, c, pixels)) {
    throw Error(path.string() + ": malformed PNG: " + err.message);
  }
  if (c != 1 && c != 3) throw Error(path.string() + ": unsupported channel layout");
  Image img(h, w, c);
  img.data = std::move(pixels);
  return img;
}

void write_png(const Image& image, const std::filesystem::path& path) {
  if (image.channels != 1 && image.channels != 3) throw Error("PNG writer takes 1 or 3 channels");
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw Error("cannot open " + path.string() + " for writing");
  PngErrorState err;
  if (!encode_png(fp.get(), err, image)) throw Error(path.string() + ": PNG encoding failed: " + err.message);
  if (std::fflush(fp.get()) != 0) throw Error(path.string() + ": write failed");
}

DatasetIndex index_dataset(const std::filesystem::path& dataset_dir, int scale, const IndexOptions& opts) {
  namespace fs = std::filesystem;
  if (scale != 2 && scale != 4) throw Error("dataset scale must be 2 or 4");
  const fs::path hr_dir = dataset_dir / "HR";
  const fs::path lr_dir = dataset_dir / "LR_bicubic" / ("X" + std::to_string(scale));
  if (!fs::is_directory(hr_dir)) throw Error("no HR directory under " + dataset_dir.string());

  std::vector<fs::path> hr_files;
  for (const auto& e : fs::directory_iterator(hr_dir)) {
    if (e.is_regular_file() && e.path().extension() == ".png") hr_files.push_back(e.path());
  }
  if (hr_files.empty()) throw Error("dataset " + dataset_dir.string() + " is empty");
  std::ranges::sort(hr_files);

  DatasetIndex index;
  index.name = dataset_dir.filename().string();
  if (index.name.empty()) index.name = dataset_dir.parent_path().filename().string();
  for (const auto& hr : hr_files) {
    DatasetRecord rec;
    rec.name = hr.stem().string();
    rec.hr = hr;
    rec.scale = scale;
    for (const auto& candidate : {lr_dir / (rec.name + ".png"), lr_dir / (rec.name + "x" + std::to_string(scale) + ".png")}) {
      if (fs::is_regular_file(candidate)) {
        rec.lr = candidate;
        break;
      }
    }
    if (rec.lr.empty()) {
      if (!opts.allow_generated_lr) {
        throw Error("missing LR partner for " + hr.string() + " under " + lr_dir.string());
      }
      rec.generated_lr = true;
    }
    index.records.push_back(std::move(rec));
  }
  return index;
}

std::vector<std::pair<int, double>> downscale_weights(int output_index, int scale) {
  const double center = (output_index + 0.5) * scale - 0.5;
  const double support = 2.0 * scale;
  std::vector<std::pair<int, double>> taps;
  double total = 0.0;
  for (int i = static_cast<int>(std::floor(center - support)); i <= static_cast<int>(std::ceil(center + support)); ++i) {
    const double w = keys_cubic((i - center) / scale);
    if (w == 0.0) continue;
    taps.emplace_back(i, w);
    total += w;
  }
  for (auto& t : taps) t.second /= total;
  return taps;
}

ImagePlane make_lr(const ImagePlane& hr, int scale) {
  if (scale != 2 && scale != 4) throw Error("LR generation supports scale 2 or 4");
  const int h = hr.height();
  const int w = hr.width();
  const int oh = (h + scale - 1) / scale;
  const int ow = (w + scale - 1) / scale;
  std::vector<std::vector<std::pair<int, double>>> wy(oh), wx(ow);
  for (int o = 0; o < oh; ++o) wy[o] = downscale_weights(o, scale);
  for (int o = 0; o < ow; ++o) wx[o] = downscale_weights(o, scale);

  std::vector<double> tmp(static_cast<std::size_t>(h) * ow);
  for (int y = 0; y < h; ++y) {
    for (int ox = 0; ox < ow; ++ox) {
      double acc = 0.0;
      for (auto [i, wt] : wx[ox]) acc += wt * hr.at(y, std::clamp(i, 0, w - 1));
      tmp[static_cast<std::size_t>(y) * ow + ox] = acc;
    }
  }
  ImagePlane out(oh, ow);
  for (int oy = 0; oy < oh; ++oy) {
    for (int ox = 0; ox < ow; ++ox) {
      double acc = 0.0;
      for (auto [i, wt] : wy[oy]) acc += wt * tmp[static_cast<std::size_t>(std::clamp(i, 0, h - 1)) * ow + ox];
      out.at(oy, ox) = static_cast<std::uint8_t>(std::clamp(std::lround(acc), 0L, 255L));
    }
  }
  return out;
}

Image make_lr(const Image& hr, int scale) {
  auto planes = split_channels(hr);
  for (auto& p : planes) p = make_lr(p, scale);
  return merge_channels(planes);
}

namespace {

Image crop_image(const Image& img, int height, int width) {
  auto planes = split_channels(img);
  for (auto& p : planes) p = crop(p, 0, 0, height, width);
  return merge_channels(planes);
}

}  // namespace

EvalPair load_pair(const DatasetRecord& record) {
  EvalPair pair;
  pair.hr = read_png(record.hr);
  const int s = record.scale;
  if (record.generated_lr) {
    if (pair.hr.height < s || pair.hr.width < s) throw Error(record.name + ": HR smaller than the scale factor");
    pair.hr = crop_image(pair.hr, pair.hr.height / s * s, pair.hr.width / s * s);
    pair.lr = make_lr(pair.hr, s);
    return pair;
  }
  pair.lr = read_png(record.lr);
  if (pair.lr.channels != pair.hr.channels) throw Error(record.name + ": HR and LR channel counts differ");
  const int th = pair.lr.height * s;
  const int tw = pair.lr.width * s;
  if (th > pair.hr.height || tw > pair.hr.width) {
    throw Error(record.name + ": LR " + std::to_string(pair.lr.height) + "x" + std::to_string(pair.lr.width) +
                " is too large for HR " + std::to_string(pair.hr.height) + "x" + std::to_string(pair.hr.width));
  }
  if (th != pair.hr.height || tw != pair.hr.width) pair.hr = crop_image(pair.hr, th, tw);
  return pair;
}

}  // namespace hklut
