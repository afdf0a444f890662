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

#include "hklut/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <thread>

#include "hklut/dataset.hpp"
#include "hklut/inference.hpp"
#include "hklut/metrics.hpp"
#include "hklut/model.hpp"
#include "hklut/oracle.hpp"
#include "hklut/resample.hpp"
#include "hklut/serialization.hpp"
#include "hklut/verify.hpp"

namespace hklut::cli {

namespace fs = std::filesystem;

namespace {

enum class ChannelMode { kRgb, kY };

ChannelMode parse_channels(const std::string& s) {
  if (s == "rgb") return ChannelMode::kRgb;
  if (s == "y") return ChannelMode::kY;
  throw Error("--channels must be 'rgb' or 'y'");
}

ImagePlane upscale_like_residuals(ImagePlane plane, const ModelSpec& model) {
  for (const auto& s : model.stages) plane = upsample(plane, s.upscale(), s.residual());
  return plane;
}

Image super_resolve(const Image& img, const ModelSpec& model, ChannelMode mode, const ForwardOptions& opts) {
  if (mode == ChannelMode::kRgb || img.channels == 1) return model_forward(img, model, opts);
  YCbCrPlanes ycc = rgb_to_ycbcr(img);
  ycc.y = model_forward(ycc.y, model, opts);
  ycc.cb = upscale_like_residuals(ycc.cb, model);
  ycc.cr = upscale_like_residuals(ycc.cr, model);
  return ycbcr_to_rgb(ycc);
}

std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(in)) {
        if (e.is_regular_file() && e.path().extension() == ".png") found.push_back(e.path());
      }
      std::ranges::sort(found);
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.emplace_back(in);
    }
  }
  if (files.empty()) throw Error("no input images");
  return files;
}

oracle::LutFunction table_function(const std::string& kind, int scale, std::mt19937_64& rng, bool& random) {
  random = false;
  if (kind == "zero") return oracle::constant_function(0, scale);
  if (kind.rfind("constant:", 0) == 0) {
    const int c = std::stoi(kind.substr(9));
    if (c < -127 || c > 127) throw Error("constant must be in [-127, 127]");
    return oracle::constant_function(c, scale);
  }
  if (kind == "diff") return oracle::difference_function(scale);
  if (kind.rfind("random:", 0) == 0) {
    random = true;
    rng.seed(std::stoull(kind.substr(7)));
    return {};
  }
  throw Error("unknown table kind '" + kind + "' (zero, constant:C, diff, random:SEED)");
}

std::string default_datasets_root() {
  const char* env = std::getenv("HKLUT_DATASETS");
  return env ? env : "";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Integer lookup-table super-resolution engine", "hklut"};
  app.require_subcommand(1);

  // upscale
  auto* upscale = app.add_subcommand("upscale", "Super-resolve PNG images with an .hklut model");
  std::string up_model, up_output, up_channels = "rgb";
  std::vector<std::string> up_inputs;
  unsigned up_threads = 1;
  upscale->add_option("--model,-m", up_model, "Model file")->required();
  upscale->add_option("--output,-o", up_output, "Output directory")->required();
  upscale->add_option("--channels", up_channels, "rgb: every channel; y: luma only, chroma by residual mode")
      ->check(CLI::IsMember({"rgb", "y"}));
  upscale->add_option("--threads", up_threads, "Worker threads (0 = all cores)");
  upscale->add_option("inputs", up_inputs, "PNG files or directories")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate a model or a classical upscaler on benchmark datasets");
  std::string ev_model, ev_method, ev_root = default_datasets_root(), ev_channels = "rgb", ev_report, ev_energy;
  std::vector<std::string> ev_datasets = {"Set5"};
  int ev_scale = 4;
  int ev_shave = -1;
  unsigned ev_threads = 1;
  bool ev_allow_generated = false;
  auto* ev_model_opt = eval->add_option("--model,-m", ev_model, "Model file");
  eval->add_option("--method", ev_method, "Classical baseline instead of a model")
      ->check(CLI::IsMember({"nearest", "bilinear", "bicubic"}))
      ->excludes(ev_model_opt);
  eval->add_option("--datasets", ev_root, "Dataset root (default $HKLUT_DATASETS)");
  eval->add_option("--dataset,-d", ev_datasets, "Dataset names under the root");
  eval->add_option("--scale", ev_scale, "Upscale factor")->check(CLI::IsMember({2, 4}));
  eval->add_option("--shave", ev_shave, "Border pixels ignored by metrics (default: scale)");
  eval->add_option("--channels", ev_channels, "rgb or y")->check(CLI::IsMember({"rgb", "y"}));
  eval->add_option("--report", ev_report, "Write 'dataset image metric value' lines here");
  eval->add_option("--energy-config", ev_energy, "Energy cost table (key = value lines)");
  eval->add_option("--threads", ev_threads, "Worker threads (0 = all cores)");
  eval->add_flag("--allow-generated-lr", ev_allow_generated, "Synthesize missing LR images (flagged in reports)");

  // size / inspect
  auto* size = app.add_subcommand("size", "Print total table storage of a model");
  std::string size_model;
  size->add_option("model", size_model, "Model file")->required();
  auto* insp = app.add_subcommand("inspect", "Describe stages, kernels and table sizes");
  std::string insp_model;
  insp->add_option("model", insp_model, "Model file")->required();

  // verify
  auto* verify = app.add_subcommand("verify", "Check engine against the reference implementation");
  std::string vf_model;
  int vf_random = 0;
  int vf_cases = 20;
  std::uint64_t vf_seed = 1;
  unsigned vf_threads = 1;
  auto* vf_model_opt = verify->add_option("model", vf_model, "Model file");
  verify->add_option("--random", vf_random, "Number of random models instead of a file")->excludes(vf_model_opt);
  verify->add_option("--cases", vf_cases, "Images per suite and model");
  verify->add_option("--seed", vf_seed, "Random seed");
  verify->add_option("--threads", vf_threads, "Engine worker threads");

  // make-ref-lut
  auto* mk = app.add_subcommand("make-ref-lut", "Write an analytic or random .hklut model");
  std::string mk_kind = "zero", mk_shape = "hklut-s", mk_residual = "nearest", mk_out;
  int mk_levels = 16;
  mk->add_option("--kind", mk_kind, "zero | constant:C | diff | random:SEED");
  mk->add_option("--shape", mk_shape, "hklut-s | hklut-l | <MSB>/<LSB>@<r1>x<r2>...");
  mk->add_option("--residual", mk_residual, "Residual upsampler")->check(CLI::IsMember({"nearest", "bilinear", "bicubic"}));
  mk->add_option("--levels", mk_levels, "Quantization levels per input")->check(CLI::Range(16, 255));
  mk->add_option("--out,-o", mk_out, "Output path")->required();

  // bench
  auto* bench = app.add_subcommand("bench", "Time model inference on a random plane");
  std::string bn_model;
  int bn_height = 360, bn_width = 640, bn_repeats = 10;
  unsigned bn_threads = 1;
  bench->add_option("model", bn_model, "Model file")->required();
  bench->add_option("--height", bn_height, "Input height")->check(CLI::PositiveNumber);
  bench->add_option("--width", bn_width, "Input width")->check(CLI::PositiveNumber);
  bench->add_option("--repeats", bn_repeats, "Timed runs after one warm-up")->check(CLI::PositiveNumber);
  bench->add_option("--threads", bn_threads, "Worker threads (0 = all cores)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*upscale) {
      const ModelSpec model = load_model_file(up_model);
      const ChannelMode mode = parse_channels(up_channels);
      fs::create_directories(up_output);
      for (const auto& path : expand_inputs(up_inputs)) {
        const Image sr = super_resolve(read_png(path), model, mode, ForwardOptions{up_threads});
        const fs::path dst = fs::path(up_output) / path.filename().replace_extension(".png");
        write_png(sr, dst);
        out << path.string() << " -> " << dst.string() << " (" << sr.height << "x" << sr.width << ")\n";
      }
      return 0;
    }

    if (*eval) {
      if (ev_model.empty() && ev_method.empty()) throw Error("eval needs --model or --method");
      if (ev_root.empty()) throw Error("no dataset root: pass --datasets or set HKLUT_DATASETS");
      const ChannelMode mode = parse_channels(ev_channels);
      const int shave = ev_shave < 0 ? ev_scale : ev_shave;
      EvalReport report;
      report.scale = ev_scale;
      std::optional<ModelSpec> model;
      if (!ev_model.empty()) {
        model = load_model_file(ev_model);
        if (model->total_upscale() != ev_scale) {
          throw Error("model upscales x" + std::to_string(model->total_upscale()) + " but --scale is " +
                      std::to_string(ev_scale));
        }
        report.method = fs::path(ev_model).filename().string();
        report.model_bytes = lut_size_bytes(*model);
      } else {
        report.method = ev_method;
      }
      const EnergyCosts costs = ev_energy.empty() ? EnergyCosts{} : EnergyCosts::load(ev_energy);
      const auto t0 = std::chrono::steady_clock::now();
      for (const auto& name : ev_datasets) {
        const DatasetIndex index =
            index_dataset(fs::path(ev_root) / name, ev_scale, IndexOptions{ev_allow_generated});
        for (const auto& rec : index.records) {
          const EvalPair pair = load_pair(rec);
          Image sr;
          if (model) {
            sr = super_resolve(pair.lr, *model, mode, ForwardOptions{ev_threads});
          } else {
            sr = classical_upscale(pair.lr, ev_scale, parse_residual_mode(ev_method));
          }
          const ImagePlane y_sr = to_luma(sr);
          const ImagePlane y_hr = to_luma(pair.hr);
          report.images.push_back({name, rec.name, psnr(y_hr, y_sr, shave), ssim(y_hr, y_sr, shave), rec.generated_lr});
          if (model && report.images.size() == 1) {
            report.ops = estimate_ops(*model, y_hr.height(), y_hr.width());
          }
        }
      }
      report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      report.energy_pj = report.ops.energy_pj(costs);
      report.write_text(out);
      if (!ev_report.empty()) {
        std::ofstream os(ev_report);
        if (!os) throw Error("cannot write report " + ev_report);
        report.write_key_values(os);
      }
      return 0;
    }

    if (*size) {
      const ModelSpec model = load_model_file(size_model);
      const std::size_t bytes = lut_size_bytes(model);
      out << format_size(bytes) << " (" << bytes << " B)\n";
      return 0;
    }

    if (*insp) {
      out << inspect(load_model_file(insp_model));
      return 0;
    }

    if (*verify) {
      std::vector<std::pair<std::string, ModelSpec>> models;
      if (vf_random > 0) {
        std::mt19937_64 rng(vf_seed);
        const auto shapes = verification_shapes();
        for (int i = 0; i < vf_random; ++i) {
          const ModelShape& shape = shapes[static_cast<std::size_t>(i) % shapes.size()];
          models.emplace_back("random model " + std::to_string(i), oracle::random_model(shape, rng));
        }
      } else if (!vf_model.empty()) {
        models.emplace_back(vf_model, load_model_file(vf_model));
      } else {
        throw Error("verify needs a model file or --random N");
      }
      const ForwardFn engine = engine_forward(ForwardOptions{vf_threads});
      int failures = 0;
      for (std::size_t i = 0; i < models.size(); ++i) {
        const auto& [label, m] = models[i];
        const std::uint64_t seed = vf_seed + i;
        for (const SuiteResult& r : {check_oracle_equivalence(m, vf_cases, seed, engine),
                                     check_rotation_equivariance(m, vf_cases, seed, engine),
                                     check_zero_neutrality(m, vf_cases, seed, engine)}) {
          out << label << ": " << r.suite << " " << (r.ok() ? "ok" : "FAILED") << " (" << r.cases - r.failed << "/"
              << r.cases << ")\n";
          if (!r.ok()) {
            ++failures;
            err << label << ": " << r.suite << " minimal failing case: " << r.first_failure << '\n';
          }
        }
      }
      return failures == 0 ? 0 : 1;
    }

    if (*mk) {
      ModelShape shape = ModelShape::parse(mk_shape);
      shape.residual = parse_residual_mode(mk_residual);
      shape.levels = mk_levels;
      std::mt19937_64 rng;
      bool random = false;
      table_function(mk_kind, 1, rng, random);
      ModelSpec model = build_model(shape, [&](const TableSlot& slot) {
        if (random) return oracle::random_table(slot.levels, slot.pattern->size(), slot.scale, rng);
        return oracle::build_lut_from_function(table_function(mk_kind, slot.scale, rng, random), slot.levels,
                                               slot.pattern->size(), slot.scale);
      });
      model.metadata["kind"] = mk_kind;
      model.metadata["shape"] = mk_shape;
      save_model_file(model, mk_out);
      out << "wrote " << mk_out << ": " << format_size(lut_size_bytes(model)) << " (" << lut_size_bytes(model)
          << " B)\n";
      return 0;
    }

    if (*bench) {
      const ModelSpec model = load_model_file(bn_model);
      const BenchStats stats = bench_runtime(model, bn_height, bn_width, bn_repeats, ForwardOptions{bn_threads});
      out << std::fixed << std::setprecision(2) << bn_height << "x" << bn_width << " -> "
          << bn_height * model.total_upscale() << "x" << bn_width * model.total_upscale() << ": " << stats.mean_ms
          << " +/- " << stats.stddev_ms << " ms over " << stats.samples_ms.size() << " runs\n"
          << std::defaultfloat;
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace hklut::cli
