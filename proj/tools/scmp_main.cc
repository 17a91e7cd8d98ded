// Copyright 2026 The SCMP Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Exit codes: 0 success, 1 usage or bad input,
// 2 missing environment (codec tools, files), 3 numeric failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "scmp/bitstream.h"
#include "scmp/codecs.h"
#include "scmp/dataset.h"
#include "scmp/errors.h"
#include "scmp/metrics.h"
#include "scmp/plot.h"
#include "scmp/rate.h"
#include "scmp/results.h"
#include "scmp/segmentation.h"
#include "scmp/sweep.h"
#include "scmp/trainer.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace scmp;

constexpr int kExitUsage = 1;
constexpr int kExitEnvironment = 2;
constexpr int kExitNumeric = 3;

struct DataOptions {
  std::string root;
  std::string layout = "flat";
  std::string split = "train";
  std::string resolution = "native";

  void add(CLI::App* app) {
    app->add_option("--data", root, "Dataset root directory")->required();
    app->add_option("--layout", layout, "flat | cityscapes");
    app->add_option("--split", split, "Split to read");
    app->add_option("--resolution", resolution, "native | half");
  }
  std::vector<Sample> load() const {
    return load_samples(ingest(root, parse_dataset_layout(layout), split,
                               parse_resolution_policy(resolution)));
  }
};

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("cannot write " + path.string());
}

std::vector<Image8> images_of(const std::vector<Sample>& samples) {
  std::vector<Image8> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.image);
  return out;
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semantic-aware learned image compression toolkit"};
  app.require_subcommand(1);

  // synth
  SyntheticSpec synth_spec;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Write a seeded synthetic segmentation set");
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--count", synth_spec.count);
  synth->add_option("--height", synth_spec.height);
  synth->add_option("--width", synth_spec.width);
  synth->add_option("--classes", synth_spec.classes);
  synth->add_option("--seed", synth_spec.seed);

  // train
  DataOptions train_data;
  TrainConfig train_cfg;
  int train_f = 8, train_l = 4;
  std::string train_mode = "straight-through", train_network = "tiny", train_out, train_resume;
  std::string train_log, train_ckpt_dir;
  auto* train = app.add_subcommand("train", "Train the GAN codec");
  train_data.add(train);
  train->add_option("--features,-F", train_f, "Bottleneck feature maps");
  train->add_option("--levels,-L", train_l, "Quantizer levels");
  train->add_option("--mode", train_mode, "none | hard | soft | straight-through");
  train->add_option("--network", train_network, "tiny | standard");
  train->add_option("--epochs", train_cfg.epochs);
  train->add_option("--lr", train_cfg.learning_rate);
  train->add_option("--batch", train_cfg.batch_size);
  train->add_option("--seed", train_cfg.seed);
  train->add_option("--checkpoint-dir", train_ckpt_dir, "Per-epoch checkpoints");
  train->add_option("--log", train_log, "CSV loss log");
  train->add_option("--resume", train_resume, "Continue from a trainer checkpoint");
  train->add_option("--out", train_out, "Generator checkpoint to write")->required();

  // compress / decompress
  std::string model_path, in_path, out_path;
  auto* compress = app.add_subcommand("compress", "Image to fixed-rate bitstream");
  compress->add_option("--model", model_path)->required();
  compress->add_option("--in", in_path)->required();
  compress->add_option("--out", out_path)->required();
  auto* decompress = app.add_subcommand("decompress", "Bitstream to PNG");
  decompress->add_option("--model", model_path)->required();
  decompress->add_option("--in", in_path)->required();
  decompress->add_option("--out", out_path)->required();

  // evaluate
  std::string eval_ref, eval_rec, eval_file, eval_seg, eval_label;
  auto* evaluate = app.add_subcommand("evaluate", "Quality of one reconstruction");
  evaluate->add_option("--reference", eval_ref)->required();
  evaluate->add_option("--reconstruction", eval_rec)->required();
  evaluate->add_option("--compressed", eval_file, "Compressed file for the bpp column");
  evaluate->add_option("--seg-model", eval_seg, "Segmentation checkpoint for mIoU");
  evaluate->add_option("--label", eval_label, "Reference label map for mIoU");

  // seg-train
  DataOptions seg_data;
  std::string seg_strategy = "uncoded", seg_generator, seg_codec, seg_out, seg_adapter = "opencv";
  std::int64_t seg_steps = 1000, seg_finetune = -1;
  int seg_quality = 50;
  TinySegNetConfig seg_cfg;
  SegTrainOptions seg_opts;
  auto* seg_train = app.add_subcommand("seg-train", "Train a segmentation model");
  seg_data.add(seg_train);
  seg_train->add_option("--strategy", seg_strategy, "uncoded | reconstructions | mixed | finetune");
  seg_train->add_option("--steps", seg_steps, "Total optimiser steps");
  seg_train->add_option("--finetune-steps", seg_finetune, "Fine-tune share (default steps/4)");
  seg_train->add_option("--generator", seg_generator, "GAN checkpoint producing reconstructions");
  seg_train->add_option("--codec", seg_codec, "Standard codec producing reconstructions");
  seg_train->add_option("--quality", seg_quality, "Standard codec quality");
  seg_train->add_option("--adapter", seg_adapter, "Codec adapter");
  seg_train->add_option("--classes", seg_cfg.classes);
  seg_train->add_option("--width", seg_cfg.base_channels, "Base channel count");
  seg_train->add_option("--lr", seg_cfg.learning_rate);
  seg_train->add_option("--batch", seg_opts.batch_size);
  seg_train->add_option("--seed", seg_opts.seed);
  seg_train->add_option("--out", seg_out)->required();

  // sweep
  std::string sweep_config, sweep_out, sweep_adapter;
  std::vector<int> sweep_f, sweep_l;
  std::vector<std::string> sweep_modes;
  std::vector<std::uint64_t> sweep_seeds;
  bool sweep_no_cache = false, sweep_no_plots = false;
  int sweep_epochs = 0, sweep_parallel = 0;
  auto* sweep = app.add_subcommand("sweep", "Rate sweep over F, L, modes and baselines");
  sweep->add_option("--config", sweep_config, "JSON sweep configuration");
  sweep->add_option("--out", sweep_out, "Output directory");
  sweep->add_option("--features", sweep_f)->delimiter(',');
  sweep->add_option("--levels", sweep_l)->delimiter(',');
  sweep->add_option("--modes", sweep_modes)->delimiter(',');
  sweep->add_option("--seeds", sweep_seeds)->delimiter(',');
  sweep->add_option("--epochs", sweep_epochs);
  sweep->add_option("--adapter", sweep_adapter);
  sweep->add_option("--parallelism", sweep_parallel);
  sweep->add_flag("--no-cache", sweep_no_cache);
  sweep->add_flag("--no-plots", sweep_no_plots);

  // plot
  std::string plot_results, plot_out;
  auto* plot = app.add_subcommand("plot", "Rate/quality panels from a results CSV");
  plot->add_option("--results", plot_results)->required();
  plot->add_option("--out", plot_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*synth) {
      const auto manifest = generate_synthetic(synth_spec, synth_out);
      print_json(manifest);
    } else if (*train) {
      CodecConfig codec = train_network == "standard" ? CodecConfig::standard(train_f, train_l)
                                                      : CodecConfig::tiny(train_f, train_l);
      if (train_network != "standard" && train_network != "tiny") {
        throw ConfigError("unknown network '" + train_network + "'");
      }
      train_cfg.mode = parse_quantizer_mode(train_mode);
      train_cfg.checkpoint_dir = train_ckpt_dir;
      train_cfg.log_path = train_log;
      const auto samples = train_data.load();
      auto run = train_codec(images_of(samples), codec, DiscriminatorSpec::tiny(), train_cfg,
                             train_resume, [](const LossReport& r) {
                               std::fprintf(stderr, "step %lld  gen %.5f  disc %.5f  sim %.5f\n",
                                            static_cast<long long>(r.step), r.gen_total, r.disc,
                                            r.sim);
                             });
      save_generator(train_out, run.trainer->generator());
      print_json({{"steps", run.trainer->step()},
                  {"bpp", codec.bpp()},
                  {"generator", train_out}});
    } else if (*compress) {
      Generator g = load_generator(model_path);
      const Image8 image = read_image(in_path);
      const LatentCode code = g->encode(to_signed_unit(image));
      const auto bytes = serialize_bitstream(code, g->quantizer(), image.height, image.width,
                                             g->config().downsampling());
      write_bytes(out_path, bytes);
      print_json({{"bytes", bytes.size()},
                  {"payload_bits", payload_bits(code)},
                  {"bpp", bitrate_bpp(code.features, code.num_levels, g->config().downsampling())},
                  {"file_bpp", file_bpp(bytes.size(), image.height, image.width)}});
    } else if (*decompress) {
      Generator g = load_generator(model_path);
      const auto bytes = read_bytes(in_path);
      const auto decoded = deserialize_bitstream(bytes, static_cast<int>(g->config().downsampling()));
      write_png(out_path, to_8bit(g->decode(decoded.code)));
      print_json({{"height", decoded.image_height}, {"width", decoded.image_width}});
    } else if (*evaluate) {
      const Image8 x = read_image(eval_ref);
      const Image8 y = read_image(eval_rec);
      const auto ms = ms_ssim_fitted(x.height, x.width);
      json out = {{"psnr_db", psnr(x, y)},
                  {"ssim", ssim(x, y)},
                  {"ms_ssim", ms_ssim(x, y, ms)},
                  {"ms_ssim_scales", ms.weights.size()}};
      if (!eval_file.empty()) {
        out["bpp"] = file_bpp(fs::file_size(eval_file), x.height, x.width);
      }
      if (!eval_seg.empty() != !eval_label.empty()) {
        throw ConfigError("--seg-model and --label go together");
      }
      if (!eval_seg.empty()) {
        auto model = load_segmentation_model(eval_seg);
        const SegmentationMap label = read_label_map(eval_label);
        ConfusionMatrix cm(model->num_classes());
        cm = confusion_accumulate(model->predict(y), label, cm);
        out["miou"] = miou(cm);
      }
      print_json(out);
    } else if (*seg_train) {
      const auto samples = seg_data.load();
      std::unique_ptr<ImageCoder> coder;
      if (!seg_generator.empty() && !seg_codec.empty()) {
        throw ConfigError("choose either --generator or --codec");
      }
      if (!seg_generator.empty()) {
        coder = std::make_unique<GanCoder>(load_generator(seg_generator));
      } else if (!seg_codec.empty()) {
        coder = std::make_unique<StandardCodecCoder>(make_codec_adapter(seg_adapter),
                                                     parse_standard_codec(seg_codec), seg_quality);
      }
      TrainingStrategy strategy;
      switch (parse_strategy_kind(seg_strategy)) {
        case StrategyKind::kUncoded:
          strategy = TrainingStrategy::uncoded(seg_steps);
          break;
        case StrategyKind::kReconstructions:
          strategy = TrainingStrategy::reconstructions(seg_steps);
          break;
        case StrategyKind::kMixed:
          strategy = TrainingStrategy::mixed(seg_steps);
          break;
        case StrategyKind::kFinetune:
          strategy = seg_finetune < 0
                         ? TrainingStrategy::finetune(seg_steps)
                         : TrainingStrategy::finetune(seg_steps - seg_finetune, seg_finetune);
          break;
      }
      seg_cfg.seed = seg_opts.seed;
      TinySegNet model(seg_cfg);
      const auto report = train_segmentation(model, samples, strategy, coder.get(), seg_opts);
      save_segmentation_model(seg_out, model);
      print_json({{"steps", report.steps},
                  {"original_samples", report.original_samples},
                  {"reconstructed_samples", report.reconstructed_samples},
                  {"final_loss", report.losses.empty() ? 0.0 : report.losses.back()}});
    } else if (*sweep) {
      SweepConfig cfg = sweep_config.empty() ? SweepConfig::desk() : load_sweep_config(sweep_config);
      if (!sweep_out.empty()) cfg.output_dir = sweep_out;
      if (!sweep_f.empty()) cfg.features = sweep_f;
      if (!sweep_l.empty()) cfg.levels = sweep_l;
      if (!sweep_modes.empty()) {
        cfg.modes.clear();
        for (const auto& m : sweep_modes) cfg.modes.push_back(parse_quantizer_mode(m));
      }
      if (!sweep_seeds.empty()) cfg.seeds = sweep_seeds;
      if (sweep_epochs > 0) cfg.train.epochs = sweep_epochs;
      if (!sweep_adapter.empty()) cfg.codec_adapter = sweep_adapter;
      if (sweep_parallel > 0) cfg.parallelism = sweep_parallel;
      if (sweep_no_cache) cfg.use_cache = false;
      if (sweep_no_plots) cfg.emit_plots = false;
      const auto result = run_sweep(cfg, [](const std::string& m) { std::cerr << m << "\n"; });
      json failures = json::array();
      for (const auto& f : result.failures) failures.push_back({{"point", f.point}, {"error", f.error}});
      print_json({{"points", result.points.size()},
                  {"computed", result.computed},
                  {"reused", result.reused},
                  {"failures", failures},
                  {"output_dir", cfg.output_dir.string()}});
    } else if (*plot) {
      json files = json::array();
      for (const auto& p : emit_plots(read_rate_csv(plot_results), plot_out)) files.push_back(p.string());
      print_json(files);
    }
  } catch (const EnvironmentError& e) {
    std::cerr << "environment error: " << e.what() << "\n";
    return kExitEnvironment;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return 0;
}
