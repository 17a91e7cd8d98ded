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

#include "scmp/sweep.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <thread>

#include "scmp/errors.h"
#include "scmp/hash.h"
#include "scmp/plot.h"
#include "scmp/rate.h"
#include "scmp/results.h"

namespace scmp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_power_of_two(int v) { return v >= 2 && (v & (v - 1)) == 0; }

json synthetic_json(const SyntheticSpec& s) {
  return {{"count", s.count},
          {"height", s.height},
          {"width", s.width},
          {"classes", s.classes},
          {"seed", s.seed}};
}

SyntheticSpec synthetic_from(const json& j, const SyntheticSpec& d) {
  SyntheticSpec s;
  s.count = j.value("count", d.count);
  s.height = j.value("height", d.height);
  s.width = j.value("width", d.width);
  s.classes = j.value("classes", d.classes);
  s.seed = j.value("seed", d.seed);
  return s;
}

// Training settings that determine the weights; paths and the per-point
// seed and mode are keyed separately.
json train_key(const TrainConfig& t) {
  json j = t;
  j.erase("checkpoint_dir");
  j.erase("log_path");
  j.erase("seed");
  j.erase("mode");
  return j;
}

json segmentation_key(const SegmentationSweep& s) {
  return {{"steps", s.steps},
          {"batch_size", s.batch_size},
          {"base_channels", s.base_channels},
          {"learning_rate", s.learning_rate},
          {"enabled", s.enabled}};
}

std::string point_label(const json& key) {
  std::string out = key.at("kind").get<std::string>();
  for (const char* field : {"features", "levels", "mode", "codec", "target_bpp", "quality",
                            "seg_model", "seed"}) {
    if (key.contains(field)) out += " " + std::string(field) + "=" + key.at(field).dump();
  }
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw DataError("cannot write " + tmp.string());
    out << text;
    if (!out) throw DataError("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

// Runs fn(i) for i in [0, n) on up to `threads` workers.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(threads, 1), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

class Sweep {
 public:
  Sweep(const SweepConfig& config, const SweepProgress& progress)
      : config_(config), progress_(progress) {}

  SweepResult run();

 private:
  void note(const std::string& message) {
    if (progress_) progress_(message);
  }
  fs::path cache_dir() const { return config_.output_dir / "cache"; }

  void load_data();
  SegmentationModel* uncoded_model(std::uint64_t seed);
  Generator generator_for(int features, int levels, QuantizerMode mode, std::uint64_t seed);
  CodecAdapter& adapter();

  // Returns the cached point for `key` or computes it with `make`.
  void point(const json& key, const std::function<RatePoint()>& make);

  RatePoint evaluate(const std::vector<Sample>& coded, SegmentationModel* seg, RatePoint p);

  void gan_points(std::uint64_t seed);
  void baseline_points(std::uint64_t seed);

  const SweepConfig& config_;
  SweepProgress progress_;
  SweepResult result_;
  json data_key_;
  std::vector<Sample> train_;
  std::vector<Sample> test_;
  MsSsimOptions ms_ssim_;
  std::map<std::uint64_t, std::unique_ptr<SegmentationModel>> seg_models_;
  std::shared_ptr<CodecAdapter> adapter_;
  // Reconstructions by coder name, shared across seeds.
  std::map<std::string, std::vector<Sample>> coded_;
  std::map<std::string, double> coded_bpp_;
};

void Sweep::load_data() {
  const auto& d = config_.data;
  data_key_ = d;
  if (d.kind == "synthetic") {
    train_ = synthesize(d.train);
    test_ = synthesize(d.test);
  } else {
    train_ = load_samples(ingest(d.root, d.layout, "train", d.resolution));
    test_ = load_samples(ingest(d.root, d.layout, d.test_split, d.resolution));
  }
  if (train_.empty() || test_.empty()) throw DataError("sweep needs training and test images");
  int h = test_.front().image.height, w = test_.front().image.width;
  for (const auto& s : test_) {
    h = std::min(h, s.image.height);
    w = std::min(w, s.image.width);
  }
  ms_ssim_ = ms_ssim_fitted(h, w);
  result_.ms_ssim_scales = static_cast<int>(ms_ssim_.weights.size());
}

SegmentationModel* Sweep::uncoded_model(std::uint64_t seed) {
  if (!config_.segmentation.enabled) return nullptr;
  auto it = seg_models_.find(seed);
  if (it != seg_models_.end()) return it->second.get();
  const auto& s = config_.segmentation;
  const json key = {{"kind", "segmentation"},
                    {"strategy", "uncoded"},
                    {"data", data_key_},
                    {"segmentation", segmentation_key(s)},
                    {"classes", config_.data.num_classes()},
                    {"seed", seed}};
  const fs::path path = cache_dir() / ("seg_" + config_hash(key) + ".sckp");
  std::unique_ptr<SegmentationModel> model;
  if (config_.use_cache && fs::exists(path)) {
    model = load_segmentation_model(path);
  } else {
    note("training uncoded segmentation model, seed " + std::to_string(seed));
    model = std::make_unique<TinySegNet>(TinySegNetConfig{
        config_.data.num_classes(), s.base_channels, s.learning_rate, seed});
    train_segmentation(*model, train_, TrainingStrategy::uncoded(s.steps), nullptr,
                       {s.batch_size, seed, true});
    save_segmentation_model(path, *model);
  }
  return (seg_models_[seed] = std::move(model)).get();
}

Generator Sweep::generator_for(int features, int levels, QuantizerMode mode,
                               std::uint64_t seed) {
  const CodecConfig codec = config_.codec_config(features, levels);
  const json key = {{"kind", "generator"},
                    {"codec", codec},
                    {"discriminator", config_.discriminator},
                    {"train", train_key(config_.train)},
                    {"mode", to_string(mode)},
                    {"data", data_key_},
                    {"seed", seed}};
  const std::string hash = config_hash(key);
  const fs::path path = cache_dir() / ("gen_" + hash + ".sckp");
  if (config_.use_cache && fs::exists(path)) return load_generator(path);

  TrainConfig train = config_.train;
  train.seed = seed;
  train.mode = mode;
  train.checkpoint_dir = cache_dir() / ("train_" + hash);
  train.log_path = config_.output_dir / "logs" / ("train_" + hash + ".csv");
  fs::create_directories(train.log_path.parent_path());
  const fs::path latest = train.checkpoint_dir / "latest.sckp";
  fs::path resume;
  if (config_.use_cache && fs::exists(latest)) {
    resume = latest;
  } else {
    fs::remove_all(train.checkpoint_dir);
  }
  note("training codec F=" + std::to_string(features) + " L=" + std::to_string(levels) +
       " mode=" + to_string(mode) + " seed=" + std::to_string(seed) +
       (resume.empty() ? "" : " (resuming)"));
  std::vector<Image8> images;
  images.reserve(train_.size());
  for (const auto& s : train_) images.push_back(s.image);
  auto run = train_codec(images, codec, config_.discriminator, train, resume);
  save_generator(path, run.trainer->generator());
  fs::remove_all(train.checkpoint_dir);
  return load_generator(path);
}

CodecAdapter& Sweep::adapter() {
  if (!adapter_) adapter_ = make_codec_adapter(config_.codec_adapter);
  return *adapter_;
}

void Sweep::point(const json& key, const std::function<RatePoint()>& make) {
  const std::string hash = config_hash(key);
  const fs::path path = cache_dir() / ("point_" + hash + ".json");
  if (config_.use_cache && fs::exists(path)) {
    result_.points.push_back(read_json(path).get<RatePoint>());
    ++result_.reused;
    return;
  }
  try {
    RatePoint p = make();
    p.config_hash = hash;
    p.seed = key.at("seed").get<std::uint64_t>();
    write_text(path, json(p).dump(1));
    result_.points.push_back(p);
    ++result_.computed;
  } catch (const Error& e) {
    result_.failures.push_back({point_label(key), e.what()});
    note("failed: " + point_label(key) + ": " + e.what());
  }
}

RatePoint Sweep::evaluate(const std::vector<Sample>& coded, SegmentationModel* seg,
                          RatePoint p) {
  const auto d = mean_distortion(test_, coded, ms_ssim_, config_.parallelism);
  p.psnr_db = d.psnr_db;
  p.ssim = d.ssim;
  p.ms_ssim = d.ms_ssim;
  p.miou = seg ? miou(evaluate_segmentation(*seg, coded)) : kNaN;
  return p;
}

void Sweep::gan_points(std::uint64_t seed) {
  for (int f : config_.features) {
    for (int l : config_.levels) {
      for (QuantizerMode mode : config_.modes) {
        const CodecConfig codec = config_.codec_config(f, l);
        json key = {{"kind", "gan"},
                    {"features", f},
                    {"levels", l},
                    {"mode", to_string(mode)},
                    {"codec", codec},
                    {"discriminator", config_.discriminator},
                    {"train", train_key(config_.train)},
                    {"data", data_key_},
                    {"segmentation", segmentation_key(config_.segmentation)},
                    {"seed", seed}};
        const std::string coder_name = "gan_" + config_hash(key);
        auto reconstructions = [&]() -> const std::vector<Sample>& {
          auto it = coded_.find(coder_name);
          if (it != coded_.end()) return it->second;
          GanCoder coder(generator_for(f, l, mode, seed));
          return coded_[coder_name] = code_dataset(test_, coder);
        };
        RatePoint base;
        base.method = "gan";
        base.features = f;
        base.levels = l;
        base.mode = to_string(mode);
        base.bpp = bitrate_bpp(f, l, codec.downsampling());

        point(key, [&] {
          RatePoint p = base;
          p.seg_model = config_.segmentation.enabled ? "uncoded" : "";
          note("evaluating " + point_label(key));
          return evaluate(reconstructions(), uncoded_model(seed), p);
        });

        const auto& retrain = config_.segmentation.retrain;
        const bool listed = std::any_of(retrain.begin(), retrain.end(), [&](const auto& r) {
          return r.features == f && r.levels == l && r.mode == mode;
        });
        if (!listed || !config_.segmentation.enabled) continue;
        key["seg_model"] = "finetune";
        key["finetune_fraction"] = config_.segmentation.finetune_fraction;
        point(key, [&] {
          const auto& s = config_.segmentation;
          const auto finetune = static_cast<std::int64_t>(
              std::llround(static_cast<double>(s.steps) * s.finetune_fraction));
          note("fine-tuning segmentation on " + point_label(key));
          TinySegNet model({config_.data.num_classes(), s.base_channels, s.learning_rate, seed});
          GanCoder coder(generator_for(f, l, mode, seed));
          train_segmentation(model, train_, TrainingStrategy::finetune(s.steps - finetune, finetune),
                             &coder, {s.batch_size, seed, true});
          RatePoint p = base;
          p.seg_model = "finetune";
          return evaluate(reconstructions(), &model, p);
        });
      }
    }
  }
}

void Sweep::baseline_points(std::uint64_t seed) {
  for (const auto& b : config_.baselines) {
    const std::string codec = to_string(b.codec);
    auto run = [&](json key, const std::function<std::vector<Sample>(double&)>& code) {
      point(key, [&] {
        const std::string coder_name = key.dump();
        if (!coded_.count(coder_name)) {
          note("encoding " + point_label(key));
          double bpp = 0.0;
          coded_[coder_name] = code(bpp);
          coded_bpp_[coder_name] = bpp;
        }
        RatePoint p;
        p.method = codec;
        p.bpp = coded_bpp_.at(coder_name);
        p.seg_model = config_.segmentation.enabled ? "uncoded" : "";
        return evaluate(coded_.at(coder_name), uncoded_model(seed), p);
      });
    };
    const json common = {{"kind", "baseline"},
                         {"codec", codec},
                         {"adapter", config_.codec_adapter},
                         {"data", data_key_},
                         {"segmentation", segmentation_key(config_.segmentation)}};
    for (double target : b.target_bpp) {
      json key = common;
      key["target_bpp"] = target;
      key["tolerance"] = b.tolerance;
      key["seed"] = seed;
      run(key, [&](double& bpp) {
        std::vector<Sample> out = test_;
        double sum = 0.0;
        for (auto& s : out) {
          const auto r = search_quality_for_bpp(adapter(), s.image, {b.codec, target, b.tolerance, {}});
          s.image = r.encoded.reconstruction;
          sum += r.bpp;
        }
        bpp = sum / static_cast<double>(out.size());
        return out;
      });
    }
    for (int q : b.qualities) {
      json key = common;
      key["quality"] = q;
      key["seed"] = seed;
      run(key, [&](double& bpp) {
        std::vector<Sample> out = test_;
        double sum = 0.0;
        for (auto& s : out) {
          const auto e = encode_standard(adapter(), s.image, b.codec, q);
          s.image = e.reconstruction;
          sum += e.bpp;
        }
        bpp = sum / static_cast<double>(out.size());
        return out;
      });
    }
  }
}

SweepResult Sweep::run() {
  config_.validate();
  fs::create_directories(cache_dir());
  save_sweep_config(config_.output_dir / "config.json", config_);
  load_data();
  for (std::uint64_t seed : config_.seeds) {
    gan_points(seed);
    baseline_points(seed);
  }

  write_rate_csv(config_.output_dir / "results.csv", result_.points);
  json failures = json::array();
  for (const auto& f : result_.failures) failures.push_back({{"point", f.point}, {"error", f.error}});
  const json doc = {{"config", config_},
                    {"ms_ssim_scales", result_.ms_ssim_scales},
                    {"points", result_.points},
                    {"failures", failures}};
  write_text(config_.output_dir / "results.json", doc.dump(1));
  if (config_.emit_plots && !result_.points.empty()) {
    try {
      emit_plots(result_.points, config_.output_dir / "plots");
    } catch (const ConfigError& e) {
      result_.failures.push_back({"plots", e.what()});
    }
  }
  return result_;
}

}  // namespace

void BaselineSpec::validate() const {
  if (target_bpp.empty() && qualities.empty()) {
    throw ConfigError("baseline " + to_string(codec) + " needs target_bpp or qualities");
  }
  for (double t : target_bpp) {
    if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("baseline target bpp must be > 0");
  }
  const auto range = quality_range(codec);
  for (int q : qualities) {
    if (q < range.min || q > range.max) {
      throw ConfigError("baseline " + to_string(codec) + " quality " + std::to_string(q) +
                        " outside [" + std::to_string(range.min) + ", " +
                        std::to_string(range.max) + "]");
    }
  }
  if (!(tolerance > 0.0)) throw ConfigError("baseline tolerance must be > 0");
}

void DataSource::validate() const {
  if (kind == "synthetic") {
    train.validate();
    test.validate();
    if (train.classes != test.classes) throw ConfigError("train and test class counts differ");
  } else if (kind == "directory") {
    if (root.empty()) throw ConfigError("directory data source needs a root");
    if (classes < 2 || classes > 255) throw ConfigError("classes must lie in [2, 255]");
  } else {
    throw ConfigError("unknown data source kind '" + kind + "' (synthetic, directory)");
  }
}

int DataSource::num_classes() const { return kind == "synthetic" ? train.classes : classes; }

void SweepConfig::validate() const {
  if (features.empty() && baselines.empty()) throw ConfigError("sweep has no points");
  if (!features.empty() && (levels.empty() || modes.empty())) {
    throw ConfigError("sweep needs L values and modes for its GAN points");
  }
  for (int f : features) {
    if (f < 1 || f > 255) throw ConfigError("F must lie in [1, 255]");
  }
  for (int l : levels) {
    if (!is_power_of_two(l) || l > 256) {
      throw ConfigError("L = " + std::to_string(l) + " is not a power of two in [2, 256]");
    }
  }
  for (const auto& b : baselines) b.validate();
  if (seeds.empty()) throw ConfigError("sweep needs at least one seed");
  if (output_dir.empty()) throw ConfigError("sweep needs an output directory");
  if (network != "tiny" && network != "standard") {
    throw ConfigError("unknown network '" + network + "' (tiny, standard)");
  }
  if (parallelism < 1) throw ConfigError("parallelism must be >= 1");
  data.validate();
  discriminator.validate();
  train.validate();
  const auto& s = segmentation;
  if (s.enabled) {
    if (s.steps < 1 || s.batch_size < 1 || s.base_channels < 1 || !(s.learning_rate > 0.0)) {
      throw ConfigError("segmentation steps, batch size, width and learning rate must be > 0");
    }
    if (!(s.finetune_fraction > 0.0 && s.finetune_fraction < 1.0)) {
      throw ConfigError("finetune_fraction must lie in (0, 1)");
    }
  }
  for (int f : features) {
    for (int l : levels) codec_config(f, l).validate();
  }
}

CodecConfig SweepConfig::codec_config(int f, int l) const {
  return network == "standard" ? CodecConfig::standard(f, l) : CodecConfig::tiny(f, l);
}

SweepConfig SweepConfig::desk() {
  SweepConfig c;
  c.train.epochs = 50;
  c.train.batch_size = 4;
  return c;
}

void to_json(json& j, const BaselineSpec& b) {
  j = {{"codec", to_string(b.codec)},
       {"target_bpp", b.target_bpp},
       {"qualities", b.qualities},
       {"tolerance", b.tolerance}};
}

void from_json(const json& j, BaselineSpec& b) {
  b = BaselineSpec{};
  b.codec = parse_standard_codec(j.at("codec").get<std::string>());
  b.target_bpp = j.value("target_bpp", b.target_bpp);
  b.qualities = j.value("qualities", b.qualities);
  b.tolerance = j.value("tolerance", b.tolerance);
}

void to_json(json& j, const DataSource& d) {
  if (d.kind == "synthetic") {
    j = {{"kind", d.kind}, {"train", synthetic_json(d.train)}, {"test", synthetic_json(d.test)}};
  } else {
    j = {{"kind", d.kind},
         {"root", d.root.string()},
         {"layout", to_string(d.layout)},
         {"resolution", to_string(d.resolution)},
         {"test_split", d.test_split},
         {"classes", d.classes}};
  }
}

void from_json(const json& j, DataSource& d) {
  d = DataSource{};
  d.kind = j.value("kind", d.kind);
  if (j.contains("train")) d.train = synthetic_from(j.at("train"), d.train);
  if (j.contains("test")) d.test = synthetic_from(j.at("test"), d.test);
  d.root = j.value("root", std::string());
  if (j.contains("layout")) d.layout = parse_dataset_layout(j.at("layout").get<std::string>());
  if (j.contains("resolution")) {
    d.resolution = parse_resolution_policy(j.at("resolution").get<std::string>());
  }
  d.test_split = j.value("test_split", d.test_split);
  d.classes = j.value("classes", d.classes);
}

void to_json(json& j, const SegmentationSweep& s) {
  json retrain = json::array();
  for (const auto& r : s.retrain) {
    retrain.push_back({{"features", r.features}, {"levels", r.levels}, {"mode", to_string(r.mode)}});
  }
  j = segmentation_key(s);
  j["finetune_fraction"] = s.finetune_fraction;
  j["retrain"] = retrain;
}

void from_json(const json& j, SegmentationSweep& s) {
  s = SegmentationSweep{};
  s.enabled = j.value("enabled", s.enabled);
  s.steps = j.value("steps", s.steps);
  s.finetune_fraction = j.value("finetune_fraction", s.finetune_fraction);
  s.batch_size = j.value("batch_size", s.batch_size);
  s.base_channels = j.value("base_channels", s.base_channels);
  s.learning_rate = j.value("learning_rate", s.learning_rate);
  if (j.contains("retrain")) {
    for (const auto& r : j.at("retrain")) {
      s.retrain.push_back({r.at("features").get<int>(), r.at("levels").get<int>(),
                           parse_quantizer_mode(r.value("mode", std::string("straight-through")))});
    }
  }
}

void to_json(json& j, const SweepConfig& c) {
  json modes = json::array();
  for (auto m : c.modes) modes.push_back(to_string(m));
  json train = c.train;
  train.erase("checkpoint_dir");
  train.erase("log_path");
  train.erase("seed");
  train.erase("mode");
  j = {{"features", c.features},
       {"levels", c.levels},
       {"modes", modes},
       {"baselines", c.baselines},
       {"seeds", c.seeds},
       {"output_dir", c.output_dir.string()},
       {"data", c.data},
       {"network", c.network},
       {"discriminator", c.discriminator},
       {"train", train},
       {"segmentation", c.segmentation},
       {"codec_adapter", c.codec_adapter},
       {"use_cache", c.use_cache},
       {"emit_plots", c.emit_plots},
       {"parallelism", c.parallelism}};
}

void from_json(const json& j, SweepConfig& c) {
  try {
    c = SweepConfig::desk();
    c.features = j.value("features", c.features);
    c.levels = j.value("levels", c.levels);
    if (j.contains("modes")) {
      c.modes.clear();
      for (const auto& m : j.at("modes")) c.modes.push_back(parse_quantizer_mode(m.get<std::string>()));
    }
    if (j.contains("baselines")) c.baselines = j.at("baselines").get<std::vector<BaselineSpec>>();
    c.seeds = j.value("seeds", c.seeds);
    c.output_dir = j.value("output_dir", c.output_dir.string());
    if (j.contains("data")) c.data = j.at("data").get<DataSource>();
    c.network = j.value("network", c.network);
    if (j.contains("discriminator")) c.discriminator = j.at("discriminator").get<DiscriminatorSpec>();
    if (j.contains("train")) {
      json merged = c.train;
      merged.update(j.at("train"));
      c.train = merged.get<TrainConfig>();
    }
    if (j.contains("segmentation")) c.segmentation = j.at("segmentation").get<SegmentationSweep>();
    c.codec_adapter = j.value("codec_adapter", c.codec_adapter);
    c.use_cache = j.value("use_cache", c.use_cache);
    c.emit_plots = j.value("emit_plots", c.emit_plots);
    c.parallelism = j.value("parallelism", c.parallelism);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("sweep config: ") + e.what());
  }
}

SweepConfig load_sweep_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read sweep config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("sweep config " + path.string() + ": " + e.what());
  }
  return j.get<SweepConfig>();
}

void save_sweep_config(const fs::path& path, const SweepConfig& config) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_text(path, json(config).dump(2) + "\n");
}

DistortionSummary mean_distortion(const std::vector<Sample>& originals,
                                  const std::vector<Sample>& reconstructions,
                                  const MsSsimOptions& ms_ssim_options, int parallelism) {
  if (originals.empty() || originals.size() != reconstructions.size()) {
    throw DataError("distortion needs one reconstruction per original");
  }
  const std::size_t n = originals.size();
  std::vector<DistortionSummary> per(n);
  parallel_for(n, parallelism, [&](std::size_t i) {
    const Image8& x = originals[i].image;
    const Image8& y = reconstructions[i].image;
    per[i] = {psnr(x, y), ssim(x, y), ms_ssim(x, y, ms_ssim_options)};
  });
  DistortionSummary mean;
  for (const auto& d : per) {
    mean.psnr_db += d.psnr_db / static_cast<double>(n);
    mean.ssim += d.ssim / static_cast<double>(n);
    mean.ms_ssim += d.ms_ssim / static_cast<double>(n);
  }
  return mean;
}

SweepResult run_sweep(const SweepConfig& config, const SweepProgress& progress) {
  return Sweep(config, progress).run();
}

}  // namespace scmp
