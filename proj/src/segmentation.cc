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

#include "scmp/segmentation.h"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <random>

#include "scmp/errors.h"

namespace scmp {
namespace nn = torch::nn;

void TinySegNetConfig::validate() const {
  if (classes < 2 || classes > 255) throw ConfigError("segmentation classes must be in [2, 255]");
  if (base_channels < 1) throw ConfigError("base_channels must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("segmentation learning_rate must be > 0");
}

void to_json(nlohmann::json& j, const TinySegNetConfig& c) {
  j = nlohmann::json{{"classes", c.classes},
                     {"base_channels", c.base_channels},
                     {"learning_rate", c.learning_rate},
                     {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, TinySegNetConfig& c) {
  const TinySegNetConfig d;
  c.classes = j.value("classes", d.classes);
  c.base_channels = j.value("base_channels", d.base_channels);
  c.learning_rate = j.value("learning_rate", d.learning_rate);
  c.seed = j.value("seed", d.seed);
}

namespace {

nn::Sequential double_conv(int in, int out, int first_stride) {
  return nn::Sequential(nn::Conv2d(nn::Conv2dOptions(in, out, 3).stride(first_stride).padding(1)),
                        nn::ReLU(),
                        nn::Conv2d(nn::Conv2dOptions(out, out, 3).padding(1)), nn::ReLU());
}

}  // namespace

struct TinySegNet::Net : nn::Module {
  explicit Net(const TinySegNetConfig& c) {
    std::vector<int> ch;
    for (int i = 0; i <= 4; ++i) ch.push_back(c.base_channels * std::min(1 << i, 8));
    stem = register_module("stem", double_conv(3, ch[0], 1));
    for (int i = 0; i < 4; ++i) {
      down.push_back(register_module("down" + std::to_string(i), double_conv(ch[i], ch[i + 1], 2)));
    }
    for (int i = 3; i >= 0; --i) {
      up.push_back(register_module("up" + std::to_string(i), double_conv(ch[i + 1] + ch[i], ch[i], 1)));
    }
    head = register_module("head", nn::Conv2d(nn::Conv2dOptions(ch[0], c.classes, 1)));
  }

  torch::Tensor forward(torch::Tensor x) {
    std::vector<torch::Tensor> skips;
    x = stem->forward(x);
    for (auto& d : down) {
      skips.push_back(x);
      x = d->forward(x);
    }
    for (auto& u : up) {
      auto skip = skips.back();
      skips.pop_back();
      x = torch::upsample_nearest2d(x, {skip.size(2), skip.size(3)});
      x = u->forward(torch::cat({x, skip}, 1));
    }
    return head->forward(x);
  }

  nn::Sequential stem{nullptr};
  std::vector<nn::Sequential> down, up;
  nn::Conv2d head{nullptr};
};

TinySegNet::TinySegNet(const TinySegNetConfig& config) : config_(config) {
  config_.validate();
  torch::manual_seed(config_.seed);
  net_ = std::make_unique<Net>(config_);
  optimizer_ = std::make_unique<torch::optim::Adam>(
      net_->parameters(), torch::optim::AdamOptions(config_.learning_rate));
}

TinySegNet::~TinySegNet() = default;

namespace {

void check_dims(const Image8& image) {
  if (image.height % 16 != 0 || image.width % 16 != 0 || image.height == 0 || image.width == 0) {
    throw ConfigError("segmentation input " + std::to_string(image.height) + "x" +
                      std::to_string(image.width) + " is not divisible by 16");
  }
}

torch::Tensor label_batch(const std::vector<SegmentationMap>& labels) {
  std::vector<torch::Tensor> items;
  for (const auto& l : labels) {
    items.push_back(torch::from_blob(const_cast<std::uint8_t*>(l.labels.data()),
                                     {l.height, l.width}, torch::kUInt8)
                        .to(torch::kInt64));
  }
  return torch::stack(items);
}

}  // namespace

double TinySegNet::train_batch(const std::vector<Image8>& images,
                               const std::vector<SegmentationMap>& labels) {
  if (images.empty() || images.size() != labels.size()) {
    throw ConfigError("train_batch needs one label per image");
  }
  for (size_t i = 0; i < images.size(); ++i) {
    check_dims(images[i]);
    if (labels[i].height != images[i].height || labels[i].width != images[i].width) {
      throw DataError("label size does not match its image");
    }
  }
  net_->train();
  const auto target = label_batch(labels);
  const auto valid = target.ne(SegmentationMap::kIgnore);
  const auto invalid_class = target.ge(config_.classes).logical_and(valid);
  if (invalid_class.any().item<bool>()) {
    throw DataError("label id >= " + std::to_string(config_.classes) + " in training batch");
  }
  const auto logits = net_->forward(to_batch(images));
  torch::Tensor loss;
  if (valid.any().item<bool>()) {
    loss = torch::nn::functional::cross_entropy(
        logits, target,
        torch::nn::functional::CrossEntropyFuncOptions().ignore_index(SegmentationMap::kIgnore));
  } else {
    loss = logits.sum() * 0.0;
  }
  optimizer_->zero_grad();
  loss.backward();
  optimizer_->step();
  return loss.item<double>();
}

SegmentationMap TinySegNet::predict(const Image8& image) {
  check_dims(image);
  torch::NoGradGuard no_grad;
  net_->eval();
  const auto classes = net_->forward(to_batch({image})).argmax(1)[0].to(torch::kUInt8).contiguous();
  SegmentationMap out(image.height, image.width);
  std::memcpy(out.labels.data(), classes.data_ptr<std::uint8_t>(), out.labels.size());
  return out;
}

Checkpoint TinySegNet::to_checkpoint() {
  Checkpoint ckpt;
  ckpt.meta = {{"kind", "segmentation"}, {"model", name()}, {"config", config_}};
  put_module(ckpt, "model", *net_);
  ckpt.blobs["optimizer"] = serialize_optimizer(*optimizer_);
  return ckpt;
}

void TinySegNet::restore(const Checkpoint& ckpt) {
  if (ckpt.meta.value("model", std::string()) != name() ||
      ckpt.meta.value("config", nlohmann::json()) != nlohmann::json(config_)) {
    throw ConfigError("checkpoint does not hold a matching " + name());
  }
  load_module(ckpt, "model", *net_);
  const auto it = ckpt.blobs.find("optimizer");
  if (it != ckpt.blobs.end()) restore_optimizer(*optimizer_, it->second);
}

GanCoder::GanCoder(Generator generator, std::string name)
    : generator_(std::move(generator)), name_(std::move(name)) {}

Image8 GanCoder::code(const Image8& image) {
  torch::NoGradGuard no_grad;
  generator_->eval();
  return from_batch(generator_->reconstruct(to_batch({image})))[0];
}

StandardCodecCoder::StandardCodecCoder(std::shared_ptr<CodecAdapter> adapter, StandardCodec codec,
                                       int quality)
    : adapter_(std::move(adapter)), codec_(codec), quality_(quality) {}

std::string StandardCodecCoder::name() const {
  return to_string(codec_) + "_q" + std::to_string(quality_);
}

Image8 StandardCodecCoder::code(const Image8& image) {
  return encode_standard(*adapter_, image, codec_, quality_).reconstruction;
}

std::string to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kUncoded:
      return "uncoded";
    case StrategyKind::kReconstructions:
      return "reconstructions";
    case StrategyKind::kMixed:
      return "mixed";
    case StrategyKind::kFinetune:
      return "finetune";
  }
  return "?";
}

StrategyKind parse_strategy_kind(const std::string& name) {
  for (auto k : {StrategyKind::kUncoded, StrategyKind::kReconstructions, StrategyKind::kMixed,
                 StrategyKind::kFinetune}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown strategy '" + name +
                    "' (expected uncoded, reconstructions, mixed or finetune)");
}

void TrainingStrategy::validate() const {
  if (pretrain_steps < 0 || finetune_steps < 0) throw ConfigError("negative step budget");
  if (budget() < 1) throw ConfigError("strategy budget must be >= 1");
  if (kind != StrategyKind::kFinetune && finetune_steps != 0) {
    throw ConfigError("only the finetune strategy has a fine-tune phase");
  }
}

TrainingStrategy TrainingStrategy::uncoded(std::int64_t steps) {
  return {StrategyKind::kUncoded, steps, 0};
}
TrainingStrategy TrainingStrategy::reconstructions(std::int64_t steps) {
  return {StrategyKind::kReconstructions, steps, 0};
}
TrainingStrategy TrainingStrategy::mixed(std::int64_t steps) {
  return {StrategyKind::kMixed, steps, 0};
}
TrainingStrategy TrainingStrategy::finetune(std::int64_t total) {
  const std::int64_t finetune_part = total / 4;
  return {StrategyKind::kFinetune, total - finetune_part, finetune_part};
}
TrainingStrategy TrainingStrategy::finetune(std::int64_t pretrain, std::int64_t finetune) {
  return {StrategyKind::kFinetune, pretrain, finetune};
}

namespace {

// Endless, seeded sample order. `mixed` interleaves an original and a
// reconstruction at every position of a 2N epoch.
class SampleStream {
 public:
  SampleStream(std::size_t n, std::uint64_t seed, bool reconstructed, bool mixed)
      : n_(n), seed_(seed), reconstructed_(reconstructed), mixed_(mixed) {}

  SampleRef next() {
    if (pos_ == epoch_.size()) refill();
    return epoch_[pos_++];
  }

 private:
  void refill() {
    std::mt19937_64 rng(seed_ ^ (0x9E3779B97F4A7C15ull * (epoch_index_ + 1)));
    ++epoch_index_;
    std::vector<std::size_t> p(n_);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    epoch_.clear();
    if (mixed_) {
      std::vector<std::size_t> q(n_);
      std::iota(q.begin(), q.end(), 0);
      std::shuffle(q.begin(), q.end(), rng);
      for (std::size_t i = 0; i < n_; ++i) {
        epoch_.push_back({p[i], false});
        epoch_.push_back({q[i], true});
      }
    } else {
      for (auto i : p) epoch_.push_back({i, reconstructed_});
    }
    pos_ = 0;
  }

  std::size_t n_;
  std::uint64_t seed_;
  bool reconstructed_;
  bool mixed_;
  std::uint64_t epoch_index_ = 0;
  std::vector<SampleRef> epoch_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::vector<SampleRef>> strategy_schedule(const TrainingStrategy& strategy,
                                                      std::size_t num_samples, int batch_size,
                                                      std::uint64_t seed) {
  strategy.validate();
  if (num_samples == 0) throw DataError("segmentation training set is empty");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  std::vector<std::vector<SampleRef>> steps;
  steps.reserve(static_cast<std::size_t>(strategy.budget()));
  auto run = [&](SampleStream stream, std::int64_t count) {
    for (std::int64_t s = 0; s < count; ++s) {
      std::vector<SampleRef> batch;
      for (int b = 0; b < batch_size; ++b) batch.push_back(stream.next());
      steps.push_back(std::move(batch));
    }
  };
  switch (strategy.kind) {
    case StrategyKind::kUncoded:
      run(SampleStream(num_samples, seed, false, false), strategy.pretrain_steps);
      break;
    case StrategyKind::kReconstructions:
      run(SampleStream(num_samples, seed, true, false), strategy.pretrain_steps);
      break;
    case StrategyKind::kMixed:
      run(SampleStream(num_samples, seed, false, true), strategy.pretrain_steps);
      break;
    case StrategyKind::kFinetune:
      run(SampleStream(num_samples, seed, false, false), strategy.pretrain_steps);
      run(SampleStream(num_samples, seed + 1, true, false), strategy.finetune_steps);
      break;
  }
  return steps;
}

std::vector<Sample> code_dataset(const std::vector<Sample>& dataset, ImageCoder& coder) {
  std::vector<Sample> out;
  out.reserve(dataset.size());
  for (const auto& s : dataset) {
    Sample c;
    c.name = s.name;
    c.image = coder.code(s.image);
    if (!c.image.same_shape(s.image)) {
      throw DataError(coder.name() + " changed the size of " + s.name);
    }
    c.label = s.label;
    out.push_back(std::move(c));
  }
  return out;
}

SegTrainReport train_segmentation(SegmentationModel& model, const std::vector<Sample>& dataset,
                                  const TrainingStrategy& strategy, ImageCoder* coder,
                                  const SegTrainOptions& options) {
  strategy.validate();
  if (dataset.empty()) throw DataError("segmentation training set is empty");
  for (const auto& s : dataset) {
    if (!s.has_label()) throw DataError("sample " + s.name + " has no label map");
  }
  const bool needs_reconstructions = strategy.kind != StrategyKind::kUncoded;
  if (needs_reconstructions && coder == nullptr) {
    throw ConfigError("strategy " + to_string(strategy.kind) + " needs a codec");
  }
  const auto coded = needs_reconstructions ? code_dataset(dataset, *coder) : std::vector<Sample>{};

  const auto schedule = strategy_schedule(strategy, dataset.size(), options.batch_size, options.seed);
  std::mt19937_64 flip_rng(options.seed ^ 0x5EEDF11Eull);
  std::bernoulli_distribution flip(0.5);
  SegTrainReport report;
  for (const auto& step : schedule) {
    std::vector<Image8> images;
    std::vector<SegmentationMap> labels;
    for (const auto& ref : step) {
      const auto& sample = ref.reconstructed ? coded[ref.index] : dataset[ref.index];
      ref.reconstructed ? ++report.reconstructed_samples : ++report.original_samples;
      if (options.flip_augment && flip(flip_rng)) {
        images.push_back(flip_horizontal(sample.image));
        labels.push_back(flip_horizontal(sample.label));
      } else {
        images.push_back(sample.image);
        labels.push_back(sample.label);
      }
    }
    report.losses.push_back(model.train_batch(images, labels));
    ++report.steps;
  }
  return report;
}

ConfusionMatrix evaluate_segmentation(SegmentationModel& model, const std::vector<Sample>& dataset) {
  if (dataset.empty()) throw DataError("evaluation set is empty");
  ConfusionMatrix cm(model.num_classes());
  for (const auto& s : dataset) {
    if (!s.has_label()) throw DataError("sample " + s.name + " has no label map");
    cm.accumulate(model.predict(s.image), s.label);
  }
  return cm;
}

nlohmann::json MiouTable::to_json() const {
  nlohmann::json j;
  j["models"] = models;
  j["codings"] = codings;
  j["miou"] = miou;
  return j;
}

MiouTable evaluate_matrix(const std::vector<NamedModel>& models,
                          const std::vector<ImageCoder*>& codings,
                          const std::vector<Sample>& dataset) {
  if (dataset.empty()) throw DataError("evaluation set is empty");
  MiouTable table;
  for (const auto& m : models) table.models.push_back(m.name);
  std::vector<std::vector<Sample>> coded;
  for (auto* c : codings) {
    table.codings.push_back(c->name());
    coded.push_back(code_dataset(dataset, *c));
  }
  for (const auto& m : models) {
    std::vector<double> row;
    std::vector<ConfusionMatrix> matrices;
    for (const auto& set : coded) {
      matrices.push_back(evaluate_segmentation(*m.model, set));
      row.push_back(miou(matrices.back()));
    }
    table.miou.push_back(std::move(row));
    table.matrices.push_back(std::move(matrices));
  }
  return table;
}

void save_segmentation_model(const std::filesystem::path& path, SegmentationModel& model) {
  write_checkpoint(path, model.to_checkpoint());
}

std::unique_ptr<SegmentationModel> load_segmentation_model(const std::filesystem::path& path) {
  const auto ckpt = read_checkpoint(path);
  if (ckpt.meta.value("kind", std::string()) != "segmentation") {
    throw FormatError(FormatErrorKind::kBadHeader, path.string() + " is not a segmentation model");
  }
  if (ckpt.meta.value("model", std::string()) != "tiny-segnet") {
    throw FormatError(FormatErrorKind::kBadHeader, "unknown segmentation model");
  }
  auto model = std::make_unique<TinySegNet>(ckpt.meta.at("config").get<TinySegNetConfig>());
  model->restore(ckpt);
  return model;
}

}  // namespace scmp
