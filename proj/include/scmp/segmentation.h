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

#ifndef SCMP_SEGMENTATION_H_
#define SCMP_SEGMENTATION_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>
#include <torch/torch.h>

#include "scmp/checkpoint.h"
#include "scmp/codecs.h"
#include "scmp/dataset.h"
#include "scmp/image.h"
#include "scmp/metrics.h"
#include "scmp/networks.h"

namespace scmp {

// Any trainable per-pixel classifier.
class SegmentationModel {
 public:
  virtual ~SegmentationModel() = default;
  virtual std::string name() const = 0;
  virtual int num_classes() const = 0;
  // One optimiser step on a batch; returns the training loss. Pixels
  // labelled SegmentationMap::kIgnore do not contribute.
  virtual double train_batch(const std::vector<Image8>& images,
                             const std::vector<SegmentationMap>& labels) = 0;
  // Per-pixel argmax at input resolution. Throws ConfigError for input
  // sizes the model cannot process.
  virtual SegmentationMap predict(const Image8& image) = 0;

  virtual Checkpoint to_checkpoint() = 0;
  virtual void restore(const Checkpoint& ckpt) = 0;
};

struct TinySegNetConfig {
  int classes = 4;
  int base_channels = 16;  // doubles at each of the 4 downsampling stages, capped at 8x
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;

  void validate() const;
  friend void to_json(nlohmann::json& j, const TinySegNetConfig& c);
  friend void from_json(const nlohmann::json& j, TinySegNetConfig& c);
};

// Fully convolutional encoder-decoder: 4 stride-2 stages down, 4 up with
// skip connections, trained with Adam on masked cross-entropy. Inputs must
// have both dims divisible by 16.
class TinySegNet : public SegmentationModel {
 public:
  explicit TinySegNet(const TinySegNetConfig& config);
  ~TinySegNet() override;

  std::string name() const override { return "tiny-segnet"; }
  int num_classes() const override { return config_.classes; }
  double train_batch(const std::vector<Image8>& images,
                     const std::vector<SegmentationMap>& labels) override;
  SegmentationMap predict(const Image8& image) override;
  Checkpoint to_checkpoint() override;
  void restore(const Checkpoint& ckpt) override;

  const TinySegNetConfig& config() const { return config_; }

 private:
  struct Net;
  TinySegNetConfig config_;
  std::unique_ptr<Net> net_;
  std::unique_ptr<torch::optim::Adam> optimizer_;
};

// Turns an original image into the version a model is trained or
// evaluated on.
class ImageCoder {
 public:
  virtual ~ImageCoder() = default;
  virtual std::string name() const = 0;
  virtual Image8 code(const Image8& image) = 0;
};

class IdentityCoder : public ImageCoder {
 public:
  std::string name() const override { return "uncoded"; }
  Image8 code(const Image8& image) override { return image; }
};

// Hard-quantized reconstruction through a trained generator.
class GanCoder : public ImageCoder {
 public:
  explicit GanCoder(Generator generator, std::string name = "gan");
  std::string name() const override { return name_; }
  Image8 code(const Image8& image) override;

 private:
  Generator generator_;
  std::string name_;
};

class StandardCodecCoder : public ImageCoder {
 public:
  StandardCodecCoder(std::shared_ptr<CodecAdapter> adapter, StandardCodec codec, int quality);
  std::string name() const override;
  Image8 code(const Image8& image) override;

 private:
  std::shared_ptr<CodecAdapter> adapter_;
  StandardCodec codec_;
  int quality_;
};

enum class StrategyKind { kUncoded, kReconstructions, kMixed, kFinetune };
std::string to_string(StrategyKind kind);
StrategyKind parse_strategy_kind(const std::string& name);

// Optimiser-step budget of one segmentation training run. For finetune the
// budget splits into pretrain_steps on originals followed by finetune_steps
// on reconstructions; for every other kind finetune_steps is 0.
struct TrainingStrategy {
  StrategyKind kind = StrategyKind::kUncoded;
  std::int64_t pretrain_steps = 0;
  std::int64_t finetune_steps = 0;

  std::int64_t budget() const { return pretrain_steps + finetune_steps; }
  void validate() const;

  static TrainingStrategy uncoded(std::int64_t steps);
  static TrainingStrategy reconstructions(std::int64_t steps);
  static TrainingStrategy mixed(std::int64_t steps);
  // 3:1 split of `total` (original : reconstructed), rounding toward more
  // pretraining.
  static TrainingStrategy finetune(std::int64_t total);
  static TrainingStrategy finetune(std::int64_t pretrain, std::int64_t finetune);
};

struct SegTrainOptions {
  int batch_size = 4;
  std::uint64_t seed = 0;
  bool flip_augment = true;
};

struct SegTrainReport {
  std::int64_t steps = 0;
  std::int64_t original_samples = 0;
  std::int64_t reconstructed_samples = 0;
  std::vector<double> losses;  // one per step
};

// Where each training sample of one step comes from.
struct SampleRef {
  std::size_t index;    // into the dataset
  bool reconstructed;   // reconstruction rather than original
};

// The exact per-step sample schedule of a strategy over a dataset of
// `num_samples` images. Epochs cycle over N (or 2N for mixed, strictly
// alternating original/reconstruction) samples in a seeded order.
std::vector<std::vector<SampleRef>> strategy_schedule(const TrainingStrategy& strategy,
                                                      std::size_t num_samples, int batch_size,
                                                      std::uint64_t seed);

// Trains `model` per `strategy`. `coder` produces the reconstructions and
// may be null only for the uncoded strategy. Throws DataError when a sample
// has no label.
SegTrainReport train_segmentation(SegmentationModel& model, const std::vector<Sample>& dataset,
                                  const TrainingStrategy& strategy, ImageCoder* coder,
                                  const SegTrainOptions& options = {});

// Reconstructions of every sample (labels carried over).
std::vector<Sample> code_dataset(const std::vector<Sample>& dataset, ImageCoder& coder);

// One global confusion matrix over all samples.
ConfusionMatrix evaluate_segmentation(SegmentationModel& model, const std::vector<Sample>& dataset);

struct MiouTable {
  std::vector<std::string> models;  // rows
  std::vector<std::string> codings;  // columns
  std::vector<std::vector<double>> miou;  // [row][column]
  std::vector<std::vector<ConfusionMatrix>> matrices;

  nlohmann::json to_json() const;
};

struct NamedModel {
  std::string name;
  SegmentationModel* model;
};

// mIoU of every model on every coded version of `dataset`. Each coding is
// applied once and shared across models. Throws DataError on an empty set.
MiouTable evaluate_matrix(const std::vector<NamedModel>& models,
                          const std::vector<ImageCoder*>& codings,
                          const std::vector<Sample>& dataset);

// Segmentation model checkpoints use the same container as the codec.
void save_segmentation_model(const std::filesystem::path& path, SegmentationModel& model);
std::unique_ptr<SegmentationModel> load_segmentation_model(const std::filesystem::path& path);

}  // namespace scmp

#endif  // SCMP_SEGMENTATION_H_
