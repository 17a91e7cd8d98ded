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

#ifndef SCMP_TRAINER_H_
#define SCMP_TRAINER_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>
#include <torch/torch.h>

#include "scmp/checkpoint.h"
#include "scmp/codec_config.h"
#include "scmp/discriminator.h"
#include "scmp/image.h"
#include "scmp/losses.h"
#include "scmp/networks.h"
#include "scmp/quantizer.h"

namespace scmp {

struct TrainConfig {
  int epochs = 50;
  double learning_rate = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  int batch_size = 1;
  std::uint64_t seed = 0;
  QuantizerMode mode = QuantizerMode::kStraightThrough;
  LossWeights weights;
  // Per-epoch checkpoints land here when non-empty.
  std::filesystem::path checkpoint_dir;
  // CSV loss log (one row per step) when non-empty.
  std::filesystem::path log_path;

  // Throws ConfigError. Requires epochs >= 1, batch_size >= 1, lr > 0.
  void validate() const;

  friend void to_json(nlohmann::json& j, const TrainConfig& c);
  friend void from_json(const nlohmann::json& j, TrainConfig& c);
};

struct LossReport {
  std::int64_t step = 0;
  double gan_g = 0.0;      // generator adversarial term
  double fm = 0.0;         // feature matching
  double sim = 0.0;        // pixel MSE
  double gen_total = 0.0;  // weighted generator objective
  double disc = 0.0;       // discriminator objective
};

// Header of the CSV loss log.
inline constexpr const char* kLossLogHeader = "step,L_gan_G,L_fm,L_sim,L_gen_total,L_disc";
std::string to_csv_row(const LossReport& r);

// Alternating least-squares GAN optimisation of a generator against a
// multi-scale discriminator, both with Adam.
class AdversarialTrainer {
 public:
  // Seeds the torch generator with train.seed before building the networks.
  // A zero learning rate is accepted here so that steps can be replayed
  // without changing the weights.
  AdversarialTrainer(const CodecConfig& codec, const DiscriminatorSpec& disc,
                     const TrainConfig& train);

  // One generator update followed by one discriminator update on the same
  // (N, C, H, W) batch in [-1, 1]. The generator step sees the
  // discriminator frozen; the discriminator step sees a detached
  // reconstruction. Throws NumericError on a non-finite loss.
  LossReport train_step(const torch::Tensor& batch);

  // The two halves of train_step. generator_step fills gan_g, fm, sim and
  // gen_total; discriminator_step returns L_disc. Neither advances step().
  LossReport generator_step(const torch::Tensor& batch);
  double discriminator_step(const torch::Tensor& batch);

  // Losses of the current weights without updating anything.
  LossReport evaluate_losses(const torch::Tensor& batch);

  Generator& generator() { return generator_; }
  MultiScaleDiscriminator& discriminator() { return discriminator_; }
  const CodecConfig& codec_config() const { return codec_; }
  const DiscriminatorSpec& discriminator_spec() const { return disc_spec_; }
  const TrainConfig& train_config() const { return train_; }
  std::int64_t step() const { return step_; }
  int epochs_completed() const { return epochs_completed_; }
  void set_epochs_completed(int e) { epochs_completed_ = e; }

  Checkpoint to_checkpoint();
  // Restores weights, optimizer state and counters. The stored codec and
  // discriminator configuration must match this trainer's.
  void restore(const Checkpoint& ckpt);

 private:
  struct Forward {
    torch::Tensor gan, fm, sim, total;
  };
  Forward generator_losses(const torch::Tensor& batch);
  torch::Tensor discriminator_loss(const torch::Tensor& batch);

  CodecConfig codec_;
  DiscriminatorSpec disc_spec_;
  TrainConfig train_;
  Generator generator_{nullptr};
  MultiScaleDiscriminator discriminator_{nullptr};
  std::unique_ptr<torch::optim::Adam> opt_g_;
  std::unique_ptr<torch::optim::Adam> opt_d_;
  std::int64_t step_ = 0;
  int epochs_completed_ = 0;
};

// Number of optimisation steps in one epoch: ceil(N / B).
std::int64_t steps_per_epoch(std::size_t num_images, int batch_size);

// Fixed image order of one epoch, derived from (seed, epoch) alone so that
// a resumed run visits the same batches.
std::vector<std::size_t> epoch_order(std::size_t num_images, std::uint64_t seed, int epoch);

struct TrainingRun {
  std::unique_ptr<AdversarialTrainer> trainer;
  std::vector<LossReport> log;
};

using StepCallback = std::function<void(const LossReport&)>;

// Trains for train.epochs epochs over `images` (all the same size).
// When `resume_from` names a checkpoint, training continues after its last
// completed epoch.
TrainingRun train_codec(const std::vector<Image8>& images, const CodecConfig& codec,
                        const DiscriminatorSpec& disc, const TrainConfig& train,
                        const std::filesystem::path& resume_from = {},
                        const StepCallback& on_step = {});

// Generator-only checkpoint used by the codec CLI.
void save_generator(const std::filesystem::path& path, Generator& generator);
Generator load_generator(const std::filesystem::path& path);

}  // namespace scmp

#endif  // SCMP_TRAINER_H_
