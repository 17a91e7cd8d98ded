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

#include "scmp/trainer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>

#include "scmp/errors.h"

namespace scmp {

void TrainConfig::validate() const {
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ConfigError("Adam betas must lie in [0, 1)");
  }
}

void to_json(nlohmann::json& j, const TrainConfig& c) {
  j = nlohmann::json{{"epochs", c.epochs},
                     {"learning_rate", c.learning_rate},
                     {"beta1", c.beta1},
                     {"beta2", c.beta2},
                     {"batch_size", c.batch_size},
                     {"seed", c.seed},
                     {"mode", to_string(c.mode)},
                     {"weights",
                      {{"gan", c.weights.gan},
                       {"feature_matching", c.weights.feature_matching},
                       {"similarity", c.weights.similarity}}},
                     {"checkpoint_dir", c.checkpoint_dir.string()},
                     {"log_path", c.log_path.string()}};
}

void from_json(const nlohmann::json& j, TrainConfig& c) {
  const TrainConfig d;
  c.epochs = j.value("epochs", d.epochs);
  c.learning_rate = j.value("learning_rate", d.learning_rate);
  c.beta1 = j.value("beta1", d.beta1);
  c.beta2 = j.value("beta2", d.beta2);
  c.batch_size = j.value("batch_size", d.batch_size);
  c.seed = j.value("seed", d.seed);
  c.mode = parse_quantizer_mode(j.value("mode", to_string(d.mode)));
  if (j.contains("weights")) {
    const auto& w = j.at("weights");
    c.weights.gan = w.value("gan", d.weights.gan);
    c.weights.feature_matching = w.value("feature_matching", d.weights.feature_matching);
    c.weights.similarity = w.value("similarity", d.weights.similarity);
  }
  c.checkpoint_dir = j.value("checkpoint_dir", std::string());
  c.log_path = j.value("log_path", std::string());
}

std::string to_csv_row(const LossReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%lld,%.9g,%.9g,%.9g,%.9g,%.9g",
                static_cast<long long>(r.step), r.gan_g, r.fm, r.sim, r.gen_total, r.disc);
  return buf;
}

namespace {

void set_requires_grad(torch::nn::Module& m, bool flag) {
  for (auto& p : m.parameters()) p.set_requires_grad(flag);
}

torch::optim::AdamOptions adam_options(const TrainConfig& t) {
  return torch::optim::AdamOptions(t.learning_rate).betas({t.beta1, t.beta2});
}

}  // namespace

AdversarialTrainer::AdversarialTrainer(const CodecConfig& codec, const DiscriminatorSpec& disc,
                                       const TrainConfig& train)
    : codec_(codec), disc_spec_(disc), train_(train) {
  codec_.validate();
  disc_spec_.validate();
  if (train_.learning_rate < 0.0) throw ConfigError("learning_rate must be >= 0");
  torch::manual_seed(train_.seed);
  generator_ = Generator(codec_, train_.mode);
  discriminator_ = MultiScaleDiscriminator(disc_spec_);
  opt_g_ = std::make_unique<torch::optim::Adam>(generator_->parameters(), adam_options(train_));
  opt_d_ = std::make_unique<torch::optim::Adam>(discriminator_->parameters(),
                                                adam_options(train_));
}

AdversarialTrainer::Forward AdversarialTrainer::generator_losses(const torch::Tensor& batch) {
  const auto x_hat = generator_->forward(batch);
  std::vector<std::vector<torch::Tensor>> real_features;
  {
    torch::NoGradGuard no_grad;
    real_features = features_of(discriminator_->forward(batch));
  }
  const auto fake = discriminator_->forward(x_hat);
  Forward f;
  f.gan = gan_loss_generator(logits_of(fake));
  f.fm = feature_matching_loss(real_features, features_of(fake));
  f.sim = similarity_loss(batch, x_hat);
  f.total = generator_total_loss(f.gan, f.fm, f.sim, train_.weights);
  return f;
}

torch::Tensor AdversarialTrainer::discriminator_loss(const torch::Tensor& batch) {
  torch::Tensor x_hat;
  {
    torch::NoGradGuard no_grad;
    x_hat = generator_->forward(batch);
  }
  const auto loss = gan_loss_discriminator(logits_of(discriminator_->forward(batch)),
                                           logits_of(discriminator_->forward(x_hat)));
  if (!std::isfinite(loss.item<double>())) {
    throw NumericError("non-finite discriminator loss at step " + std::to_string(step_ + 1));
  }
  return loss;
}

LossReport AdversarialTrainer::generator_step(const torch::Tensor& batch) {
  generator_->train();
  discriminator_->train();
  set_requires_grad(*discriminator_, false);
  const auto g = generator_losses(batch);
  opt_g_->zero_grad();
  g.total.backward();
  opt_g_->step();
  set_requires_grad(*discriminator_, true);

  LossReport report;
  report.step = step_;
  report.gan_g = g.gan.item<double>();
  report.fm = g.fm.item<double>();
  report.sim = g.sim.item<double>();
  report.gen_total = g.total.item<double>();
  return report;
}

double AdversarialTrainer::discriminator_step(const torch::Tensor& batch) {
  generator_->train();
  discriminator_->train();
  const auto d = discriminator_loss(batch);
  opt_d_->zero_grad();
  d.backward();
  opt_d_->step();
  return d.item<double>();
}

LossReport AdversarialTrainer::train_step(const torch::Tensor& batch) {
  auto report = generator_step(batch);
  report.disc = discriminator_step(batch);
  report.step = ++step_;
  return report;
}

LossReport AdversarialTrainer::evaluate_losses(const torch::Tensor& batch) {
  torch::NoGradGuard no_grad;
  const auto g = generator_losses(batch);
  const auto d = discriminator_loss(batch);
  LossReport report;
  report.step = step_;
  report.gan_g = g.gan.item<double>();
  report.fm = g.fm.item<double>();
  report.sim = g.sim.item<double>();
  report.gen_total = g.total.item<double>();
  report.disc = d.item<double>();
  return report;
}

Checkpoint AdversarialTrainer::to_checkpoint() {
  Checkpoint ckpt;
  ckpt.meta = {{"kind", "trainer"},
               {"codec", codec_},
               {"discriminator", disc_spec_},
               {"train", train_},
               {"step", step_},
               {"epochs_completed", epochs_completed_}};
  put_module(ckpt, "generator", *generator_);
  put_module(ckpt, "discriminator", *discriminator_);
  ckpt.blobs["optimizer.generator"] = serialize_optimizer(*opt_g_);
  ckpt.blobs["optimizer.discriminator"] = serialize_optimizer(*opt_d_);
  return ckpt;
}

void AdversarialTrainer::restore(const Checkpoint& ckpt) {
  try {
    if (ckpt.meta.at("kind") != "trainer") {
      throw FormatError(FormatErrorKind::kBadHeader, "not a trainer checkpoint");
    }
    if (ckpt.meta.at("codec") != nlohmann::json(codec_) ||
        ckpt.meta.at("discriminator") != nlohmann::json(disc_spec_)) {
      throw ConfigError("checkpoint was written for a different architecture");
    }
    step_ = ckpt.meta.at("step").get<std::int64_t>();
    epochs_completed_ = ckpt.meta.at("epochs_completed").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(FormatErrorKind::kBadHeader, e.what());
  }
  load_module(ckpt, "generator", *generator_);
  load_module(ckpt, "discriminator", *discriminator_);
  const auto g = ckpt.blobs.find("optimizer.generator");
  const auto d = ckpt.blobs.find("optimizer.discriminator");
  if (g == ckpt.blobs.end() || d == ckpt.blobs.end()) {
    throw FormatError(FormatErrorKind::kBadHeader, "checkpoint lacks optimizer state");
  }
  restore_optimizer(*opt_g_, g->second);
  restore_optimizer(*opt_d_, d->second);
}

std::int64_t steps_per_epoch(std::size_t num_images, int batch_size) {
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  const auto b = static_cast<std::size_t>(batch_size);
  return static_cast<std::int64_t>((num_images + b - 1) / b);
}

std::vector<std::size_t> epoch_order(std::size_t num_images, std::uint64_t seed, int epoch) {
  std::vector<std::size_t> order(num_images);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(epoch + 1)));
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

TrainingRun train_codec(const std::vector<Image8>& images, const CodecConfig& codec,
                        const DiscriminatorSpec& disc, const TrainConfig& train,
                        const std::filesystem::path& resume_from, const StepCallback& on_step) {
  train.validate();
  if (images.empty()) throw DataError("training set is empty");
  for (const auto& img : images) {
    if (!img.same_shape(images.front())) {
      throw DataError("training images must share one size");
    }
  }
  TrainingRun run;
  run.trainer = std::make_unique<AdversarialTrainer>(codec, disc, train);
  auto& trainer = *run.trainer;
  if (!resume_from.empty()) trainer.restore(read_checkpoint(resume_from));

  const auto all = to_batch(images);
  std::ofstream log;
  if (!train.log_path.empty()) {
    if (train.log_path.has_parent_path()) {
      std::filesystem::create_directories(train.log_path.parent_path());
    }
    const bool append = !resume_from.empty() && std::filesystem::exists(train.log_path);
    log.open(train.log_path, append ? std::ios::app : std::ios::trunc);
    if (!log) throw DataError("cannot write " + train.log_path.string());
    if (!append) log << kLossLogHeader << '\n';
  }

  const auto b = static_cast<std::size_t>(train.batch_size);
  for (int epoch = trainer.epochs_completed(); epoch < train.epochs; ++epoch) {
    const auto order = epoch_order(images.size(), train.seed, epoch);
    for (std::size_t start = 0; start < order.size(); start += b) {
      const auto end = std::min(order.size(), start + b);
      std::vector<std::int64_t> idx(order.begin() + static_cast<std::ptrdiff_t>(start),
                                    order.begin() + static_cast<std::ptrdiff_t>(end));
      const auto batch = all.index_select(0, torch::tensor(idx, torch::kInt64));
      const auto report = trainer.train_step(batch);
      run.log.push_back(report);
      if (log.is_open()) log << to_csv_row(report) << '\n' << std::flush;
      if (on_step) on_step(report);
    }
    trainer.set_epochs_completed(epoch + 1);
    if (!train.checkpoint_dir.empty()) {
      char name[32];
      std::snprintf(name, sizeof(name), "epoch_%03d.sckp", epoch + 1);
      const auto ckpt = trainer.to_checkpoint();
      write_checkpoint(train.checkpoint_dir / name, ckpt);
      write_checkpoint(train.checkpoint_dir / "latest.sckp", ckpt);
    }
  }
  return run;
}

void save_generator(const std::filesystem::path& path, Generator& generator) {
  Checkpoint ckpt;
  ckpt.meta = {{"kind", "generator"},
               {"codec", generator->config()},
               {"mode", to_string(generator->training_mode())}};
  put_module(ckpt, "generator", *generator);
  write_checkpoint(path, ckpt);
}

Generator load_generator(const std::filesystem::path& path) {
  const auto ckpt = read_checkpoint(path);
  CodecConfig codec;
  QuantizerMode mode;
  try {
    const auto kind = ckpt.meta.at("kind").get<std::string>();
    codec = ckpt.meta.at("codec").get<CodecConfig>();
    mode = kind == "trainer"
               ? parse_quantizer_mode(ckpt.meta.at("train").at("mode").get<std::string>())
               : parse_quantizer_mode(ckpt.meta.at("mode").get<std::string>());
    if (kind != "trainer" && kind != "generator") {
      throw FormatError(FormatErrorKind::kBadHeader, "unknown checkpoint kind " + kind);
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(FormatErrorKind::kBadHeader, e.what());
  }
  Generator g(codec, mode);
  load_module(ckpt, "generator", *g);
  g->eval();
  return g;
}

}  // namespace scmp
