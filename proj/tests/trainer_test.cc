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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <gtest/gtest.h>
#include <torch/torch.h>

#include "scmp/checkpoint.h"
#include "scmp/errors.h"
#include "scmp/losses.h"
#include "scmp/trainer.h"

namespace scmp {
namespace {

namespace fs = std::filesystem;

std::vector<Image8> random_images(int n, int h, int w, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> u(0, 255);
  std::vector<Image8> out;
  for (int i = 0; i < n; ++i) {
    Image8 img(h, w, 3);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(u(rng));
    out.push_back(std::move(img));
  }
  return out;
}

TrainConfig small_train(std::uint64_t seed, double lr = 2e-4) {
  TrainConfig t;
  t.epochs = 1;
  t.batch_size = 2;
  t.seed = seed;
  t.learning_rate = lr;
  return t;
}

fs::path temp_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("scmp_trainer_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<torch::Tensor> snapshot(torch::nn::Module& m) {
  std::vector<torch::Tensor> out;
  for (const auto& p : m.parameters()) out.push_back(p.detach().clone());
  return out;
}

bool unchanged(torch::nn::Module& m, const std::vector<torch::Tensor>& before) {
  const auto params = m.parameters();
  for (size_t i = 0; i < params.size(); ++i) {
    if (!torch::equal(params[i].detach(), before[i])) return false;
  }
  return true;
}

TEST(Trainer, ZeroLearningRateRepeatsLosses) {
  AdversarialTrainer t(CodecConfig::tiny(4, 4), DiscriminatorSpec::tiny(), small_train(1, 0.0));
  const auto batch = to_batch(random_images(2, 64, 64, 1));
  const auto a = t.train_step(batch);
  const auto b = t.train_step(batch);
  EXPECT_EQ(a.gan_g, b.gan_g);
  EXPECT_EQ(a.fm, b.fm);
  EXPECT_EQ(a.sim, b.sim);
  EXPECT_EQ(a.gen_total, b.gen_total);
  EXPECT_EQ(a.disc, b.disc);
  EXPECT_EQ(b.step, 2);
}

TEST(Trainer, SeededRunsAreIdentical) {
  const auto batch = to_batch(random_images(2, 64, 64, 2));
  std::vector<LossReport> runs[2];
  for (auto& run : runs) {
    AdversarialTrainer t(CodecConfig::tiny(4, 4), DiscriminatorSpec::tiny(), small_train(9));
    for (int i = 0; i < 3; ++i) run.push_back(t.train_step(batch));
  }
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(to_csv_row(runs[0][i]), to_csv_row(runs[1][i]));
  }
}

TEST(Trainer, ReportsConsistentLossParts) {
  AdversarialTrainer t(CodecConfig::tiny(4, 4), DiscriminatorSpec::tiny(), small_train(3));
  const auto r = t.train_step(to_batch(random_images(2, 64, 64, 3)));
  EXPECT_GE(r.gan_g, 0.0);
  EXPECT_GE(r.fm, 0.0);
  EXPECT_GE(r.sim, 0.0);
  EXPECT_GE(r.disc, 0.0);
  EXPECT_NEAR(r.gen_total, r.gan_g + r.fm + r.sim, 1e-5);
}

TEST(Trainer, GeneratorUpdateLeavesDiscriminatorUntouched) {
  AdversarialTrainer t(CodecConfig::tiny(4, 4), DiscriminatorSpec::tiny(), small_train(4, 1e-2));
  const auto batch = to_batch(random_images(2, 64, 64, 4));
  const auto d_before = snapshot(*t.discriminator());
  const auto g_before = snapshot(*t.generator());
  t.generator_step(batch);
  EXPECT_TRUE(unchanged(*t.discriminator(), d_before));
  EXPECT_FALSE(unchanged(*t.generator(), g_before));
}

TEST(Trainer, DiscriminatorUpdateLeavesGeneratorUntouched) {
  AdversarialTrainer t(CodecConfig::tiny(4, 4), DiscriminatorSpec::tiny(), small_train(5, 1e-2));
  const auto batch = to_batch(random_images(2, 64, 64, 5));
  const auto d_before = snapshot(*t.discriminator());
  const auto g_before = snapshot(*t.generator());
  t.discriminator_step(batch);
  EXPECT_TRUE(unchanged(*t.generator(), g_before));
  EXPECT_FALSE(unchanged(*t.discriminator(), d_before));
  for (const auto& p : t.generator()->parameters()) {
    EXPECT_TRUE(!p.grad().defined() || p.grad().abs().sum().item<double>() == 0.0);
  }
}

// A one-convolution generator against the library discriminator and losses,
// all in double precision.
TEST(Trainer, ToyGeneratorGradientMatchesFiniteDifferences) {
  torch::manual_seed(21);
  MultiScaleDiscriminator d(DiscriminatorSpec::tiny());
  d->to(torch::kFloat64);
  const auto x = torch::rand({1, 3, 64, 64}, torch::kFloat64) * 2 - 1;
  auto weight = (torch::randn({3, 3, 3, 3}, torch::kFloat64) * 0.3).requires_grad_(true);

  auto total_loss = [&](const torch::Tensor& w) {
    const auto x_hat = torch::tanh(torch::conv2d(x, w, {}, 1, 1));
    std::vector<std::vector<torch::Tensor>> real_features;
    {
      torch::NoGradGuard no_grad;
      real_features = features_of(d->forward(x));
    }
    const auto fake = d->forward(x_hat);
    return generator_total_loss(gan_loss_generator(logits_of(fake)),
                                feature_matching_loss(real_features, features_of(fake)),
                                similarity_loss(x, x_hat), LossWeights{});
  };

  total_loss(weight).backward();
  const auto analytic = weight.grad().flatten().clone();

  std::mt19937 rng(3);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(analytic.size(0)) - 1);
  const double h = 1e-6;
  torch::NoGradGuard no_grad;
  for (int k = 0; k < 20; ++k) {
    const int i = pick(rng);
    auto plus = weight.detach().clone();
    auto minus = weight.detach().clone();
    plus.view(-1)[i] += h;
    minus.view(-1)[i] -= h;
    const double numeric =
        (total_loss(plus).item<double>() - total_loss(minus).item<double>()) / (2 * h);
    const double a = analytic[i].item<double>();
    const double scale = std::max({std::abs(a), std::abs(numeric), 1e-6});
    EXPECT_LE(std::abs(a - numeric) / scale, 1e-3) << "weight " << i;
  }
}

TEST(Training, EpochBookkeeping) {
  EXPECT_EQ(steps_per_epoch(8, 2), 4);
  EXPECT_EQ(steps_per_epoch(9, 2), 5);
  EXPECT_EQ(steps_per_epoch(1, 4), 1);

  const auto dir = temp_dir("bookkeeping");
  auto cfg = small_train(6);
  cfg.log_path = dir / "log.csv";
  cfg.checkpoint_dir = dir / "ckpt";
  const auto run = train_codec(random_images(8, 64, 64, 6), CodecConfig::tiny(4, 4),
                               DiscriminatorSpec::tiny(), cfg);
  ASSERT_EQ(run.log.size(), 4u);
  EXPECT_EQ(run.log.back().step, 4);

  std::ifstream log(cfg.log_path);
  std::string line;
  std::getline(log, line);
  EXPECT_EQ(line, kLossLogHeader);
  int rows = 0;
  while (std::getline(log, line)) ++rows;
  EXPECT_EQ(rows, 4);
  EXPECT_TRUE(fs::exists(cfg.checkpoint_dir / "epoch_001.sckp"));
  EXPECT_TRUE(fs::exists(cfg.checkpoint_dir / "latest.sckp"));
}

TEST(Training, EpochOrderIsAPermutationFixedBySeed) {
  auto a = epoch_order(10, 5, 0);
  EXPECT_EQ(a, epoch_order(10, 5, 0));
  EXPECT_NE(a, epoch_order(10, 5, 1));
  std::sort(a.begin(), a.end());
  for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], i);
}

TEST(Training, RejectsBadInput) {
  EXPECT_THROW(train_codec({}, CodecConfig::tiny(4, 4), DiscriminatorSpec::tiny(), small_train(0)),
               DataError);
  auto cfg = small_train(0);
  cfg.learning_rate = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = small_train(0);
  cfg.epochs = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Training, ResumeReproducesLaterLosses) {
  const auto images = random_images(4, 64, 64, 7);
  const auto dir = temp_dir("resume");
  auto cfg = small_train(8);
  cfg.epochs = 2;
  const auto full = train_codec(images, CodecConfig::tiny(4, 4), DiscriminatorSpec::tiny(), cfg);

  auto first = cfg;
  first.epochs = 1;
  first.checkpoint_dir = dir;
  train_codec(images, CodecConfig::tiny(4, 4), DiscriminatorSpec::tiny(), first);
  const auto resumed = train_codec(images, CodecConfig::tiny(4, 4), DiscriminatorSpec::tiny(),
                                   cfg, dir / "epoch_001.sckp");
  ASSERT_EQ(full.log.size(), 4u);
  ASSERT_EQ(resumed.log.size(), 2u);
  for (size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(to_csv_row(resumed.log[i]), to_csv_row(full.log[i + 2]));
  }
}

TEST(Checkpoint, GeneratorRoundTrip) {
  const auto dir = temp_dir("generator");
  torch::manual_seed(10);
  Generator g(CodecConfig::tiny(4, 2), QuantizerMode::kSoft);
  save_generator(dir / "g.sckp", g);
  auto loaded = load_generator(dir / "g.sckp");
  EXPECT_EQ(loaded->training_mode(), QuantizerMode::kSoft);
  EXPECT_EQ(loaded->config().levels, 2);
  const auto a = g->named_parameters();
  const auto b = loaded->named_parameters();
  ASSERT_EQ(a.size(), b.size());
  for (const auto& p : a) EXPECT_TRUE(torch::equal(p.value(), b[p.key()]));
}

TEST(Checkpoint, CorruptFilesAreRejected) {
  const auto dir = temp_dir("corrupt");
  Checkpoint c;
  c.meta = {{"kind", "generator"}};
  c.tensors.emplace_back("w", torch::arange(6, torch::kFloat32).view({2, 3}));
  c.blobs["b"] = "xyz";
  write_checkpoint(dir / "c.sckp", c);
  const auto back = read_checkpoint(dir / "c.sckp");
  EXPECT_EQ(back.meta, c.meta);
  EXPECT_TRUE(torch::equal(*back.find("w"), c.tensors[0].second));
  EXPECT_EQ(back.blobs.at("b"), "xyz");

  std::string bytes;
  {
    std::ifstream in(dir / "c.sckp", std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(in), {});
  }
  auto write = [&](const std::string& data) {
    std::ofstream out(dir / "bad.sckp", std::ios::binary);
    out << data;
  };
  write("XXXX" + bytes.substr(4));
  EXPECT_THROW(read_checkpoint(dir / "bad.sckp"), FormatError);
  write(bytes.substr(0, bytes.size() - 4));
  EXPECT_THROW(read_checkpoint(dir / "bad.sckp"), FormatError);
  EXPECT_THROW(read_checkpoint(dir / "missing.sckp"), DataError);
}

}  // namespace
}  // namespace scmp
