/*
 * Copyright 2026 The bwx Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "bwx/error.hpp"
#include "bwx/mlp.hpp"
#include "temp_dir.hpp"

using bwx::FeatureVector;
using bwx::MlpNetwork;
using bwx::TrainingSample;

namespace {

FeatureVector random_features(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  FeatureVector f{};
  for (auto& v : f) v = g(rng);
  return f;
}

MlpNetwork random_network(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  MlpNetwork net;
  auto p = net.parameters();
  for (auto& v : p) v = 0.7 * g(rng);
  net.set_parameters(p);
  for (auto& m : net.feature_means) m = 0.3 * g(rng);
  for (auto& s : net.feature_stds) s = 0.5 + std::abs(g(rng));
  return net;
}

}  // namespace

TEST_CASE("constant network outputs its output bias") {
  MlpNetwork net;
  net.layers[2].bias = {3.0, -2.0};
  std::mt19937_64 rng(1);
  for (int i = 0; i < 5; ++i) {
    const auto y = net.forward(random_features(rng));
    CHECK(y[0] == 3.0);
    CHECK(y[1] == -2.0);
  }
}

TEST_CASE("hand-built single path equals the analytic tanh composition") {
  MlpNetwork net;
  net.feature_means[4] = 1.0;
  net.feature_stds[4] = 2.0;
  net.layers[0].weights[0 * 18 + 4] = 0.8;
  net.layers[0].bias[0] = 0.1;
  net.layers[1].weights[3 * 10 + 0] = -1.5;
  net.layers[1].bias[3] = 0.2;
  net.layers[2].weights[1 * 10 + 3] = 40.0;
  net.layers[2].bias[1] = 0.5;
  FeatureVector f{};
  f[4] = 2.2;
  const double h1 = std::tanh(0.8 * (2.2 - 1.0) / 2.0 + 0.1);
  const double h2 = std::tanh(-1.5 * h1 + 0.2);
  const auto y = net.forward(f);
  CHECK(std::abs(y[1] - (40.0 * h2 + 0.5)) < 1e-12);
  CHECK(y[0] == 0.0);
  CHECK(std::abs(y[1]) > 1.0);
}

TEST_CASE("non-finite features are rejected") {
  MlpNetwork net;
  FeatureVector f{};
  f[3] = NAN;
  CHECK_THROWS_AS(net.forward(f), bwx::InputError);
}

TEST_CASE("backprop agrees with central differences") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    const auto net = random_network(rng);
    TrainingSample s{random_features(rng), {5.0 * g(rng), 5.0 * g(rng)}};
    CHECK(bwx::gradient_check(net, s) < 1e-4);

    // Independent finite-difference pass over every parameter.
    const auto analytic = bwx::loss_gradient(net, s);
    auto params = net.parameters();
    MlpNetwork probe = net;
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double saved = params[i];
      params[i] = saved + 1e-5;
      probe.set_parameters(params);
      const double up = bwx::sample_loss(probe, s);
      params[i] = saved - 1e-5;
      probe.set_parameters(params);
      const double down = bwx::sample_loss(probe, s);
      params[i] = saved;
      const double numeric = (up - down) / 2e-5;
      const double diff = std::abs(numeric - analytic[i]);
      if (diff > 1e-8) CHECK(diff / std::max(std::abs(numeric), std::abs(analytic[i])) < 1e-4);
    }
  }
}

TEST_CASE("gradient is zero at an exact fit and the check is deterministic") {
  std::mt19937_64 rng(3);
  const auto net = random_network(rng);
  const auto f = random_features(rng);
  const TrainingSample s{f, net.forward(f)};
  for (double v : bwx::loss_gradient(net, s)) CHECK(std::abs(v) < 1e-12);
  CHECK(bwx::gradient_check(net, s) == 0.0);
  const TrainingSample t{f, {1.0, 2.0}};
  CHECK(bwx::gradient_check(net, t) == bwx::gradient_check(net, t));
}

TEST_CASE("training memorizes a single sample") {
  std::mt19937_64 rng(5);
  const TrainingSample s{random_features(rng), {12.0, -7.0}};
  bwx::TrainConfig cfg;
  cfg.learning_rate = 1e-2;
  cfg.epochs = 3000;
  const auto r = bwx::train(std::vector<TrainingSample>{s}, cfg);
  CHECK(r.final_mse < 1e-4);
}

TEST_CASE("training beats the mean predictor on a linear mapping and is deterministic") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  std::array<std::array<double, 18>, 2> w{};
  for (auto& row : w)
    for (auto& v : row) v = g(rng);
  auto make = [&](std::size_t n) {
    std::vector<TrainingSample> out(n);
    for (auto& s : out) {
      s.features = random_features(rng);
      for (int k = 0; k < 2; ++k) {
        double acc = 0.0;
        for (int i = 0; i < 18; ++i) acc += w[k][i] * s.features[i];
        s.targets[k] = 0.5 * acc;
      }
    }
    return out;
  };
  const auto train_set = make(800);
  const auto test_set = make(200);
  bwx::TrainConfig cfg;
  cfg.epochs = 100;
  const auto r = bwx::train(train_set, cfg);
  double mean[2] = {0.0, 0.0};
  for (const auto& s : train_set)
    for (int k = 0; k < 2; ++k) mean[k] += s.targets[k] / static_cast<double>(train_set.size());
  double var = 0.0;
  for (const auto& s : test_set)
    for (int k = 0; k < 2; ++k) var += (s.targets[k] - mean[k]) * (s.targets[k] - mean[k]);
  var /= 2.0 * static_cast<double>(test_set.size());
  CHECK(bwx::dataset_mse(r.net, test_set) < 0.2 * var);

  const auto again = bwx::train(train_set, cfg);
  CHECK(again.net.parameters() == r.net.parameters());
  CHECK(again.final_mse == r.final_mse);
}

TEST_CASE("full-batch training with a small rate never increases the loss") {
  std::mt19937_64 rng(13);
  std::vector<TrainingSample> set(64);
  std::normal_distribution<double> g;
  for (auto& s : set) s = {random_features(rng), {3.0 * g(rng), 3.0 * g(rng)}};
  bwx::TrainConfig cfg;
  cfg.batch_size = 64;
  cfg.momentum = 0.0;
  cfg.learning_rate = 1e-3;
  cfg.epochs = 200;
  const auto r = bwx::train(set, cfg);
  for (std::size_t e = 1; e < r.epoch_mse.size(); ++e) CHECK(r.epoch_mse[e] <= r.epoch_mse[e - 1] + 1e-12);
  CHECK_THROWS_AS(bwx::train(std::vector<TrainingSample>{}, cfg), bwx::PreconditionError);
}

TEST_CASE("model files round trip and reject corruption") {
  testutil::TempDir dir;
  std::mt19937_64 rng(17);
  auto net = random_network(rng);
  net.mfcc.num_bands = 26;
  net.mfcc.include_c0 = false;
  bwx::save_model(net, dir / "m.bin");
  const auto back = bwx::load_model(dir / "m.bin");
  CHECK(back.mfcc.num_bands == 26);
  CHECK_FALSE(back.mfcc.include_c0);
  CHECK(back.feature_means == net.feature_means);
  CHECK(back.feature_stds == net.feature_stds);
  for (int i = 0; i < 100; ++i) {
    const auto f = random_features(rng);
    CHECK(back.forward(f) == net.forward(f));
  }

  auto bytes = bwx::serialize_model(net);
  CHECK_THROWS_AS(bwx::deserialize_model(bytes.substr(0, bytes.size() - 5)), bwx::FormatError);
  CHECK_THROWS_AS(bwx::deserialize_model(bytes + "x"), bwx::FormatError);
  auto bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(bwx::deserialize_model(bad), bwx::FormatError);
  auto version = bytes;
  version[6] = '9';
  CHECK_THROWS_AS(bwx::deserialize_model(version), bwx::FormatError);
  CHECK_THROWS_AS(bwx::load_model(dir / "missing.bin"), bwx::IoError);
}
