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

// 18-10-10-2 perceptron that predicts the two low-band harmonic gains (dB)
// from narrowband features: tanh hidden layers, linear outputs, z-score
// input normalization stored with the weights.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "bwx/mfcc.hpp"

namespace bwx {

inline constexpr std::array<int, 4> kMlpLayerSizes{kFeatureCount, 10, 10, 2};

struct DenseLayer {
  int inputs = 0;
  int outputs = 0;
  std::vector<double> weights;  // outputs x inputs, row-major
  std::vector<double> bias;
};

using GainPair = std::array<double, 2>;

struct TrainingSample {
  FeatureVector features{};
  GainPair targets{};  // harmonic gains in dB
};

class MlpNetwork {
 public:
  // Zero weights and biases, identity normalization.
  MlpNetwork();

  // Uniform +-sqrt(6 / (fan_in + fan_out)) weights, zero biases.
  static MlpNetwork initialize(std::uint64_t seed);

  GainPair forward(const FeatureVector& features) const;

  std::array<DenseLayer, 3> layers;
  FeatureVector feature_means{};
  FeatureVector feature_stds{};
  MfccConfig mfcc;

  std::size_t parameter_count() const;
  // Flattened [W1, b1, W2, b2, W3, b3].
  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> params);

  void validate() const;
};

// Squared error summed over both outputs.
double sample_loss(const MlpNetwork& net, const TrainingSample& sample);
// Backpropagated gradient of sample_loss in parameters() order.
std::vector<double> loss_gradient(const MlpNetwork& net, const TrainingSample& sample);
// Max relative error between backprop and central differences (step 1e-5)
// over every parameter; differences below 1e-8 count as exact.
double gradient_check(const MlpNetwork& net, const TrainingSample& sample, double step = 1e-5);

// Mean over samples and outputs of the squared dB error.
double dataset_mse(const MlpNetwork& net, std::span<const TrainingSample> samples);

struct TrainConfig {
  // Targets are raw dB values; 1e-3 with momentum 0.9 under-fits them.
  double learning_rate = 1e-4;
  double momentum = 0.9;
  int batch_size = 32;
  int epochs = 200;
  std::uint64_t seed = 1;
};

struct TrainResult {
  MlpNetwork net;
  double final_mse = 0.0;
  std::vector<double> epoch_mse;  // full-dataset MSE after each epoch
};

// Mini-batch gradient descent with momentum on the dB-domain MSE.
// Normalization statistics come from the samples.
TrainResult train(std::span<const TrainingSample> samples, const TrainConfig& config,
                  const MfccConfig& mfcc = {});

std::string serialize_model(const MlpNetwork& net);
MlpNetwork deserialize_model(std::string_view bytes);
void save_model(const MlpNetwork& net, const std::filesystem::path& path);
MlpNetwork load_model(const std::filesystem::path& path);

}  // namespace bwx
