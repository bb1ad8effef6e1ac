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

#include "bwx/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bwx/detail/binio.hpp"
#include "bwx/detail/random.hpp"
#include "bwx/error.hpp"

namespace bwx {

namespace {

constexpr std::string_view kModelMagic{"BWXMLP1\0", 8};
constexpr std::string_view kModelMagicPrefix{"BWXMLP", 6};

struct Activations {
  std::array<std::vector<double>, 4> values;
};

Activations run_forward(const MlpNetwork& net, const FeatureVector& features) {
  Activations act;
  auto& in = act.values[0];
  in.resize(kFeatureCount);
  for (int i = 0; i < kFeatureCount; ++i) {
    if (!std::isfinite(features[i])) throw InputError("feature " + std::to_string(i) + " is not finite");
    in[i] = (features[i] - net.feature_means[i]) / net.feature_stds[i];
  }
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const auto& layer = net.layers[l];
    const auto& x = act.values[l];
    auto& y = act.values[l + 1];
    y.assign(static_cast<std::size_t>(layer.outputs), 0.0);
    for (int o = 0; o < layer.outputs; ++o) {
      const double* w = layer.weights.data() + static_cast<std::size_t>(o) * layer.inputs;
      double acc = layer.bias[o];
      for (int i = 0; i < layer.inputs; ++i) acc += w[i] * x[i];
      y[o] = l + 1 < net.layers.size() ? std::tanh(acc) : acc;
    }
  }
  return act;
}

}  // namespace

MlpNetwork::MlpNetwork() {
  for (std::size_t l = 0; l < layers.size(); ++l) {
    auto& layer = layers[l];
    layer.inputs = kMlpLayerSizes[l];
    layer.outputs = kMlpLayerSizes[l + 1];
    layer.weights.assign(static_cast<std::size_t>(layer.inputs) * layer.outputs, 0.0);
    layer.bias.assign(static_cast<std::size_t>(layer.outputs), 0.0);
  }
  feature_means.fill(0.0);
  feature_stds.fill(1.0);
}

MlpNetwork MlpNetwork::initialize(std::uint64_t seed) {
  MlpNetwork net;
  detail::Rng rng(seed);
  for (auto& layer : net.layers) {
    const double limit = std::sqrt(6.0 / (layer.inputs + layer.outputs));
    for (auto& w : layer.weights) w = rng.uniform(-limit, limit);
  }
  return net;
}

GainPair MlpNetwork::forward(const FeatureVector& features) const {
  const auto act = run_forward(*this, features);
  return {act.values[3][0], act.values[3][1]};
}

std::size_t MlpNetwork::parameter_count() const {
  std::size_t n = 0;
  for (const auto& layer : layers) n += layer.weights.size() + layer.bias.size();
  return n;
}

std::vector<double> MlpNetwork::parameters() const {
  std::vector<double> p;
  p.reserve(parameter_count());
  for (const auto& layer : layers) {
    p.insert(p.end(), layer.weights.begin(), layer.weights.end());
    p.insert(p.end(), layer.bias.begin(), layer.bias.end());
  }
  return p;
}

void MlpNetwork::set_parameters(std::span<const double> params) {
  require(params.size() == parameter_count(), "parameter vector has the wrong length");
  std::size_t pos = 0;
  for (auto& layer : layers) {
    std::copy_n(params.begin() + static_cast<std::ptrdiff_t>(pos), layer.weights.size(), layer.weights.begin());
    pos += layer.weights.size();
    std::copy_n(params.begin() + static_cast<std::ptrdiff_t>(pos), layer.bias.size(), layer.bias.begin());
    pos += layer.bias.size();
  }
}

void MlpNetwork::validate() const {
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& layer = layers[l];
    if (layer.inputs != kMlpLayerSizes[l] || layer.outputs != kMlpLayerSizes[l + 1])
      throw FormatError("network layer sizes must be 18-10-10-2");
    if (layer.weights.size() != static_cast<std::size_t>(layer.inputs) * layer.outputs ||
        layer.bias.size() != static_cast<std::size_t>(layer.outputs))
      throw FormatError("network layer storage has the wrong size");
  }
  for (double v : parameters())
    if (!std::isfinite(v)) throw FormatError("network holds a non-finite parameter");
  for (int i = 0; i < kFeatureCount; ++i)
    if (!std::isfinite(feature_means[i]) || !(feature_stds[i] > 0.0) || !std::isfinite(feature_stds[i]))
      throw FormatError("network normalization statistics are invalid");
}

double sample_loss(const MlpNetwork& net, const TrainingSample& sample) {
  const auto y = net.forward(sample.features);
  double loss = 0.0;
  for (int k = 0; k < 2; ++k) loss += (y[k] - sample.targets[k]) * (y[k] - sample.targets[k]);
  return loss;
}

std::vector<double> loss_gradient(const MlpNetwork& net, const TrainingSample& sample) {
  const auto act = run_forward(net, sample.features);
  // Per-layer gradient blocks, filled from the output backwards.
  std::array<std::vector<double>, 3> grad_w, grad_b;
  std::vector<double> delta(2);
  for (int k = 0; k < 2; ++k) delta[k] = 2.0 * (act.values[3][k] - sample.targets[k]);

  for (int l = 2; l >= 0; --l) {
    const auto& layer = net.layers[l];
    const auto& x = act.values[l];
    grad_w[l].assign(layer.weights.size(), 0.0);
    grad_b[l] = delta;
    for (int o = 0; o < layer.outputs; ++o)
      for (int i = 0; i < layer.inputs; ++i)
        grad_w[l][static_cast<std::size_t>(o) * layer.inputs + i] = delta[o] * x[i];
    if (l == 0) break;
    std::vector<double> next(static_cast<std::size_t>(layer.inputs), 0.0);
    for (int i = 0; i < layer.inputs; ++i) {
      double acc = 0.0;
      for (int o = 0; o < layer.outputs; ++o)
        acc += layer.weights[static_cast<std::size_t>(o) * layer.inputs + i] * delta[o];
      next[i] = acc * (1.0 - x[i] * x[i]);
    }
    delta = std::move(next);
  }

  std::vector<double> g;
  g.reserve(net.parameter_count());
  for (int l = 0; l < 3; ++l) {
    g.insert(g.end(), grad_w[l].begin(), grad_w[l].end());
    g.insert(g.end(), grad_b[l].begin(), grad_b[l].end());
  }
  return g;
}

double gradient_check(const MlpNetwork& net, const TrainingSample& sample, double step) {
  const auto analytic = loss_gradient(net, sample);
  auto params = net.parameters();
  MlpNetwork probe = net;
  double worst = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double saved = params[i];
    params[i] = saved + step;
    probe.set_parameters(params);
    const double up = sample_loss(probe, sample);
    params[i] = saved - step;
    probe.set_parameters(params);
    const double down = sample_loss(probe, sample);
    params[i] = saved;
    const double numeric = (up - down) / (2.0 * step);
    const double diff = std::abs(numeric - analytic[i]);
    if (diff <= 1e-8) continue;
    worst = std::max(worst, diff / std::max(std::abs(numeric), std::abs(analytic[i])));
  }
  return worst;
}

double dataset_mse(const MlpNetwork& net, std::span<const TrainingSample> samples) {
  require(!samples.empty(), "dataset is empty");
  double acc = 0.0;
  for (const auto& s : samples) acc += sample_loss(net, s);
  return acc / (2.0 * static_cast<double>(samples.size()));
}

TrainResult train(std::span<const TrainingSample> samples, const TrainConfig& config,
                  const MfccConfig& mfcc) {
  require(!samples.empty(), "training set is empty");
  require(config.batch_size >= 1 && config.epochs >= 0, "invalid training configuration");
  for (const auto& s : samples)
    require(std::isfinite(s.targets[0]) && std::isfinite(s.targets[1]), "training target is not finite");

  TrainResult result{MlpNetwork::initialize(config.seed), 0.0, {}};
  auto& net = result.net;
  net.mfcc = mfcc;

  const double n = static_cast<double>(samples.size());
  for (int i = 0; i < kFeatureCount; ++i) {
    double mean = 0.0;
    for (const auto& s : samples) mean += s.features[i];
    mean /= n;
    double var = 0.0;
    for (const auto& s : samples) var += (s.features[i] - mean) * (s.features[i] - mean);
    const double sd = std::sqrt(var / n);
    net.feature_means[i] = mean;
    net.feature_stds[i] = sd > 1e-12 ? sd : 1.0;
  }

  detail::Rng rng(config.seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  auto params = net.parameters();
  std::vector<double> velocity(params.size(), 0.0);
  std::vector<double> grad(params.size());

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order.begin(), order.end());
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t b = start; b < stop; ++b) {
        const auto g = loss_gradient(net, samples[order[b]]);
        for (std::size_t i = 0; i < g.size(); ++i) grad[i] += g[i];
      }
      const double scale = 1.0 / static_cast<double>(stop - start);
      for (std::size_t i = 0; i < params.size(); ++i) {
        velocity[i] = config.momentum * velocity[i] - config.learning_rate * grad[i] * scale;
        params[i] += velocity[i];
      }
      net.set_parameters(params);
    }
    result.epoch_mse.push_back(dataset_mse(net, samples));
  }
  result.final_mse = result.epoch_mse.empty() ? dataset_mse(net, samples) : result.epoch_mse.back();
  return result;
}

std::string serialize_model(const MlpNetwork& net) {
  net.validate();
  detail::ByteWriter w;
  w.raw(kModelMagic);
  w.uint<std::uint64_t>(kMlpLayerSizes.size());
  for (int s : kMlpLayerSizes) w.uint<std::uint64_t>(static_cast<std::uint64_t>(s));
  w.uint<std::uint64_t>(net.mfcc.tag());
  for (double v : net.feature_means) w.f64(v);
  for (double v : net.feature_stds) w.f64(v);
  for (const auto& layer : net.layers) {
    for (double v : layer.weights) w.f64(v);
    for (double v : layer.bias) w.f64(v);
  }
  return w.bytes();
}

MlpNetwork deserialize_model(std::string_view bytes) {
  detail::ByteReader r(bytes, "model file");
  const auto magic = r.raw(8);
  if (magic.substr(0, 6) != kModelMagicPrefix) throw FormatError("model file: bad magic");
  if (magic != kModelMagic) throw FormatError("model file: version mismatch");
  const auto count = r.uint<std::uint64_t>();
  if (count != kMlpLayerSizes.size()) throw FormatError("model file: expected 4 layer sizes");
  for (int expected : kMlpLayerSizes)
    if (r.uint<std::uint64_t>() != static_cast<std::uint64_t>(expected))
      throw FormatError("model file: layer sizes must be 18-10-10-2");
  MlpNetwork net;
  net.mfcc = MfccConfig::from_tag(r.uint<std::uint64_t>());
  for (auto& v : net.feature_means) v = r.f64();
  for (auto& v : net.feature_stds) v = r.f64();
  for (auto& layer : net.layers) {
    for (auto& v : layer.weights) v = r.f64();
    for (auto& v : layer.bias) v = r.f64();
  }
  if (r.remaining() != 0) throw FormatError("model file: trailing bytes");
  net.validate();
  return net;
}

void save_model(const MlpNetwork& net, const std::filesystem::path& path) {
  detail::write_file_bytes(path, serialize_model(net));
}

MlpNetwork load_model(const std::filesystem::path& path) {
  return deserialize_model(detail::read_file_bytes(path));
}

}  // namespace bwx
