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

// Data-parallel kernels. Each OpenMP kernel has a serial twin that computes
// the same result in the same arithmetic order; tests hold them bit-equal and
// the benchmark compares their speed.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bwx/highband.hpp"
#include "bwx/mlp.hpp"
#include "bwx/vq.hpp"

namespace bwx {

struct Assignment {
  std::vector<std::uint32_t> index;
  std::vector<double> distance;  // squared Euclidean distance to the chosen codeword
};

Assignment assign_nearest(const Codebook& cb, std::span<const double> data);
Assignment assign_nearest_serial(const Codebook& cb, std::span<const double> data);

std::vector<GainPair> predict_batch(const MlpNetwork& net, std::span<const FeatureVector> features);
std::vector<GainPair> predict_batch_serial(const MlpNetwork& net, std::span<const FeatureVector> features);

// Encoder analysis: the 40-point normalized envelope vector of every
// 256-sample frame of a 16 kHz signal (last frame zero-padded), row-major.
std::vector<double> highband_vectors(std::span<const double> wideband, double preemph);
std::vector<double> highband_vectors_serial(std::span<const double> wideband, double preemph);

int kernel_threads();

}  // namespace bwx
