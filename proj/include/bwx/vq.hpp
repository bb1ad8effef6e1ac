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

// Envelope vector quantizer: binary-split LBG training, nearest-neighbour
// search and the codebook file format.

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bwx {

struct Codebook {
  int dim = 0;
  int bits = 0;
  std::vector<double> vectors;  // size() x dim, row-major, dB

  Codebook() = default;
  Codebook(int dim, int bits, std::vector<double> vectors);

  std::size_t size() const { return std::size_t{1} << bits; }
  std::span<const double> row(std::size_t i) const {
    return {vectors.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
  // FNV-1a over the serialized file bytes.
  std::uint64_t content_hash() const;
};

struct LbgOptions {
  int max_iterations = 100;
  double tolerance = 1e-6;   // relative distortion improvement to stop
  double split_scale = 0.01;  // perturbation = split_scale * per-dimension std
};

struct LbgResult {
  Codebook codebook;
  double distortion = 0.0;  // final mean of |v - c|^2 / dim
  // Distortion measured at every Lloyd assignment pass, all stages in order.
  std::vector<double> iteration_distortion;
  // Stage boundaries into iteration_distortion (index of each stage's first pass).
  std::vector<std::size_t> stage_starts;
  // Converged distortion at each codebook size 1, 2, 4, ...
  std::vector<double> stage_distortion;
};

// `training` is row-major with `dim` columns and at least 2^bits rows.
LbgResult lbg_train(std::span<const double> training, int dim, int bits, std::uint64_t seed,
                    const LbgOptions& options = {});

double squared_distance(std::span<const double> a, std::span<const double> b);

struct NearestCodeword {
  std::size_t index;
  double distance;  // squared
};
// Unchecked search used by quantize() and the batch kernels.
NearestCodeword nearest_codeword(const Codebook& cb, std::span<const double> v);

// Nearest codeword by squared Euclidean distance; ties go to the lowest index.
std::size_t quantize(const Codebook& cb, std::span<const double> v);

std::vector<double> decode_index(const Codebook& cb, std::size_t index);

// Mean of |v - c(v)|^2 / dim over a row-major set.
double quantization_distortion(const Codebook& cb, std::span<const double> data);

std::string serialize_codebook(const Codebook& cb);
Codebook deserialize_codebook(std::string_view bytes);
void save_codebook(const Codebook& cb, const std::filesystem::path& path);
Codebook load_codebook(const std::filesystem::path& path);

}  // namespace bwx
