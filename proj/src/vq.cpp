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

#include "bwx/vq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bwx/detail/binio.hpp"
#include "bwx/detail/random.hpp"
#include "bwx/error.hpp"
#include "bwx/kernels.hpp"

namespace bwx {

namespace {

constexpr std::string_view kCodebookMagic{"BWXVQ1\0\0", 8};

// Lloyd refinement of `cb` in place; appends each pass's distortion.
double lloyd(Codebook& cb, std::span<const double> data, const LbgOptions& options,
             std::vector<double>& history) {
  const auto dim = static_cast<std::size_t>(cb.dim);
  const std::size_t n = data.size() / dim;
  const std::size_t k = cb.size();
  double prev = std::numeric_limits<double>::infinity();
  double current = prev;
  for (int it = 0; it < options.max_iterations; ++it) {
    const auto assignment = assign_nearest(cb, data);
    current = 0.0;
    for (double d : assignment.distance) current += d;
    current /= static_cast<double>(n * dim);
    history.push_back(current);
    if (current == 0.0 || (std::isfinite(prev) && prev - current <= options.tolerance * prev)) break;
    prev = current;

    std::vector<double> sums(k * dim, 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = assignment.index[i];
      ++counts[c];
      for (std::size_t d = 0; d < dim; ++d) sums[c * dim + d] += data[i * dim + d];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t d = 0; d < dim; ++d)
        cb.vectors[c * dim + d] = sums[c * dim + d] / static_cast<double>(counts[c]);
    }

    // Empty cells take the member of the most populous cell that lies
    // farthest from that cell's new centroid.
    std::vector<bool> used(n, false);
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      const auto donor = static_cast<std::size_t>(
          std::max_element(counts.begin(), counts.end()) - counts.begin());
      if (counts[donor] < 2) break;
      std::size_t far = n;
      double far_dist = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (assignment.index[i] != donor || used[i]) continue;
        const double dist = squared_distance(data.subspan(i * dim, dim), cb.row(donor));
        if (dist > far_dist) {
          far_dist = dist;
          far = i;
        }
      }
      if (far == n) break;
      used[far] = true;
      --counts[donor];
      counts[c] = 1;
      std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(far * dim), dim,
                  cb.vectors.begin() + static_cast<std::ptrdiff_t>(c * dim));
    }
  }
  return current;
}

}  // namespace

Codebook::Codebook(int dim_, int bits_, std::vector<double> vectors_)
    : dim(dim_), bits(bits_), vectors(std::move(vectors_)) {
  require(dim >= 1, "codebook dimension must be >= 1");
  require(bits >= 0 && bits <= 16, "codebook bits must lie in [0, 16]");
  require(vectors.size() == size() * static_cast<std::size_t>(dim), "codebook storage size mismatch");
  for (double v : vectors) require(std::isfinite(v), "codebook holds a non-finite entry");
}

std::uint64_t Codebook::content_hash() const { return detail::fnv1a64(serialize_codebook(*this)); }

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

NearestCodeword nearest_codeword(const Codebook& cb, std::span<const double> v) {
  // Partial-distance search: abandon a codeword once its running sum can no
  // longer beat the best; '>=' keeps the lowest index on ties.
  NearestCodeword best{0, std::numeric_limits<double>::infinity()};
  for (std::size_t c = 0; c < cb.size(); ++c) {
    const auto row = cb.row(c);
    double acc = 0.0;
    bool pruned = false;
    for (std::size_t d = 0; d < v.size(); ++d) {
      const double diff = v[d] - row[d];
      acc += diff * diff;
      if (acc >= best.distance) {
        pruned = true;
        break;
      }
    }
    if (!pruned) best = {c, acc};
  }
  return best;
}

std::size_t quantize(const Codebook& cb, std::span<const double> v) {
  if (v.size() != static_cast<std::size_t>(cb.dim))
    throw PreconditionError("quantize: vector has " + std::to_string(v.size()) +
                            " components, codebook has " + std::to_string(cb.dim));
  return nearest_codeword(cb, v).index;
}

std::vector<double> decode_index(const Codebook& cb, std::size_t index) {
  if (index >= cb.size())
    throw IndexError("codebook index " + std::to_string(index) + " out of range (size " +
                     std::to_string(cb.size()) + ")");
  const auto row = cb.row(index);
  return {row.begin(), row.end()};
}

double quantization_distortion(const Codebook& cb, std::span<const double> data) {
  const auto assignment = assign_nearest(cb, data);
  double acc = 0.0;
  for (double d : assignment.distance) acc += d;
  return acc / static_cast<double>(data.size());
}

LbgResult lbg_train(std::span<const double> training, int dim, int bits, std::uint64_t seed,
                    const LbgOptions& options) {
  require(dim >= 1, "LBG dimension must be >= 1");
  require(bits >= 0 && bits <= 16, "LBG bits must lie in [0, 16]");
  const auto d = static_cast<std::size_t>(dim);
  require(training.size() % d == 0, "training data is not a whole number of vectors");
  const std::size_t n = training.size() / d;
  const std::size_t target = std::size_t{1} << bits;
  if (n < target)
    throw PreconditionError("LBG needs at least " + std::to_string(target) + " training vectors, got " +
                            std::to_string(n));
  for (double v : training) require(std::isfinite(v), "training data holds a non-finite value");

  std::vector<double> mean(d, 0.0), spread(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) mean[j] += training[i * d + j];
  for (auto& m : mean) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const double t = training[i * d + j] - mean[j];
      spread[j] += t * t;
    }
  for (auto& s : spread) s = options.split_scale * std::sqrt(s / static_cast<double>(n));

  LbgResult result;
  Codebook cb(dim, 0, mean);
  result.stage_starts.push_back(0);
  result.iteration_distortion.push_back(quantization_distortion(cb, training));
  result.stage_distortion.push_back(result.iteration_distortion.back());

  detail::Rng rng(seed);
  while (cb.size() < target) {
    std::vector<double> split(2 * cb.vectors.size());
    for (std::size_t c = 0; c < cb.size(); ++c)
      for (std::size_t j = 0; j < d; ++j) {
        const double delta = (rng.uniform() < 0.5 ? -1.0 : 1.0) * spread[j];
        split[(2 * c) * d + j] = cb.vectors[c * d + j] + delta;
        split[(2 * c + 1) * d + j] = cb.vectors[c * d + j] - delta;
      }
    cb = Codebook(dim, cb.bits + 1, std::move(split));
    result.stage_starts.push_back(result.iteration_distortion.size());
    result.stage_distortion.push_back(lloyd(cb, training, options, result.iteration_distortion));
  }

  for (std::size_t c = 0; c < cb.size(); ++c)
    if (quantize(cb, cb.row(c)) != c)
      throw DegenerateError("LBG produced duplicate codewords; training data has too few distinct vectors");

  result.distortion = result.stage_distortion.back();
  result.codebook = std::move(cb);
  return result;
}

std::string serialize_codebook(const Codebook& cb) {
  detail::ByteWriter w;
  w.raw(kCodebookMagic);
  w.uint<std::uint32_t>(static_cast<std::uint32_t>(cb.dim));
  w.uint<std::uint32_t>(static_cast<std::uint32_t>(cb.size()));
  for (double v : cb.vectors) w.f64(v);
  return w.bytes();
}

Codebook deserialize_codebook(std::string_view bytes) {
  detail::ByteReader r(bytes, "codebook file");
  if (r.raw(8) != kCodebookMagic) throw FormatError("codebook file: bad magic");
  const auto dim = r.uint<std::uint32_t>();
  const auto size = r.uint<std::uint32_t>();
  if (dim == 0 || size == 0 || (size & (size - 1)) != 0 || size > (1u << 16))
    throw FormatError("codebook file: size must be a power of two up to 65536 and dim >= 1");
  int bits = 0;
  while ((1u << bits) < size) ++bits;
  std::vector<double> vectors(static_cast<std::size_t>(dim) * size);
  for (auto& v : vectors) v = r.f64();
  if (r.remaining() != 0) throw FormatError("codebook file: trailing bytes");
  for (double v : vectors)
    if (!std::isfinite(v)) throw FormatError("codebook file: non-finite entry");
  return Codebook(static_cast<int>(dim), bits, std::move(vectors));
}

void save_codebook(const Codebook& cb, const std::filesystem::path& path) {
  detail::write_file_bytes(path, serialize_codebook(cb));
}

Codebook load_codebook(const std::filesystem::path& path) {
  return deserialize_codebook(detail::read_file_bytes(path));
}

}  // namespace bwx
