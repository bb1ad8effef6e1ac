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

#include "bwx/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <cmath>
#include <exception>

#include "bwx/error.hpp"

namespace bwx {

namespace {

std::size_t vector_count(const Codebook& cb, std::span<const double> data) {
  const auto dim = static_cast<std::size_t>(cb.dim);
  require(data.size() % dim == 0, "data is not a whole number of codebook-sized vectors");
  return data.size() / dim;
}

// Exceptions must not leave an OpenMP region; the first one is kept and
// rethrown after the loop.
class LoopErrors {
 public:
  template <class F>
  void run(F&& body) {
    try {
      body();
    } catch (...) {
#pragma omp critical(bwx_loop_errors)
      if (!first_) first_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (first_) std::rethrow_exception(first_);
  }

 private:
  std::exception_ptr first_;
};

std::size_t wideband_frames(std::size_t n) { return (n + kFrameSize - 1) / kFrameSize; }

void frame_vector(std::span<const double> wideband, std::size_t j, double preemph, double* out) {
  std::array<double, kFrameSize> frame{};
  const std::size_t begin = j * kFrameSize;
  const std::size_t end = std::min(wideband.size(), begin + kFrameSize);
  std::copy(wideband.begin() + static_cast<std::ptrdiff_t>(begin),
            wideband.begin() + static_cast<std::ptrdiff_t>(end), frame.begin());
  const auto v = highband_vector(frame, preemph);
  std::copy(v.begin(), v.end(), out);
}

}  // namespace

Assignment assign_nearest(const Codebook& cb, std::span<const double> data) {
  const std::size_t n = vector_count(cb, data);
  const auto dim = static_cast<std::size_t>(cb.dim);
  Assignment out{std::vector<std::uint32_t>(n), std::vector<double>(n)};
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto u = static_cast<std::size_t>(i);
    const auto hit = nearest_codeword(cb, data.subspan(u * dim, dim));
    out.index[u] = static_cast<std::uint32_t>(hit.index);
    out.distance[u] = hit.distance;
  }
  return out;
}

Assignment assign_nearest_serial(const Codebook& cb, std::span<const double> data) {
  const std::size_t n = vector_count(cb, data);
  const auto dim = static_cast<std::size_t>(cb.dim);
  Assignment out{std::vector<std::uint32_t>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const auto hit = nearest_codeword(cb, data.subspan(i * dim, dim));
    out.index[i] = static_cast<std::uint32_t>(hit.index);
    out.distance[i] = hit.distance;
  }
  return out;
}

std::vector<GainPair> predict_batch(const MlpNetwork& net, std::span<const FeatureVector> features) {
  std::vector<GainPair> out(features.size());
  const auto count = static_cast<std::ptrdiff_t>(features.size());
  LoopErrors errors;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i)
    errors.run([&] { out[static_cast<std::size_t>(i)] = net.forward(features[static_cast<std::size_t>(i)]); });
  errors.rethrow();
  return out;
}

std::vector<GainPair> predict_batch_serial(const MlpNetwork& net, std::span<const FeatureVector> features) {
  std::vector<GainPair> out(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) out[i] = net.forward(features[i]);
  return out;
}

std::vector<double> highband_vectors(std::span<const double> wideband, double preemph) {
  const std::size_t frames = wideband_frames(wideband.size());
  std::vector<double> out(frames * kHighbandPoints);
  const auto count = static_cast<std::ptrdiff_t>(frames);
  LoopErrors errors;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t j = 0; j < count; ++j) {
    const auto u = static_cast<std::size_t>(j);
    errors.run([&] { frame_vector(wideband, u, preemph, out.data() + u * kHighbandPoints); });
  }
  errors.rethrow();
  return out;
}

std::vector<double> highband_vectors_serial(std::span<const double> wideband, double preemph) {
  const std::size_t frames = wideband_frames(wideband.size());
  std::vector<double> out(frames * kHighbandPoints);
  for (std::size_t j = 0; j < frames; ++j) frame_vector(wideband, j, preemph, out.data() + j * kHighbandPoints);
  return out;
}

int kernel_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace bwx
