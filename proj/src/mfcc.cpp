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

#include "bwx/mfcc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bwx/dsp.hpp"
#include "bwx/error.hpp"
#include "bwx/fft.hpp"

namespace bwx {

namespace {

constexpr double kLogFloor = 1e-10;
constexpr double kMaxFreq = 4000.0;

}  // namespace

MfccConfig MfccConfig::from_tag(std::uint64_t tag) {
  MfccConfig c;
  c.num_bands = static_cast<int>(tag >> 8);
  c.include_c0 = (tag & 1u) != 0;
  return c;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MfccExtractor::MfccExtractor(const MfccConfig& config)
    : config_(config), window_(hanning_window(kMfccFrameLength)) {
  const int bands = config_.num_bands;
  require(bands >= kMfccCount + 1 && bands <= 64, "MFCC band count out of range");

  // Band m spans edges[m]..edges[m+2] with its peak at edges[m+1].
  std::vector<double> edges(static_cast<std::size_t>(bands) + 2);
  const double top = hz_to_mel(kMaxFreq);
  for (std::size_t i = 0; i < edges.size(); ++i)
    edges[i] = mel_to_hz(top * static_cast<double>(i) / static_cast<double>(bands + 1));

  bank_.assign(static_cast<std::size_t>(bands) * kBins, 0.0);
  for (int m = 0; m < bands; ++m) {
    const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
    for (int b = 0; b < kBins; ++b) {
      const double f = 8000.0 * b / kFftSize;
      double w = 0.0;
      if (f > lo && f <= mid) w = (f - lo) / (mid - lo);
      else if (f > mid && f < hi) w = (hi - f) / (hi - mid);
      bank_[static_cast<std::size_t>(m) * kBins + b] = w;
    }
  }

  dct_.assign(static_cast<std::size_t>(kMfccCount + 1) * bands, 0.0);
  const double scale = std::sqrt(2.0 / bands);
  for (int i = 0; i <= kMfccCount; ++i)
    for (int m = 0; m < bands; ++m)
      dct_[static_cast<std::size_t>(i) * bands + m] =
          scale * std::cos(std::numbers::pi * i * (m + 0.5) / bands);
}

std::array<double, kMfccCount> MfccExtractor::compute(std::span<const double> frame) const {
  if (frame.size() != static_cast<std::size_t>(kMfccFrameLength))
    throw PreconditionError("MFCC needs a 128-sample frame");
  std::array<double, kMfccFrameLength> windowed{};
  for (int n = 0; n < kMfccFrameLength; ++n) windowed[n] = frame[n] * window_[n];
  const auto power = power_spectrum(windowed, kFftSize);

  const int bands = config_.num_bands;
  std::vector<double> logmel(static_cast<std::size_t>(bands));
  for (int m = 0; m < bands; ++m) {
    double acc = 0.0;
    const double* row = bank_.data() + static_cast<std::size_t>(m) * kBins;
    for (int b = 0; b < kBins; ++b) acc += row[b] * power[b];
    logmel[m] = std::log(std::max(acc, kLogFloor));
  }

  std::array<double, kMfccCount> out{};
  const int first = config_.include_c0 ? 0 : 1;
  for (int i = 0; i < kMfccCount; ++i) {
    const double* row = dct_.data() + static_cast<std::size_t>(i + first) * bands;
    double acc = 0.0;
    for (int m = 0; m < bands; ++m) acc += row[m] * logmel[m];
    out[i] = acc;
  }
  return out;
}

std::array<double, kMfccCount> mfcc16(std::span<const double> frame) {
  static const MfccExtractor extractor;
  return extractor.compute(frame);
}

FeatureVector assemble_features(std::span<const double, kMfccCount> mfcc, const PitchInfo& p) {
  FeatureVector f{};
  std::copy(mfcc.begin(), mfcc.end(), f.begin());
  f[kMfccCount] = p.gain;
  f[kMfccCount + 1] = p.delay;
  return f;
}

}  // namespace bwx
