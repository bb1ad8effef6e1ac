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

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "bwx/pitch.hpp"

namespace bwx {

inline constexpr int kMfccFrameLength = 128;
inline constexpr int kMfccCount = 16;
inline constexpr int kFeatureCount = 18;

struct MfccConfig {
  int num_bands = 24;
  bool include_c0 = true;  // false: return c1..c16

  // Packed description stored in model files: bands << 8 | include_c0.
  std::uint64_t tag() const {
    return (static_cast<std::uint64_t>(num_bands) << 8) | (include_c0 ? 1u : 0u);
  }
  static MfccConfig from_tag(std::uint64_t tag);
};

using FeatureVector = std::array<double, kFeatureCount>;

// Mel cepstrum of one 128-sample narrowband frame: Hanning window,
// 256-point power spectrum, triangular mel bands over 0-4000 Hz, natural log
// with a 1e-10 floor, orthonormal DCT-II.
class MfccExtractor {
 public:
  explicit MfccExtractor(const MfccConfig& config = {});

  std::array<double, kMfccCount> compute(std::span<const double> frame) const;

  const MfccConfig& config() const { return config_; }
  // Row-major num_bands x 129 filterbank weights.
  const std::vector<double>& filterbank() const { return bank_; }
  static constexpr int kFftSize = 256;
  static constexpr int kBins = kFftSize / 2 + 1;

 private:
  MfccConfig config_;
  std::vector<double> window_;
  std::vector<double> bank_;
  std::vector<double> dct_;  // (kMfccCount + 1) x num_bands
};

std::array<double, kMfccCount> mfcc16(std::span<const double> frame);

// [c0..c15, pitch gain, pitch delay].
FeatureVector assemble_features(std::span<const double, kMfccCount> mfcc, const PitchInfo& p);

double hz_to_mel(double hz);
double mel_to_hz(double mel);

}  // namespace bwx
