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

#include <span>

namespace bwx {

inline constexpr int kPitchFrameLength = 256;  // two 128-sample frames at 8 kHz
inline constexpr int kMinPitchLag = 20;
inline constexpr int kMaxPitchLag = 160;

struct PitchInfo {
  double delay = 80.0;  // samples at 8 kHz, in [20, 160]
  double gain = 0.0;    // normalized correlation at `delay`, clamped to [0, 1]

  double f0_hz() const { return 8000.0 / delay; }
};

struct PitchConfig {
  // Halve the candidate while rho(T/2) >= ratio * rho(T).
  double submultiple_ratio = 0.85;
  double silence_energy = 1e-8;
};

// Open-loop estimate from 256 samples at 8 kHz (previous 128 + current 128).
PitchInfo estimate_pitch(std::span<const double> frame, const PitchConfig& config = {});

// Normalized correlation between x[n] and x[n-lag] over n = lag..N-1.
double normalized_correlation(std::span<const double> frame, int lag);

}  // namespace bwx
