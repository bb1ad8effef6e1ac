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

#include "bwx/pitch.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "bwx/error.hpp"

namespace bwx {

double normalized_correlation(std::span<const double> frame, int lag) {
  const auto t = static_cast<std::size_t>(lag);
  double cross = 0.0, e0 = 0.0, e1 = 0.0;
  for (std::size_t n = t; n < frame.size(); ++n) {
    cross += frame[n] * frame[n - t];
    e0 += frame[n] * frame[n];
    e1 += frame[n - t] * frame[n - t];
  }
  const double denom = std::sqrt(e0 * e1);
  return denom > 0.0 ? cross / denom : 0.0;
}

PitchInfo estimate_pitch(std::span<const double> frame, const PitchConfig& config) {
  if (frame.size() != static_cast<std::size_t>(kPitchFrameLength))
    throw PreconditionError("pitch analysis needs a 256-sample frame");
  double energy = 0.0;
  for (double v : frame) energy += v * v;
  if (energy < config.silence_energy) return PitchInfo{80.0, 0.0};

  std::array<double, kMaxPitchLag + 1> rho{};
  int best = kMinPitchLag;
  for (int lag = kMinPitchLag; lag <= kMaxPitchLag; ++lag) {
    rho[lag] = normalized_correlation(frame, lag);
    if (rho[lag] > rho[best]) best = lag;
  }

  // Pitch-doubling guard.
  while (rho[best] > 0.0) {
    const int half = static_cast<int>(std::lround(best / 2.0));
    if (half < kMinPitchLag) break;
    // Allow the half-lag peak to sit one sample off the exact sub-multiple.
    int cand = half;
    for (int d : {-1, 1})
      if (half + d >= kMinPitchLag && rho[half + d] > rho[cand]) cand = half + d;
    if (rho[cand] < config.submultiple_ratio * rho[best]) break;
    best = cand;
  }
  return PitchInfo{static_cast<double>(best), std::clamp(rho[best], 0.0, 1.0)};
}

}  // namespace bwx
