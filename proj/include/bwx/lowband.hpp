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

// Low band (50-300 Hz): least-squares harmonic analysis used to build the
// predictor's training targets, and the phase-continuous two-harmonic
// oscillator that regenerates the band at the receiver.

#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "bwx/mlp.hpp"
#include "bwx/pitch.hpp"

namespace bwx {

inline constexpr int kHarmonicWindow = 128;
inline constexpr int kHarmonicColumns = 5;
inline constexpr double kVoicingThreshold = 0.3;
inline constexpr double kLowbandMinHz = 50.0;
inline constexpr double kLowbandMaxHz = 300.0;
inline constexpr int kCrossfadeSamples = 64;

// 128 x 5 basis: Hanning window, then Hanning-windowed sin/cos at 1/T and 2/T.
struct HarmonicBasis {
  double period = 0.0;
  std::vector<double> columns;  // column-major, kHarmonicWindow rows

  std::span<const double> column(int j) const {
    return {columns.data() + static_cast<std::size_t>(j) * kHarmonicWindow,
            static_cast<std::size_t>(kHarmonicWindow)};
  }
  double at(int n, int j) const { return columns[static_cast<std::size_t>(j) * kHarmonicWindow + n]; }
};

// Coefficients for (DC, sin1, cos1, sin2, cos2).
struct HarmonicAmplitudes {
  std::array<double, kHarmonicColumns> a{};

  double amp1() const;
  double amp2() const;
  // 20 log10(amp + 1e-10) for harmonic 1 and 2.
  GainPair gains_db() const;
};

HarmonicBasis build_basis(double period);

// a = (X^T X)^{-1} X^T y, solved by Cholesky with one refinement step.
HarmonicAmplitudes ls_fit(const HarmonicBasis& basis, std::span<const double> y);

enum class TargetSource {
  WidebandLowBand,      // 0-350 Hz of the original wideband frame
  RectifiedNarrowband,  // |narrowband| as literally described for the fit
};

// Zero-phase 0-350 Hz band limiting of a whole 16 kHz signal.
std::vector<double> lowband_limit(std::span<const double> wideband);

// Fit on an already band-limited 256-sample 16 kHz frame.
HarmonicAmplitudes fit_lowband_frame(std::span<const double> limited_frame, double period);

// Targets for one frame, or nullopt for unvoiced frames (pitch gain < 0.3).
// The wideband path band-limits the frame on its own (zero-padded edges);
// `narrowband_frame` (128 samples at 8 kHz) is only read by the rectified path.
std::optional<HarmonicAmplitudes> extract_targets(std::span<const double> wideband_frame,
                                                  std::span<const double> narrowband_frame,
                                                  const PitchInfo& pitch,
                                                  TargetSource source = TargetSource::WidebandLowBand);

struct OscillatorState {
  double phase1 = 0.0;
  double phase2 = 0.0;
  double gain1 = 0.0;  // linear gains reached at the end of the last frame
  double gain2 = 0.0;
};

struct LowbandFrame {
  std::vector<double> samples;
  OscillatorState state;
};

// Harmonic k is emitted only when k * f0 lies in [50, 300] Hz. Gains ramp
// linearly from the previous frame's over the first 64 samples.
LowbandFrame synthesize_lowband(double f0_hz, const GainPair& gains_db, OscillatorState state,
                                std::size_t length, double voicing_gain);

}  // namespace bwx
