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

// High band (3.4-8 kHz): excitation extension by full-wave rectification,
// whitening and gain matching; envelope coding with the 40-point codebook;
// synthesis and band selection.

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "bwx/audio.hpp"
#include "bwx/dsp.hpp"
#include "bwx/vq.hpp"

namespace bwx {

inline constexpr int kFrameSize = 256;             // samples at 16 kHz
inline constexpr int kNarrowbandFrameSize = 128;   // samples at 8 kHz
inline constexpr int kHighbandPoints = 40;
inline constexpr int kHighbandFirstPoint = 24;     // 3000 Hz
inline constexpr int kAnchorFirstPoint = 20;       // 2500-2875 Hz anchor region
inline constexpr int kAnchorPoints = 4;
inline constexpr int kNarrowbandEnvelopePoints = 24;  // k = 0..23 valid from 8 kHz analysis
inline constexpr double kSilentEnvelopeDb = -120.0;

using HighbandVector = std::array<double, kHighbandPoints>;

struct HighbandFrameCode {
  std::size_t index = 0;
};

std::vector<double> extend_excitation(std::span<const double> excitation);

struct WhitenResult {
  std::vector<double> output;
  FilterState state;
  bool passthrough = false;  // frame had no usable spectrum
};

// Order-16 LPC (no pre-emphasis) on the frame, inverse filtering with the
// carried input memory.
WhitenResult whiten(std::span<const double> extended, FilterState state, int order = kWhiteningOrder);

struct GainMatchResult {
  std::vector<double> output;
  double gain = 0.0;
};

// Scale `whitened` so its 0-3400 Hz energy equals that of `reference`.
GainMatchResult gain_match(std::span<const double> whitened, std::span<const double> reference);

// Order-16 wideband envelope of a 256-sample frame (pre-emphasized), in dB.
// Silent frames give a flat kSilentEnvelopeDb envelope.
EnvelopeSpectrum wideband_envelope(std::span<const double> frame, double preemph = kDefaultPreemphasis);

// Points k = 24..63 minus the mean of k = 20..23.
HighbandVector highband_vector(const EnvelopeSpectrum& env);
HighbandVector highband_vector(std::span<const double> frame, double preemph = kDefaultPreemphasis);

HighbandFrameCode encode_envelope(std::span<const double> frame, const Codebook& cb,
                                  double preemph = kDefaultPreemphasis);

// Order-10 envelope of a 128-sample 8 kHz frame at k = 0..23, expressed on
// the wideband envelope's level and pre-emphasis scale.
std::array<double, kNarrowbandEnvelopePoints> narrowband_envelope(std::span<const double> nb_frame,
                                                                  double preemph = kDefaultPreemphasis);

// Local points k = 0..23 followed by `word` shifted by the local anchor mean.
EnvelopeSpectrum concatenate_envelope(const std::array<double, kNarrowbandEnvelopePoints>& local,
                                      std::span<const double> word);

// Local narrowband points followed by the re-anchored decoded codeword.
EnvelopeSpectrum decode_envelope_spectrum(const HighbandFrameCode& code, const Codebook& cb,
                                          std::span<const double> nb_frame,
                                          double preemph = kDefaultPreemphasis);
// Full-band order-16 model 1/B(z) from the concatenated envelope.
LpcModel decode_envelope(const HighbandFrameCode& code, const Codebook& cb, std::span<const double> nb_frame,
                         double preemph = kDefaultPreemphasis);

// Filter memories of the synthesis chain; one per stream.
struct HighbandSynthesisState {
  FilterState synthesis = FilterState::zeros(kWidebandLpcOrder);
  DeEmphasisFilter deemphasis;
  StreamingFir split;

  explicit HighbandSynthesisState(double preemph = kDefaultPreemphasis);
};

// 1/B(z), de-emphasis, then the 3400 Hz high-pass. Output is delayed by the
// high-pass group delay (highband_split_delay()).
std::vector<double> synthesize_highband(std::span<const double> excitation, const LpcModel& model,
                                        HighbandSynthesisState& state);

int highband_split_delay();

}  // namespace bwx
