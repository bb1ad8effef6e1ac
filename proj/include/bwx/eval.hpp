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

// Evaluation metrics: spectral distortion of the coded high-band envelope,
// harmonic-gain prediction error, band SNR and spectrum dumps.

#pragma once

#include <span>
#include <vector>

#include "bwx/audio.hpp"
#include "bwx/dsp.hpp"
#include "bwx/mlp.hpp"
#include "bwx/pipeline.hpp"
#include "bwx/training.hpp"
#include "bwx/vq.hpp"

namespace bwx {

struct DistortionReport {
  std::vector<double> frame_sd;  // dB
  double mean = 0.0;
  double median = 0.0;
  std::size_t frame_count = 0;
  double low_hz = 3000.0;
  double high_hz = 8000.0;
};

// RMS dB difference over the envelope grid points with low_hz <= f <= high_hz.
double spectral_distortion(const EnvelopeSpectrum& ref, const EnvelopeSpectrum& test, double low_hz = 3000.0,
                           double high_hz = 8000.0);

DistortionReport summarize_distortion(std::vector<double> frame_sd, double low_hz = 3000.0,
                                      double high_hz = 8000.0);

// Reference: the encoder's order-16 envelope of each non-silent wideband
// frame. Test: the decoder's concatenated envelope from the encoder's own
// narrowband rendering and the transmitted index.
DistortionReport evaluate_corpus_sd(std::span<const AudioBuffer> signals, const Codebook& cb,
                                    const EncoderOptions& encoder = {});

// Mean over frames and both harmonics of |pred - target| in dB.
double harmonic_gain_error(std::span<const GainPair> predicted, std::span<const GainPair> target);

struct HarmonicReport {
  double mean_error = 0.0;
  // Same metric for a constant predictor that always outputs `baseline`.
  double baseline_error = 0.0;
  std::size_t frame_count = 0;
};

HarmonicReport evaluate_harmonics(const MlpNetwork& net, std::span<const TrainingSample> samples,
                                  const GainPair& baseline);
// Per-output mean of the targets.
GainPair mean_targets(std::span<const TrainingSample> samples);

// 10 log10(sum xb^2 / sum (xb - yb)^2) after zero-phase band-pass filtering
// both signals. The filter's transition bands lie inside [low_hz, high_hz],
// so content at or beyond the edges is rejected. Only samples where the
// 1023-tap filter has full support count, so inputs need more than 2046
// samples. Capped at 120 dB.
double band_snr(const AudioBuffer& x, const AudioBuffer& y, double low_hz, double high_hz);
inline constexpr double kSnrCap = 120.0;

struct SpectrumPoint {
  double hz = 0.0;
  double db = 0.0;
};

// Hanning-windowed periodogram of the window starting at `start_seconds`.
// One-sided power sums to the windowed signal's energy.
std::vector<SpectrumPoint> dump_spectrum(const AudioBuffer& x, double start_seconds, double window_ms = 32.0,
                                         double offset_db = 0.0);

}  // namespace bwx
