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

// End-to-end codec. The encoder turns 16 kHz speech into an 8 kHz telephone
// band signal plus one envelope index per 256-sample frame; the decoder
// rebuilds the 50-300 Hz and 3.4-8 kHz bands around the received signal.

#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "bwx/audio.hpp"
#include "bwx/dsp.hpp"
#include "bwx/highband.hpp"
#include "bwx/lowband.hpp"
#include "bwx/mfcc.hpp"
#include "bwx/mlp.hpp"
#include "bwx/sideinfo.hpp"
#include "bwx/vq.hpp"

namespace bwx {

struct EncoderOptions {
  double preemph = kDefaultPreemphasis;
  // Restrict to 300-3400 Hz before decimation, as a telephone channel would.
  bool telephone_band = true;
  // Optional channel shaping (e.g. an IRS-like response) applied at 8 kHz.
  std::optional<FirFilter> channel_filter;
};

struct EncodeResult {
  AudioBuffer narrowband;
  SideInfoStream side;
};

// Time-aligned narrowband rendering of a 16 kHz signal: sample i sits at
// wideband sample 2i; filter delays are compensated.
AudioBuffer make_narrowband(const AudioBuffer& wideband, const EncoderOptions& options = {});

// Frame j covers wideband samples [256 j, 256 j + 256), zero-padded at the end.
std::size_t frame_count(std::size_t wideband_samples);
std::array<double, kFrameSize> wideband_frame(std::span<const double> wideband, std::size_t j);
std::array<double, kNarrowbandFrameSize> narrowband_frame(std::span<const double> narrowband, std::size_t j);

SideInfoStream encode_sideinfo(const AudioBuffer& wideband, const Codebook& cb, double preemph = kDefaultPreemphasis);
EncodeResult encode(const AudioBuffer& wideband, const Codebook& cb, const EncoderOptions& options = {});

struct DecoderOptions {
  double preemph = kDefaultPreemphasis;
  // Optional inverse channel filter applied to the received narrowband.
  std::optional<FirFilter> inverse_channel;
};

// Every memory a decoding stream carries between frames.
struct StreamState {
  explicit StreamState(const DecoderOptions& options = {});
  void reset();

  double preemph;
  std::optional<StreamingFir> inverse_channel;
  StreamingUpsampler upsampler;
  std::array<double, kNarrowbandFrameSize> pitch_history{};
  OscillatorState oscillator;
  PreEmphasisFilter emphasis;
  FilterState excitation = FilterState::zeros(kNarrowbandLpcOrder);
  FilterState whitening = FilterState::zeros(kWhiteningOrder);
  HighbandSynthesisState synthesis;
  DelayLine narrowband_delay;
  StreamingFir lowband_filter;
};

// Per-frame values exposed for inspection and evaluation.
struct FrameTrace {
  PitchInfo pitch;
  GainPair predicted_gains_db{};
  std::size_t envelope_index = 0;
  double excitation_scale = 0.0;
};

// Streaming decoder. push() accepts 8 kHz samples in chunks of any size and
// returns every 16 kHz sample that is final; finish() flushes the tail so the
// total output is exactly twice the input length and time-aligned with it.
class Decoder {
 public:
  Decoder(const Codebook& cb, const MlpNetwork& net, const SideInfoStream& side,
          const DecoderOptions& options = {});

  std::vector<double> push(std::span<const double> narrowband);
  std::vector<double> finish();

  // Internal delay at 16 kHz that finish() flushes: upsampler plus high-pass
  // split, plus the inverse channel filter's delay when one is configured.
  std::size_t latency() const { return latency_; }
  const std::vector<FrameTrace>& trace() const { return trace_; }

 private:
  void process_frame(std::span<const double> nb, std::vector<double>& out);
  void emit(std::span<const double> raw, std::vector<double>& out);

  Codebook cb_;
  MlpNetwork net_;
  SideInfoStream side_;
  DecoderOptions options_;
  std::size_t latency_ = 0;
  MfccExtractor mfcc_;
  StreamState state_;
  std::vector<double> pending_;
  std::size_t input_samples_ = 0;
  std::size_t frames_done_ = 0;
  std::size_t raw_emitted_ = 0;
  std::size_t output_count_ = 0;
  std::size_t output_limit_ = static_cast<std::size_t>(-1);
  bool finished_ = false;
  std::vector<FrameTrace> trace_;
};

AudioBuffer decode(const AudioBuffer& narrowband, const SideInfoStream& side, const Codebook& cb,
                   const MlpNetwork& net, const DecoderOptions& options = {});

}  // namespace bwx
