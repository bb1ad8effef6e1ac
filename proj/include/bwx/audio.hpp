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

// Mono audio carrier, PCM16 WAV I/O, 2x sample-rate conversion and FIR
// filtering.

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace bwx {

inline constexpr int kNarrowbandRate = 8000;
inline constexpr int kWidebandRate = 16000;

// Mono signal with a sample rate of 8000 or 16000 Hz and finite samples.
// Construction validates both invariants.
class AudioBuffer {
 public:
  AudioBuffer() = default;
  AudioBuffer(std::vector<double> samples, int sample_rate);

  static AudioBuffer zeros(std::size_t n, int sample_rate);

  const std::vector<double>& samples() const { return samples_; }
  std::span<const double> view() const { return samples_; }
  int sample_rate() const { return sample_rate_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  double duration_seconds() const {
    return static_cast<double>(samples_.size()) / sample_rate_;
  }

 private:
  std::vector<double> samples_;
  int sample_rate_ = kWidebandRate;
};

struct FirFilter {
  std::vector<double> taps;
  std::string description;

  FirFilter() = default;
  FirFilter(std::vector<double> t, std::string desc);

  static FirFilter identity() { return FirFilter({1.0}, "identity"); }
  std::size_t length() const { return taps.size(); }
  // Group delay of a linear-phase filter in input samples.
  double group_delay() const { return (static_cast<double>(taps.size()) - 1.0) / 2.0; }
};

AudioBuffer read_wav(const std::filesystem::path& path);
void write_wav(const AudioBuffer& buf, const std::filesystem::path& path);

// Tap files hold one decimal coefficient per line; '#' starts a comment.
FirFilter read_fir_taps(const std::filesystem::path& path);
void write_fir_taps(const FirFilter& filt, const std::filesystem::path& path);

// Causal linear convolution truncated to the input length.
std::vector<double> apply_fir(std::span<const double> x, std::span<const double> taps);
AudioBuffer apply_fir(const AudioBuffer& buf, const FirFilter& filt);

// Both resamplers are causal and share one linear-phase anti-aliasing filter
// running at 16 kHz; its delay is resampler_delay() samples at 16 kHz.
const FirFilter& resampler_filter();
int resampler_delay();

AudioBuffer upsample_2x(const AudioBuffer& buf);
AudioBuffer downsample_2x(const AudioBuffer& buf);

// FIR filter with carried history, for frame-by-frame streaming.
class StreamingFir {
 public:
  StreamingFir() = default;
  explicit StreamingFir(std::vector<double> taps);

  void process(std::span<const double> in, std::span<double> out);
  std::vector<double> process(std::span<const double> in);
  void reset();

 private:
  std::vector<double> taps_;
  std::vector<double> history_;  // last taps-1 inputs, oldest first
};

// Streaming 8 kHz -> 16 kHz interpolator using the resampler filter in
// polyphase form. Output of N inputs is 2N samples.
class StreamingUpsampler {
 public:
  StreamingUpsampler();

  std::vector<double> process(std::span<const double> in);
  void reset();

 private:
  std::vector<double> even_;  // polyphase branches of the prototype filter
  std::vector<double> odd_;
  std::vector<double> history_;
};

// Fixed integer delay line.
class DelayLine {
 public:
  explicit DelayLine(std::size_t delay = 0) : buf_(delay, 0.0) {}

  void process(std::span<const double> in, std::span<double> out);
  void reset();
  std::size_t delay() const { return buf_.size(); }

 private:
  std::vector<double> buf_;
  std::size_t pos_ = 0;
};

}  // namespace bwx
