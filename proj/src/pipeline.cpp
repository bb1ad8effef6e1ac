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

#include "bwx/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bwx/error.hpp"
#include "bwx/filter_design.hpp"
#include "bwx/kernels.hpp"
#include "bwx/pitch.hpp"

namespace bwx {

namespace {

std::size_t fir_delay(const FirFilter& f) { return (f.length() - 1) / 2; }

// Zero-phase FIR: causal filtering with the group delay removed.
std::vector<double> filter_zero_phase(std::span<const double> x, const FirFilter& f) {
  const std::size_t d = fir_delay(f);
  std::vector<double> padded(x.begin(), x.end());
  padded.resize(x.size() + d, 0.0);
  auto y = apply_fir(padded, f.taps);
  y.erase(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(d));
  return y;
}

std::size_t lowband_path_delay() {
  return static_cast<std::size_t>(resampler_delay() + highband_split_delay());
}

}  // namespace

AudioBuffer make_narrowband(const AudioBuffer& wideband, const EncoderOptions& options) {
  require(wideband.sample_rate() == kWidebandRate, "encoder input must be sampled at 16 kHz");
  std::vector<double> x = options.telephone_band ? filter_zero_phase(wideband.view(), filters::telephone_bandpass())
                                                 : wideband.samples();
  // Advance by the decimator's delay so narrowband sample i sits at wideband sample 2i.
  const auto d = static_cast<std::size_t>(resampler_delay());
  x.erase(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(std::min(d, x.size())));
  x.resize(wideband.size(), 0.0);
  auto nb = downsample_2x(AudioBuffer(std::move(x), kWidebandRate));
  if (options.channel_filter) nb = apply_fir(nb, *options.channel_filter);
  return nb;
}

std::size_t frame_count(std::size_t wideband_samples) { return (wideband_samples + kFrameSize - 1) / kFrameSize; }

std::array<double, kFrameSize> wideband_frame(std::span<const double> wideband, std::size_t j) {
  std::array<double, kFrameSize> f{};
  const std::size_t begin = std::min(wideband.size(), j * kFrameSize);
  const std::size_t end = std::min(wideband.size(), begin + kFrameSize);
  std::copy(wideband.begin() + static_cast<std::ptrdiff_t>(begin), wideband.begin() + static_cast<std::ptrdiff_t>(end),
            f.begin());
  return f;
}

std::array<double, kNarrowbandFrameSize> narrowband_frame(std::span<const double> narrowband, std::size_t j) {
  std::array<double, kNarrowbandFrameSize> f{};
  const std::size_t begin = std::min(narrowband.size(), j * kNarrowbandFrameSize);
  const std::size_t end = std::min(narrowband.size(), begin + kNarrowbandFrameSize);
  std::copy(narrowband.begin() + static_cast<std::ptrdiff_t>(begin),
            narrowband.begin() + static_cast<std::ptrdiff_t>(end), f.begin());
  return f;
}

SideInfoStream encode_sideinfo(const AudioBuffer& wideband, const Codebook& cb, double preemph) {
  require(wideband.sample_rate() == kWidebandRate, "encoder input must be sampled at 16 kHz");
  if (cb.dim != kHighbandPoints) throw CodebookError("envelope codebook must have dimension 40");
  if (cb.bits > 8) throw CodebookError("envelope codebook must have at most 256 entries to fit one byte per frame");
  SideInfoStream side;
  side.header.codebook_hash = cb.content_hash();
  const auto vectors = highband_vectors(wideband.view(), preemph);
  const auto hits = assign_nearest(cb, vectors);
  side.payload.assign(hits.index.begin(), hits.index.end());
  return side;
}

EncodeResult encode(const AudioBuffer& wideband, const Codebook& cb, const EncoderOptions& options) {
  return {make_narrowband(wideband, options), encode_sideinfo(wideband, cb, options.preemph)};
}

StreamState::StreamState(const DecoderOptions& options)
    : preemph(options.preemph),
      synthesis(options.preemph),
      narrowband_delay(static_cast<std::size_t>(highband_split_delay())),
      lowband_filter(filters::lowband_output_lowpass().taps) {
  require(fir_delay(filters::lowband_output_lowpass()) == lowband_path_delay(),
          "low band filter delay must match the other paths");
  if (options.inverse_channel) inverse_channel.emplace(options.inverse_channel->taps);
  emphasis.mu = options.preemph;
}

void StreamState::reset() {
  if (inverse_channel) inverse_channel->reset();
  upsampler.reset();
  pitch_history.fill(0.0);
  oscillator = {};
  emphasis.last = 0.0;
  excitation = FilterState::zeros(kNarrowbandLpcOrder);
  whitening = FilterState::zeros(kWhiteningOrder);
  synthesis.synthesis = FilterState::zeros(kWidebandLpcOrder);
  synthesis.deemphasis.last = 0.0;
  synthesis.split.reset();
  narrowband_delay.reset();
  lowband_filter.reset();
}

Decoder::Decoder(const Codebook& cb, const MlpNetwork& net, const SideInfoStream& side, const DecoderOptions& options)
    : cb_(cb), net_(net), side_(side), options_(options), mfcc_(net.mfcc), state_(options) {
  if (cb.dim != kHighbandPoints) throw CodebookError("envelope codebook must have dimension 40");
  if (side.header.codebook_hash != cb.content_hash()) throw CodebookError("codebook hash mismatch");
  require(options.preemph >= 0.0 && options.preemph < 1.0, "pre-emphasis must lie in [0, 1)");
  net_.validate();
  latency_ = lowband_path_delay();
  if (options.inverse_channel) {
    require(options.inverse_channel->length() % 2 == 1, "inverse channel filter needs an odd tap count");
    latency_ += 2 * fir_delay(*options.inverse_channel);
  }
}

std::vector<double> Decoder::push(std::span<const double> narrowband) {
  if (finished_) throw StreamError("decoder already finished");
  for (double v : narrowband)
    if (!std::isfinite(v)) throw InputError("narrowband input holds a non-finite sample");
  input_samples_ += narrowband.size();
  pending_.insert(pending_.end(), narrowband.begin(), narrowband.end());
  std::vector<double> out;
  std::size_t used = 0;
  while (pending_.size() - used >= static_cast<std::size_t>(kNarrowbandFrameSize)) {
    process_frame(std::span<const double>(pending_).subspan(used, kNarrowbandFrameSize), out);
    used += kNarrowbandFrameSize;
  }
  pending_.erase(pending_.begin(), pending_.begin() + static_cast<std::ptrdiff_t>(used));
  return out;
}

std::vector<double> Decoder::finish() {
  if (finished_) throw StreamError("decoder already finished");
  const std::size_t nb_frames = (input_samples_ + kNarrowbandFrameSize - 1) / kNarrowbandFrameSize;
  const std::size_t si_frames = side_.frame_count();
  const std::size_t gap = nb_frames > si_frames ? nb_frames - si_frames : si_frames - nb_frames;
  if (gap > 1)
    throw StreamError("frame count mismatch: narrowband has " + std::to_string(nb_frames) +
                      " frames, side info has " + std::to_string(si_frames));
  finished_ = true;

  std::vector<double> out;
  output_limit_ = 2 * input_samples_;
  const std::size_t wanted_raw = output_limit_ + latency_;
  std::array<double, kNarrowbandFrameSize> frame{};
  std::copy(pending_.begin(), pending_.end(), frame.begin());
  pending_.clear();
  while (raw_emitted_ < wanted_raw) {
    process_frame(frame, out);
    frame.fill(0.0);
  }
  return out;
}

void Decoder::emit(std::span<const double> raw, std::vector<double>& out) {
  for (double v : raw) {
    if (raw_emitted_ >= latency_ && output_count_ < output_limit_) {
      out.push_back(v);
      ++output_count_;
    }
    ++raw_emitted_;
  }
}

void Decoder::process_frame(std::span<const double> input, std::vector<double>& out) {
  std::vector<double> nb(input.begin(), input.end());
  if (state_.inverse_channel) nb = state_.inverse_channel->process(input);

  FrameTrace trace;

  // Low band from the current frame and one frame of history.
  std::array<double, kPitchFrameLength> pitch_frame{};
  std::copy(state_.pitch_history.begin(), state_.pitch_history.end(), pitch_frame.begin());
  std::copy(nb.begin(), nb.end(), pitch_frame.begin() + kNarrowbandFrameSize);
  std::copy(nb.begin(), nb.end(), state_.pitch_history.begin());
  trace.pitch = estimate_pitch(pitch_frame);
  const auto mfcc = mfcc_.compute(nb);
  trace.predicted_gains_db = net_.forward(assemble_features(mfcc, trace.pitch));
  auto low = synthesize_lowband(trace.pitch.f0_hz(), trace.predicted_gains_db, state_.oscillator, kFrameSize,
                                trace.pitch.gain);
  state_.oscillator = low.state;
  const auto low_delayed = state_.lowband_filter.process(low.samples);

  // High band: excitation of the upsampled narrowband, extended, whitened,
  // gain matched, then shaped by the decoded full-band envelope.
  const auto up = state_.upsampler.process(nb);
  std::vector<double> emphasized = up;
  state_.emphasis.process(emphasized);
  LpcModel a10 = LpcModel::identity(kNarrowbandLpcOrder, 0.0);
  try {
    a10 = lpc_analysis(up, kNarrowbandLpcOrder, state_.preemph);
  } catch (const DegenerateError&) {
  }
  auto exc = inverse_filter(emphasized, a10, std::move(state_.excitation));
  state_.excitation = std::move(exc.state);
  auto white = whiten(extend_excitation(exc.output), std::move(state_.whitening));
  state_.whitening = std::move(white.state);
  auto matched = gain_match(white.output, exc.output);

  const std::size_t payload = side_.frame_count();
  std::vector<double> word(kHighbandPoints, 0.0);
  if (payload > 0) {
    trace.envelope_index = side_.payload[std::min(frames_done_, payload - 1)];
    word = decode_index(cb_, trace.envelope_index);
  }
  std::array<double, kNarrowbandFrameSize> nb_frame{};
  std::copy(nb.begin(), nb.end(), nb_frame.begin());
  const auto env = concatenate_envelope(narrowband_envelope(nb_frame, state_.preemph), word);
  const auto b = envelope_to_lpc(env, kWidebandLpcOrder);
  // The excitation carries the upsampled frame's prediction-error power;
  // rescale it to the power 1/B(z) expects.
  if (a10.residual_energy > 0.0 && b.residual_energy > 0.0)
    trace.excitation_scale = std::sqrt(b.residual_energy / a10.residual_energy);
  for (double& v : matched.output) v *= trace.excitation_scale;
  const auto high = synthesize_highband(matched.output, b, state_.synthesis);

  std::vector<double> mid(kFrameSize);
  state_.narrowband_delay.process(up, mid);
  std::vector<double> raw(kFrameSize);
  for (std::size_t n = 0; n < raw.size(); ++n) raw[n] = mid[n] + high[n] + low_delayed[n];
  emit(raw, out);
  trace_.push_back(trace);
  ++frames_done_;
}

AudioBuffer decode(const AudioBuffer& narrowband, const SideInfoStream& side, const Codebook& cb,
                   const MlpNetwork& net, const DecoderOptions& options) {
  require(narrowband.sample_rate() == kNarrowbandRate, "decoder input must be sampled at 8 kHz");
  Decoder dec(cb, net, side, options);
  auto out = dec.push(narrowband.view());
  const auto tail = dec.finish();
  out.insert(out.end(), tail.begin(), tail.end());
  return AudioBuffer(std::move(out), kWidebandRate);
}

}  // namespace bwx
