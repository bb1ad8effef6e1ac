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

#include "bwx/eval.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "bwx/error.hpp"
#include "bwx/fft.hpp"
#include "bwx/filter_design.hpp"
#include "bwx/highband.hpp"
#include "bwx/kernels.hpp"

namespace bwx {

namespace {

constexpr std::size_t kSnrTaps = 1023;
constexpr double kSnrBeta = 8.0;
constexpr double kSnrEdgeMargin = 60.0;  // Hz between band edge and cutoff

std::vector<double> zero_phase(std::span<const double> x, std::span<const double> taps) {
  const std::size_t d = (taps.size() - 1) / 2;
  std::vector<double> padded(x.begin(), x.end());
  padded.resize(x.size() + d, 0.0);
  auto y = apply_fir(padded, taps);
  y.erase(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(d));
  return y;
}

}  // namespace

double spectral_distortion(const EnvelopeSpectrum& ref, const EnvelopeSpectrum& test, double low_hz,
                           double high_hz) {
  double acc = 0.0;
  int count = 0;
  for (int k = 0; k < kEnvelopePoints; ++k) {
    const double f = EnvelopeSpectrum::frequency_hz(k);
    if (f < low_hz || f > high_hz) continue;
    const double d = ref.points[k] - test.points[k];
    acc += d * d;
    ++count;
  }
  require(count > 0, "spectral distortion band holds no grid points");
  return std::sqrt(acc / count);
}

DistortionReport summarize_distortion(std::vector<double> frame_sd, double low_hz, double high_hz) {
  require(!frame_sd.empty(), "distortion report needs at least one frame");
  DistortionReport r;
  r.low_hz = low_hz;
  r.high_hz = high_hz;
  r.frame_count = frame_sd.size();
  double sum = 0.0;
  for (double v : frame_sd) sum += v;
  r.mean = sum / static_cast<double>(frame_sd.size());
  auto sorted = frame_sd;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size() / 2;
  r.median = sorted.size() % 2 ? sorted[m] : 0.5 * (sorted[m - 1] + sorted[m]);
  r.frame_sd = std::move(frame_sd);
  return r;
}

DistortionReport evaluate_corpus_sd(std::span<const AudioBuffer> signals, const Codebook& cb,
                                    const EncoderOptions& encoder) {
  std::vector<double> sd;
  for (const auto& sig : signals) {
    const auto nb = make_narrowband(sig, encoder);
    const auto side = encode_sideinfo(sig, cb, encoder.preemph);
    for (std::size_t j = 0; j < side.frame_count(); ++j) {
      const auto frame = wideband_frame(sig.view(), j);
      if (is_silent(frame)) continue;
      const auto ref = wideband_envelope(frame, encoder.preemph);
      const auto nbf = narrowband_frame(nb.view(), j);
      const auto test = decode_envelope_spectrum({side.payload[j]}, cb, nbf, encoder.preemph);
      sd.push_back(spectral_distortion(ref, test));
    }
  }
  return summarize_distortion(std::move(sd));
}

double harmonic_gain_error(std::span<const GainPair> predicted, std::span<const GainPair> target) {
  require(!predicted.empty(), "harmonic error needs at least one frame");
  require(predicted.size() == target.size(), "prediction and target counts differ");
  double acc = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i)
    acc += std::abs(predicted[i][0] - target[i][0]) + std::abs(predicted[i][1] - target[i][1]);
  return acc / (2.0 * static_cast<double>(predicted.size()));
}

GainPair mean_targets(std::span<const TrainingSample> samples) {
  require(!samples.empty(), "mean of an empty target set");
  GainPair m{};
  for (const auto& s : samples) {
    m[0] += s.targets[0];
    m[1] += s.targets[1];
  }
  m[0] /= static_cast<double>(samples.size());
  m[1] /= static_cast<double>(samples.size());
  return m;
}

HarmonicReport evaluate_harmonics(const MlpNetwork& net, std::span<const TrainingSample> samples,
                                  const GainPair& baseline) {
  require(!samples.empty(), "harmonic evaluation needs at least one frame");
  std::vector<FeatureVector> features;
  std::vector<GainPair> targets;
  for (const auto& s : samples) {
    features.push_back(s.features);
    targets.push_back(s.targets);
  }
  const auto predicted = predict_batch(net, features);
  const std::vector<GainPair> constant(samples.size(), baseline);
  return {harmonic_gain_error(predicted, targets), harmonic_gain_error(constant, targets), samples.size()};
}

double band_snr(const AudioBuffer& x, const AudioBuffer& y, double low_hz, double high_hz) {
  require(x.sample_rate() == y.sample_rate(), "band SNR inputs differ in sample rate");
  require(x.size() == y.size(), "band SNR inputs differ in length");
  const double rate = x.sample_rate();
  require(low_hz >= 0.0 && high_hz <= rate / 2.0 && high_hz - low_hz > 4.0 * kSnrEdgeMargin,
          "band SNR band is too narrow or outside the Nyquist range");
  std::vector<double> taps;
  if (low_hz > 0.0)
    taps = design_bandpass(kSnrTaps, low_hz + kSnrEdgeMargin, high_hz - kSnrEdgeMargin, rate, kSnrBeta);
  else
    taps = design_lowpass(kSnrTaps, high_hz - kSnrEdgeMargin, rate, kSnrBeta);
  // Only samples with full filter support count; onset transients at the
  // edges are broadband.
  const std::size_t edge = taps.size() / 2;
  require(x.size() > 4 * edge, "band SNR signal is shorter than twice the measurement filter");
  const auto xb = zero_phase(x.view(), taps);
  const auto yb = zero_phase(y.view(), taps);
  double signal = 0.0, noise = 0.0;
  for (std::size_t n = edge; n + edge < xb.size(); ++n) {
    signal += xb[n] * xb[n];
    noise += (xb[n] - yb[n]) * (xb[n] - yb[n]);
  }
  if (!(signal > 0.0)) throw DegenerateError("band SNR undefined: reference has no energy in the band");
  if (!(noise > 0.0)) return kSnrCap;
  return std::min(kSnrCap, 10.0 * std::log10(signal / noise));
}

std::vector<SpectrumPoint> dump_spectrum(const AudioBuffer& x, double start_seconds, double window_ms,
                                         double offset_db) {
  require(window_ms > 0.0 && start_seconds >= 0.0, "spectrum window must be positive and start at t >= 0");
  const auto len = static_cast<std::size_t>(std::lround(window_ms * x.sample_rate() / 1000.0));
  const auto start = static_cast<std::size_t>(std::lround(start_seconds * x.sample_rate()));
  require(len >= 2 && start + len <= x.size(), "signal too short for the spectrum window");
  const auto w = hanning_window(len);
  std::vector<double> seg(len);
  for (std::size_t n = 0; n < len; ++n) seg[n] = w[n] * x.samples()[start + n];
  const std::size_t nfft = std::bit_ceil(len);
  const auto p = power_spectrum(seg, nfft);
  std::vector<SpectrumPoint> out(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    const bool edge = k == 0 || k == nfft / 2;
    const double power = (edge ? 1.0 : 2.0) * p[k] / static_cast<double>(nfft);
    out[k].hz = static_cast<double>(k) * x.sample_rate() / static_cast<double>(nfft);
    out[k].db = 10.0 * std::log10(power + 1e-30) + offset_db;
  }
  return out;
}

}  // namespace bwx
