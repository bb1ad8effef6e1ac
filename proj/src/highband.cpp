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

#include "bwx/highband.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bwx/error.hpp"
#include "bwx/filter_design.hpp"

namespace bwx {

namespace {

// |1 - mu e^{-jw}|^2 in dB at f Hz for the given sample rate.
double emphasis_db(double mu, double f, double rate) {
  const double w = 2.0 * std::numbers::pi * f / rate;
  return 10.0 * std::log10(1.0 + mu * mu - 2.0 * mu * std::cos(w));
}

double band_energy(std::span<const double> x) {
  const auto y = apply_fir(x, filters::gain_match_lowpass().taps);
  double e = 0.0;
  for (double v : y) e += v * v;
  return e;
}

}  // namespace

std::vector<double> extend_excitation(std::span<const double> excitation) {
  std::vector<double> y(excitation.size());
  std::transform(excitation.begin(), excitation.end(), y.begin(), [](double v) { return std::abs(v); });
  return y;
}

WhitenResult whiten(std::span<const double> extended, FilterState state, int order) {
  require(state.memory.size() == static_cast<std::size_t>(order), "whitening state size differs from order");
  LpcModel model = LpcModel::identity(order);
  bool passthrough = false;
  try {
    model = lpc_analysis(extended, order, 0.0);
  } catch (const DegenerateError&) {
    passthrough = true;
  }
  auto filtered = inverse_filter(extended, model, std::move(state));
  return {std::move(filtered.output), std::move(filtered.state), passthrough};
}

GainMatchResult gain_match(std::span<const double> whitened, std::span<const double> reference) {
  require(whitened.size() == reference.size(), "gain match frames differ in length");
  const double ew = band_energy(whitened);
  if (!(ew > 0.0)) return {std::vector<double>(whitened.size(), 0.0), 0.0};
  const double g = std::sqrt(band_energy(reference) / ew);
  std::vector<double> out(whitened.size());
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = g * whitened[n];
  return {std::move(out), g};
}

EnvelopeSpectrum wideband_envelope(std::span<const double> frame, double preemph) {
  require(frame.size() == static_cast<std::size_t>(kFrameSize), "wideband envelope needs a 256-sample frame");
  try {
    const auto model = lpc_analysis(frame, kWidebandLpcOrder, preemph);
    return lpc_to_envelope(model, std::sqrt(model.residual_energy));
  } catch (const DegenerateError&) {
    return EnvelopeSpectrum::flat(kSilentEnvelopeDb);
  }
}

HighbandVector highband_vector(const EnvelopeSpectrum& env) {
  double anchor = 0.0;
  for (int k = kAnchorFirstPoint; k < kAnchorFirstPoint + kAnchorPoints; ++k) anchor += env.points[k];
  anchor /= kAnchorPoints;
  HighbandVector v{};
  for (int i = 0; i < kHighbandPoints; ++i) v[i] = env.points[kHighbandFirstPoint + i] - anchor;
  return v;
}

HighbandVector highband_vector(std::span<const double> frame, double preemph) {
  return highband_vector(wideband_envelope(frame, preemph));
}

HighbandFrameCode encode_envelope(std::span<const double> frame, const Codebook& cb, double preemph) {
  require(cb.dim == kHighbandPoints, "envelope codebook must have dimension 40");
  const auto v = highband_vector(frame, preemph);
  return {quantize(cb, v)};
}

std::array<double, kNarrowbandEnvelopePoints> narrowband_envelope(std::span<const double> nb_frame,
                                                                  double preemph) {
  require(nb_frame.size() == static_cast<std::size_t>(kNarrowbandFrameSize),
          "narrowband envelope needs a 128-sample frame");
  std::array<double, kNarrowbandEnvelopePoints> out{};
  std::vector<double> pts;
  try {
    const auto model = lpc_analysis(nb_frame, kNarrowbandLpcOrder, preemph);
    pts = lpc_power_db(model, std::sqrt(model.residual_energy), kNarrowbandRate, kNarrowbandEnvelopePoints);
  } catch (const DegenerateError&) {
    out.fill(kSilentEnvelopeDb);
    return out;
  }
  // Half the frame length and twice the spectral density per Hz relative to a
  // 256-sample 16 kHz analysis: +6.02 dB. The emphasis filter's response also
  // differs between the two rates.
  const double level = 10.0 * std::log10(4.0);
  for (int k = 0; k < kNarrowbandEnvelopePoints; ++k) {
    const double f = EnvelopeSpectrum::frequency_hz(k);
    out[k] = pts[k] + level + emphasis_db(preemph, f, kWidebandRate) - emphasis_db(preemph, f, kNarrowbandRate);
  }
  return out;
}

EnvelopeSpectrum concatenate_envelope(const std::array<double, kNarrowbandEnvelopePoints>& local,
                                      std::span<const double> word) {
  require(word.size() == static_cast<std::size_t>(kHighbandPoints), "high band word must have 40 points");
  EnvelopeSpectrum env;
  std::copy(local.begin(), local.end(), env.points.begin());
  double anchor = 0.0;
  for (int k = kAnchorFirstPoint; k < kAnchorFirstPoint + kAnchorPoints; ++k) anchor += local[k];
  anchor /= kAnchorPoints;
  for (int i = 0; i < kHighbandPoints; ++i) env.points[kHighbandFirstPoint + i] = word[i] + anchor;
  return env;
}

EnvelopeSpectrum decode_envelope_spectrum(const HighbandFrameCode& code, const Codebook& cb,
                                          std::span<const double> nb_frame, double preemph) {
  require(cb.dim == kHighbandPoints, "envelope codebook must have dimension 40");
  const auto word = decode_index(cb, code.index);
  return concatenate_envelope(narrowband_envelope(nb_frame, preemph), word);
}

LpcModel decode_envelope(const HighbandFrameCode& code, const Codebook& cb, std::span<const double> nb_frame,
                         double preemph) {
  return envelope_to_lpc(decode_envelope_spectrum(code, cb, nb_frame, preemph), kWidebandLpcOrder);
}

HighbandSynthesisState::HighbandSynthesisState(double preemph) : split(filters::highband_split().taps) {
  deemphasis.mu = preemph;
}

std::vector<double> synthesize_highband(std::span<const double> excitation, const LpcModel& model,
                                        HighbandSynthesisState& state) {
  auto synth = synthesis_filter(excitation, model, state.synthesis);
  state.synthesis = std::move(synth.state);
  state.deemphasis.process(synth.output);
  return state.split.process(synth.output);
}

int highband_split_delay() { return static_cast<int>(filters::highband_split().taps.size() - 1) / 2; }

}  // namespace bwx
