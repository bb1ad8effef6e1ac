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

// Linear-prediction toolbox: windows, autocorrelation, Levinson-Durbin,
// analysis/synthesis filtering with carried memory, pre-emphasis, and the
// mapping between predictor coefficients and the 64-point log envelope.

#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace bwx {

inline constexpr int kEnvelopePoints = 64;
inline constexpr double kEnvelopeSpacingHz = 125.0;
inline constexpr int kEnvelopeTransformSize = 128;

inline constexpr double kDefaultPreemphasis = 0.7;
inline constexpr int kWidebandLpcOrder = 16;
inline constexpr int kNarrowbandLpcOrder = 10;
inline constexpr int kWhiteningOrder = 16;

// Prediction-error filter A(z) = sum a[i] z^-i with a[0] = 1.
struct LpcModel {
  int order = 0;
  std::vector<double> coeffs{1.0};
  double residual_energy = 0.0;
  // Reflection coefficients produced by the recursion (may be shorter than
  // order when the recursion stopped early).
  std::vector<double> reflection;
  // Set when Levinson-Durbin met |k| >= 1 and zeroed the remaining terms.
  bool truncated = false;

  // Pass-through model of the given order (all a[i>0] = 0).
  static LpcModel identity(int order, double residual_energy = 1.0);
};

// Step-down recursion from predictor to reflection coefficients k_1..k_p;
// nullopt when some |k| >= 1 (the synthesis filter would be unstable).
std::optional<std::vector<double>> reflection_coefficients(std::span<const double> coeffs);
bool is_stable(std::span<const double> coeffs);

// 10 log10 power at f_k = 125 k Hz, k = 0..63, over 0-8 kHz.
struct EnvelopeSpectrum {
  std::array<double, kEnvelopePoints> points{};

  static EnvelopeSpectrum flat(double db);
  static constexpr double frequency_hz(int k) { return kEnvelopeSpacingHz * k; }
};

struct FilterState {
  std::vector<double> memory;  // memory[0] is the most recent sample

  static FilterState zeros(int order) {
    return FilterState{std::vector<double>(static_cast<std::size_t>(order), 0.0)};
  }
};

struct FilterResult {
  std::vector<double> output;
  FilterState state;
};

// w(n) = 0.5 - 0.5 cos(2 pi n / L), n = 0..L-1.
std::vector<double> hanning_window(std::size_t length);

std::vector<double> autocorrelation(std::span<const double> x, std::size_t max_lag);

LpcModel levinson_durbin(std::span<const double> r);

// Pre-emphasis, Hanning window, autocorrelation with r[0] *= 1 + 1e-4,
// then Levinson-Durbin.
LpcModel lpc_analysis(std::span<const double> frame, int order, double preemph);

// e[n] = sum_i a[i] x[n-i]; state holds past inputs.
FilterResult inverse_filter(std::span<const double> x, const LpcModel& model, FilterState state);
// x[n] = e[n] - sum_{i>=1} a[i] x[n-i]; state holds past outputs.
FilterResult synthesis_filter(std::span<const double> e, const LpcModel& model, FilterState state);

// 10 log10(gain^2 / |A|^2) sampled on n_points of a zero-padded 128-point
// transform of the coefficients, spaced 125 Hz apart, at the given rate.
std::vector<double> lpc_power_db(const LpcModel& model, double gain, int sample_rate,
                                 std::size_t n_points);

EnvelopeSpectrum lpc_to_envelope(const LpcModel& model, double gain);
LpcModel envelope_to_lpc(const EnvelopeSpectrum& env, int order);

std::vector<double> pre_emphasis(std::span<const double> x, double mu);

// Streaming first-order emphasis filters; `last` is the carried memory.
struct PreEmphasisFilter {
  double mu = kDefaultPreemphasis;
  double last = 0.0;
  void process(std::span<double> x);
};

struct DeEmphasisFilter {
  double mu = kDefaultPreemphasis;
  double last = 0.0;
  void process(std::span<double> x);
};

}  // namespace bwx
