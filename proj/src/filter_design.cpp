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

#include "bwx/filter_design.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "bwx/error.hpp"

namespace bwx {

namespace {

constexpr double kPi = std::numbers::pi;

double sinc(double x) {
  if (x == 0.0) return 1.0;
  return std::sin(kPi * x) / (kPi * x);
}

void require_odd(std::size_t num_taps) {
  require(num_taps % 2 == 1, "FIR design needs an odd tap count");
}

}  // namespace

std::vector<double> kaiser_window(std::size_t length, double beta) {
  require(length >= 1, "Kaiser window needs at least one point");
  std::vector<double> w(length, 1.0);
  if (length == 1) return w;
  const double denom = std::cyl_bessel_i(0.0, beta);
  const double m = static_cast<double>(length - 1);
  for (std::size_t n = 0; n < length; ++n) {
    const double r = 2.0 * static_cast<double>(n) / m - 1.0;
    w[n] = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / denom;
  }
  return w;
}

std::vector<double> design_lowpass(std::size_t num_taps, double cutoff_hz,
                                   double rate_hz, double beta) {
  require_odd(num_taps);
  require(cutoff_hz > 0.0 && cutoff_hz < rate_hz / 2.0, "cutoff outside (0, Nyquist)");
  const auto w = kaiser_window(num_taps, beta);
  const double fc = cutoff_hz / rate_hz;
  const double mid = static_cast<double>(num_taps - 1) / 2.0;
  std::vector<double> h(num_taps);
  double sum = 0.0;
  for (std::size_t n = 0; n < num_taps; ++n) {
    h[n] = 2.0 * fc * sinc(2.0 * fc * (static_cast<double>(n) - mid)) * w[n];
    sum += h[n];
  }
  // Unity gain at DC.
  for (auto& v : h) v /= sum;
  return h;
}

std::vector<double> design_highpass(std::size_t num_taps, double cutoff_hz,
                                    double rate_hz, double beta) {
  auto h = design_lowpass(num_taps, cutoff_hz, rate_hz, beta);
  for (auto& v : h) v = -v;
  h[(num_taps - 1) / 2] += 1.0;
  return h;
}

std::vector<double> design_bandpass(std::size_t num_taps, double low_hz,
                                    double high_hz, double rate_hz,
                                    double beta) {
  require(low_hz < high_hz, "band-pass edges out of order");
  const auto hi = design_lowpass(num_taps, high_hz, rate_hz, beta);
  const auto lo = design_lowpass(num_taps, low_hz, rate_hz, beta);
  std::vector<double> h(num_taps);
  for (std::size_t n = 0; n < num_taps; ++n) h[n] = hi[n] - lo[n];
  return h;
}

FirFilter design_from_magnitude(std::span<const std::pair<double, double>> table,
                                std::size_t num_taps, double rate_hz) {
  require_odd(num_taps);
  require(!table.empty(), "magnitude table is empty");
  for (std::size_t i = 1; i < table.size(); ++i)
    require(table[i].first > table[i - 1].first, "magnitude table frequencies must increase");

  auto gain_at = [&](double f) {
    if (f <= table.front().first) return table.front().second;
    if (f >= table.back().first) return table.back().second;
    for (std::size_t i = 1; i < table.size(); ++i) {
      if (f <= table[i].first) {
        const auto [f0, g0] = table[i - 1];
        const auto [f1, g1] = table[i];
        return g0 + (g1 - g0) * (f - f0) / (f1 - f0);
      }
    }
    return table.back().second;
  };

  // Zero-phase samples on a dense grid, inverse cosine transform, then
  // shift to causal and window.
  const std::size_t grid = 8 * num_taps;
  const double mid = static_cast<double>(num_taps - 1) / 2.0;
  std::vector<double> taps(num_taps, 0.0);
  for (std::size_t n = 0; n < num_taps; ++n) {
    const double t = static_cast<double>(n) - mid;
    double acc = 0.0;
    for (std::size_t k = 0; k <= grid; ++k) {
      const double f = 0.5 * rate_hz * static_cast<double>(k) / static_cast<double>(grid);
      const double weight = (k == 0 || k == grid) ? 0.5 : 1.0;
      acc += weight * gain_at(f) * std::cos(kPi * static_cast<double>(k) * t / static_cast<double>(grid));
    }
    const double hann = 0.5 - 0.5 * std::cos(2.0 * kPi * (static_cast<double>(n) + 1.0) /
                                             (static_cast<double>(num_taps) + 1.0));
    taps[n] = acc / static_cast<double>(grid) * hann;
  }
  return FirFilter(std::move(taps), "frequency-sampled");
}

double magnitude_response(std::span<const double> taps, double freq_hz,
                          double rate_hz) {
  std::complex<double> acc{0.0, 0.0};
  const double w = 2.0 * kPi * freq_hz / rate_hz;
  for (std::size_t n = 0; n < taps.size(); ++n)
    acc += taps[n] * std::polar(1.0, -w * static_cast<double>(n));
  return std::abs(acc);
}

namespace filters {

const FirFilter& telephone_bandpass() {
  static const FirFilter f(design_bandpass(255, 300.0, 3400.0, kWidebandRate, 7.0),
                           "telephone band 300-3400 Hz");
  return f;
}

const FirFilter& highband_split() {
  static const FirFilter f(design_highpass(127, 3400.0, kWidebandRate, 5.0),
                           "high band split 3400 Hz");
  return f;
}

const FirFilter& lowband_target_lowpass() {
  static const FirFilter f(design_lowpass(511, 350.0, kWidebandRate, 7.0),
                           "low band target limiter 350 Hz");
  return f;
}

const FirFilter& lowband_output_lowpass() {
  static const FirFilter f(design_lowpass(253, 340.0, kWidebandRate, 6.0), "low band output 340 Hz");
  return f;
}

const FirFilter& gain_match_lowpass() {
  static const FirFilter f(design_lowpass(63, 3400.0, kWidebandRate, 6.0),
                           "gain match 0-3400 Hz");
  return f;
}

}  // namespace filters

}  // namespace bwx
