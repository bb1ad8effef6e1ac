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

#include "bwx/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bwx/error.hpp"

namespace bwx {

namespace {

constexpr double kWhiteNoiseCorrection = 1e-4;

}  // namespace

LpcModel LpcModel::identity(int order, double residual_energy) {
  LpcModel m;
  m.order = order;
  m.coeffs.assign(static_cast<std::size_t>(order) + 1, 0.0);
  m.coeffs[0] = 1.0;
  m.residual_energy = residual_energy;
  m.reflection.assign(static_cast<std::size_t>(order), 0.0);
  return m;
}

std::optional<std::vector<double>> reflection_coefficients(std::span<const double> coeffs) {
  require(!coeffs.empty() && coeffs[0] == 1.0, "predictor must have a[0] = 1");
  std::vector<double> a(coeffs.begin(), coeffs.end());
  const std::size_t p = a.size() - 1;
  std::vector<double> k(p, 0.0);
  for (std::size_t m = p; m >= 1; --m) {
    const double km = a[m];
    if (!(std::abs(km) < 1.0)) return std::nullopt;
    k[m - 1] = km;
    const double denom = 1.0 - km * km;
    std::vector<double> prev(m);
    prev[0] = 1.0;
    for (std::size_t j = 1; j < m; ++j) prev[j] = (a[j] - km * a[m - j]) / denom;
    a = std::move(prev);
  }
  return k;
}

bool is_stable(std::span<const double> coeffs) {
  return reflection_coefficients(coeffs).has_value();
}

EnvelopeSpectrum EnvelopeSpectrum::flat(double db) {
  EnvelopeSpectrum e;
  e.points.fill(db);
  return e;
}

std::vector<double> hanning_window(std::size_t length) {
  require(length >= 2, "Hanning window needs length >= 2");
  std::vector<double> w(length);
  const double l = static_cast<double>(length);
  for (std::size_t n = 0; n < length; ++n)
    w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) / l);
  return w;
}

std::vector<double> autocorrelation(std::span<const double> x, std::size_t max_lag) {
  require(x.size() > max_lag, "autocorrelation needs more samples than max_lag");
  std::vector<double> r(max_lag + 1, 0.0);
  for (std::size_t k = 0; k <= max_lag; ++k) {
    double acc = 0.0;
    for (std::size_t n = 0; n + k < x.size(); ++n) acc += x[n] * x[n + k];
    r[k] = acc;
  }
  return r;
}

LpcModel levinson_durbin(std::span<const double> r) {
  require(!r.empty(), "Levinson-Durbin needs r[0]");
  if (!(r[0] > 0.0)) throw DegenerateError("Levinson-Durbin: r[0] must be positive");
  const std::size_t p = r.size() - 1;
  LpcModel m = LpcModel::identity(static_cast<int>(p), r[0]);
  m.reflection.clear();
  auto& a = m.coeffs;
  std::vector<double> prev(p + 1);
  double err = r[0];
  for (std::size_t i = 1; i <= p; ++i) {
    double acc = r[i];
    for (std::size_t j = 1; j < i; ++j) acc += a[j] * r[i - j];
    const double k = -acc / err;
    if (!(std::abs(k) < 1.0)) {
      m.truncated = true;
      break;
    }
    prev.assign(a.begin(), a.end());
    for (std::size_t j = 1; j < i; ++j) a[j] = prev[j] + k * prev[i - j];
    a[i] = k;
    err *= 1.0 - k * k;
    m.reflection.push_back(k);
  }
  m.residual_energy = err;
  return m;
}

LpcModel lpc_analysis(std::span<const double> frame, int order, double preemph) {
  require(order >= 1, "LPC order must be >= 1");
  require(frame.size() >= 2 * static_cast<std::size_t>(order), "LPC frame shorter than 2*order");
  require(preemph >= 0.0 && preemph < 1.0, "pre-emphasis must lie in [0, 1)");
  auto y = pre_emphasis(frame, preemph);
  const auto w = hanning_window(y.size());
  for (std::size_t n = 0; n < y.size(); ++n) y[n] *= w[n];
  auto r = autocorrelation(y, static_cast<std::size_t>(order));
  r[0] *= 1.0 + kWhiteNoiseCorrection;
  return levinson_durbin(r);
}

FilterResult inverse_filter(std::span<const double> x, const LpcModel& model, FilterState state) {
  const auto p = static_cast<std::size_t>(model.order);
  require(state.memory.size() == p, "inverse filter state size differs from model order");
  const auto& a = model.coeffs;
  auto& mem = state.memory;
  std::vector<double> e(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    double acc = x[n];
    for (std::size_t i = 1; i <= p; ++i) acc += a[i] * mem[i - 1];
    e[n] = acc;
    if (p > 0) {
      for (std::size_t i = p - 1; i > 0; --i) mem[i] = mem[i - 1];
      mem[0] = x[n];
    }
  }
  return {std::move(e), std::move(state)};
}

FilterResult synthesis_filter(std::span<const double> e, const LpcModel& model, FilterState state) {
  const auto p = static_cast<std::size_t>(model.order);
  require(state.memory.size() == p, "synthesis filter state size differs from model order");
  if (!is_stable(model.coeffs)) throw StabilityError("synthesis filter model is unstable");
  const auto& a = model.coeffs;
  auto& mem = state.memory;
  std::vector<double> x(e.size());
  for (std::size_t n = 0; n < e.size(); ++n) {
    double acc = e[n];
    for (std::size_t i = 1; i <= p; ++i) acc -= a[i] * mem[i - 1];
    x[n] = acc;
    if (p > 0) {
      for (std::size_t i = p - 1; i > 0; --i) mem[i] = mem[i - 1];
      mem[0] = acc;
    }
  }
  return {std::move(x), std::move(state)};
}

std::vector<double> lpc_power_db(const LpcModel& model, double gain, int sample_rate,
                                 std::size_t n_points) {
  // Point k sits at 125 k Hz: bin k of the 128-point transform at 16 kHz,
  // bin 2k at 8 kHz.
  require(model.coeffs.size() <= static_cast<std::size_t>(kEnvelopeTransformSize),
          "model order exceeds transform size");
  std::vector<double> out(n_points);
  const double g2 = gain * gain;
  for (std::size_t k = 0; k < n_points; ++k) {
    const double w = 2.0 * std::numbers::pi * kEnvelopeSpacingHz * static_cast<double>(k) /
                     static_cast<double>(sample_rate);
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < model.coeffs.size(); ++i) {
      re += model.coeffs[i] * std::cos(w * static_cast<double>(i));
      im -= model.coeffs[i] * std::sin(w * static_cast<double>(i));
    }
    out[k] = 10.0 * std::log10(g2 / (re * re + im * im));
  }
  return out;
}

EnvelopeSpectrum lpc_to_envelope(const LpcModel& model, double gain) {
  const auto pts = lpc_power_db(model, gain, 16000, kEnvelopePoints);
  EnvelopeSpectrum env;
  std::copy(pts.begin(), pts.end(), env.points.begin());
  return env;
}

LpcModel envelope_to_lpc(const EnvelopeSpectrum& env, int order) {
  require(order >= 1 && order <= 32, "envelope_to_lpc order must be in [1, 32]");
  for (double v : env.points) require(std::isfinite(v), "envelope holds a non-finite point");
  constexpr int half = kEnvelopeTransformSize / 2;
  std::array<double, half + 1> power{};
  for (int k = 0; k < kEnvelopePoints; ++k) power[k] = std::pow(10.0, env.points[k] / 10.0);
  // The grid stops one bin short of Nyquist; hold the last value there.
  power[half] = power[half - 1];
  std::vector<double> r(static_cast<std::size_t>(order) + 1);
  for (int m = 0; m <= order; ++m) {
    double acc = power[0] + ((m % 2 == 0) ? power[half] : -power[half]);
    for (int k = 1; k < half; ++k)
      acc += 2.0 * power[k] *
             std::cos(2.0 * std::numbers::pi * k * m / static_cast<double>(kEnvelopeTransformSize));
    r[static_cast<std::size_t>(m)] = acc / kEnvelopeTransformSize;
  }
  return levinson_durbin(r);
}

std::vector<double> pre_emphasis(std::span<const double> x, double mu) {
  require(mu >= 0.0 && mu < 1.0, "pre-emphasis must lie in [0, 1)");
  std::vector<double> y(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) y[n] = n == 0 ? x[0] : x[n] - mu * x[n - 1];
  return y;
}

void PreEmphasisFilter::process(std::span<double> x) {
  for (auto& v : x) {
    const double in = v;
    v = in - mu * last;
    last = in;
  }
}

void DeEmphasisFilter::process(std::span<double> x) {
  for (auto& v : x) {
    v += mu * last;
    last = v;
  }
}

}  // namespace bwx
