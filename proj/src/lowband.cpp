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

#include "bwx/lowband.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bwx/dsp.hpp"
#include "bwx/error.hpp"
#include "bwx/filter_design.hpp"

namespace bwx {

namespace {

constexpr int kN = kHarmonicColumns;
using Mat5 = std::array<std::array<double, kN>, kN>;
using Vec5 = std::array<double, kN>;

constexpr double kMaxCondition = 1e12;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
Vec5 symmetric_eigenvalues(Mat5 m) {
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < kN; ++i)
      for (int j = i + 1; j < kN; ++j) off += m[i][j] * m[i][j];
    if (off < 1e-300) break;
    for (int p = 0; p < kN; ++p) {
      for (int q = p + 1; q < kN; ++q) {
        if (m[p][q] == 0.0) continue;
        const double theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int k = 0; k < kN; ++k) {
          const double mkp = m[k][p], mkq = m[k][q];
          m[k][p] = c * mkp - s * mkq;
          m[k][q] = s * mkp + c * mkq;
        }
        for (int k = 0; k < kN; ++k) {
          const double mpk = m[p][k], mqk = m[q][k];
          m[p][k] = c * mpk - s * mqk;
          m[q][k] = s * mpk + c * mqk;
        }
      }
    }
  }
  Vec5 ev;
  for (int i = 0; i < kN; ++i) ev[i] = m[i][i];
  return ev;
}

// Lower Cholesky factor; the caller has already rejected ill-conditioned G.
Mat5 cholesky(const Mat5& g) {
  Mat5 l{};
  for (int i = 0; i < kN; ++i) {
    for (int j = 0; j <= i; ++j) {
      double acc = g[i][j];
      for (int k = 0; k < j; ++k) acc -= l[i][k] * l[j][k];
      if (i == j) {
        if (!(acc > 0.0)) throw DegenerateError("harmonic basis Gram matrix is not positive definite");
        l[i][i] = std::sqrt(acc);
      } else {
        l[i][j] = acc / l[j][j];
      }
    }
  }
  return l;
}

Vec5 cholesky_solve(const Mat5& l, Vec5 b) {
  for (int i = 0; i < kN; ++i) {
    for (int k = 0; k < i; ++k) b[i] -= l[i][k] * b[k];
    b[i] /= l[i][i];
  }
  for (int i = kN - 1; i >= 0; --i) {
    for (int k = i + 1; k < kN; ++k) b[i] -= l[k][i] * b[k];
    b[i] /= l[i][i];
  }
  return b;
}

Vec5 project(const HarmonicBasis& basis, std::span<const double> y) {
  Vec5 b{};
  for (int j = 0; j < kN; ++j) {
    const auto col = basis.column(j);
    double acc = 0.0;
    for (int n = 0; n < kHarmonicWindow; ++n) acc += col[n] * y[n];
    b[j] = acc;
  }
  return b;
}

}  // namespace

double HarmonicAmplitudes::amp1() const { return std::hypot(a[1], a[2]); }
double HarmonicAmplitudes::amp2() const { return std::hypot(a[3], a[4]); }

GainPair HarmonicAmplitudes::gains_db() const {
  return {20.0 * std::log10(amp1() + 1e-10), 20.0 * std::log10(amp2() + 1e-10)};
}

HarmonicBasis build_basis(double period) {
  if (!(period >= 4.0 && period <= 2.0 * kHarmonicWindow))
    throw PreconditionError("harmonic basis period must lie in [4, 256] samples");
  HarmonicBasis basis;
  basis.period = period;
  basis.columns.resize(static_cast<std::size_t>(kN) * kHarmonicWindow);
  const auto w = hanning_window(kHarmonicWindow);
  for (int n = 0; n < kHarmonicWindow; ++n) {
    const double ph = kTwoPi * n / period;
    const double vals[kN] = {1.0, std::sin(ph), std::cos(ph), std::sin(2.0 * ph), std::cos(2.0 * ph)};
    for (int j = 0; j < kN; ++j) basis.columns[static_cast<std::size_t>(j) * kHarmonicWindow + n] = w[n] * vals[j];
  }
  return basis;
}

HarmonicAmplitudes ls_fit(const HarmonicBasis& basis, std::span<const double> y) {
  if (y.size() != static_cast<std::size_t>(kHarmonicWindow))
    throw PreconditionError("least-squares fit needs 128 samples");
  Mat5 g{};
  for (int i = 0; i < kN; ++i)
    for (int j = 0; j <= i; ++j) {
      const auto ci = basis.column(i), cj = basis.column(j);
      double acc = 0.0;
      for (int n = 0; n < kHarmonicWindow; ++n) acc += ci[n] * cj[n];
      g[i][j] = g[j][i] = acc;
    }
  const auto ev = symmetric_eigenvalues(g);
  const double lo = *std::min_element(ev.begin(), ev.end());
  const double hi = *std::max_element(ev.begin(), ev.end());
  if (!(lo > 0.0) || hi / lo > kMaxCondition)
    throw DegenerateError("harmonic basis is numerically singular");

  const auto l = cholesky(g);
  Vec5 a = cholesky_solve(l, project(basis, y));
  // One refinement pass against the residual in signal space.
  std::array<double, kHarmonicWindow> resid{};
  for (int n = 0; n < kHarmonicWindow; ++n) {
    double fit = 0.0;
    for (int j = 0; j < kN; ++j) fit += basis.at(n, j) * a[j];
    resid[n] = y[n] - fit;
  }
  const Vec5 delta = cholesky_solve(l, project(basis, resid));
  HarmonicAmplitudes out;
  for (int j = 0; j < kN; ++j) out.a[j] = a[j] + delta[j];
  return out;
}

std::vector<double> lowband_limit(std::span<const double> wideband) {
  const auto& h = filters::lowband_target_lowpass().taps;
  const std::size_t delay = (h.size() - 1) / 2;
  std::vector<double> out(wideband.size(), 0.0);
  for (std::size_t n = 0; n < wideband.size(); ++n) {
    double acc = 0.0;
    // out[n] = sum_k h[k] x[n + delay - k] with zeros outside the signal.
    const std::size_t kmin = n + delay >= wideband.size() ? n + delay - (wideband.size() - 1) : 0;
    const std::size_t kmax = std::min(h.size() - 1, n + delay);
    for (std::size_t k = kmin; k <= kmax; ++k) acc += h[k] * wideband[n + delay - k];
    out[n] = acc;
  }
  return out;
}

HarmonicAmplitudes fit_lowband_frame(std::span<const double> limited_frame, double period) {
  require(limited_frame.size() == 2 * static_cast<std::size_t>(kHarmonicWindow),
          "low band fit needs a 256-sample frame");
  const auto w = hanning_window(kHarmonicWindow);
  std::array<double, kHarmonicWindow> y{};
  for (int n = 0; n < kHarmonicWindow; ++n) y[n] = w[n] * limited_frame[2 * static_cast<std::size_t>(n)];
  return ls_fit(build_basis(period), y);
}

std::optional<HarmonicAmplitudes> extract_targets(std::span<const double> wideband_frame,
                                                  std::span<const double> narrowband_frame,
                                                  const PitchInfo& pitch, TargetSource source) {
  if (pitch.gain < kVoicingThreshold) return std::nullopt;
  if (source == TargetSource::RectifiedNarrowband) {
    require(narrowband_frame.size() == static_cast<std::size_t>(kHarmonicWindow),
            "rectified target path needs a 128-sample narrowband frame");
    const auto w = hanning_window(kHarmonicWindow);
    std::array<double, kHarmonicWindow> y{};
    for (int n = 0; n < kHarmonicWindow; ++n) y[n] = w[n] * std::abs(narrowband_frame[n]);
    return ls_fit(build_basis(pitch.delay), y);
  }
  require(wideband_frame.size() == 2 * static_cast<std::size_t>(kHarmonicWindow),
          "target extraction needs a 256-sample wideband frame");
  return fit_lowband_frame(lowband_limit(wideband_frame), pitch.delay);
}

LowbandFrame synthesize_lowband(double f0_hz, const GainPair& gains_db, OscillatorState state,
                                std::size_t length, double voicing_gain) {
  require(f0_hz > 0.0, "oscillator frequency must be positive");
  std::array<double, 2> target{};
  for (int k = 0; k < 2; ++k) {
    const double fk = (k + 1) * f0_hz;
    const bool in_band = fk >= kLowbandMinHz && fk <= kLowbandMaxHz;
    target[k] = (in_band && voicing_gain >= kVoicingThreshold) ? std::pow(10.0, gains_db[k] / 20.0) : 0.0;
    if (!std::isfinite(target[k])) target[k] = 0.0;
  }
  const double step1 = kTwoPi * f0_hz / 16000.0;
  const double step2 = 2.0 * step1;

  LowbandFrame out;
  out.samples.resize(length);
  for (std::size_t n = 0; n < length; ++n) {
    double g1 = target[0], g2 = target[1];
    if (n < static_cast<std::size_t>(kCrossfadeSamples)) {
      const double t = static_cast<double>(n) / kCrossfadeSamples;
      g1 = state.gain1 + (target[0] - state.gain1) * t;
      g2 = state.gain2 + (target[1] - state.gain2) * t;
    }
    out.samples[n] = g1 * std::sin(state.phase1) + g2 * std::sin(state.phase2);
    state.phase1 += step1;
    if (state.phase1 >= kTwoPi) state.phase1 -= kTwoPi;
    state.phase2 += step2;
    if (state.phase2 >= kTwoPi) state.phase2 -= kTwoPi;
  }
  if (length > 0) {
    // A frame shorter than the fade ends part-way along the ramp.
    const double t = std::min(1.0, static_cast<double>(length) / kCrossfadeSamples);
    state.gain1 = length >= static_cast<std::size_t>(kCrossfadeSamples) ? target[0]
                                                                       : state.gain1 + (target[0] - state.gain1) * t;
    state.gain2 = length >= static_cast<std::size_t>(kCrossfadeSamples) ? target[1]
                                                                       : state.gain2 + (target[1] - state.gain2) * t;
  }
  out.state = state;
  return out;
}

}  // namespace bwx
