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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "bwx/error.hpp"
#include "bwx/filter_design.hpp"
#include "bwx/highband.hpp"
#include "oracles.hpp"

namespace {

std::vector<double> noise(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::normal_distribution<double> g;
  std::vector<double> x(n);
  for (auto& v : x) v = scale * g(rng);
  return x;
}

double db_power(double p) { return 10.0 * std::log10(p); }

// Power at DFT bins 0..n/2.
std::vector<double> spectrum(std::span<const double> x) {
  std::vector<std::complex<double>> c(x.begin(), x.end());
  const auto f = oracle::dft(c);
  std::vector<double> p(x.size() / 2 + 1);
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = std::norm(f[k]);
  return p;
}

std::vector<double> harmonic_signal(std::size_t n, double f0, int count) {
  std::vector<double> x(n, 0.0);
  for (int k = 1; k <= count; ++k) {
    const auto s = oracle::sine(n, k * f0, 16000.0, 1.0 / k, 0.37 * k);
    for (std::size_t i = 0; i < n; ++i) x[i] += s[i];
  }
  return x;
}

bwx::LpcModel model_of(std::vector<double> a) {
  bwx::LpcModel m = bwx::LpcModel::identity(static_cast<int>(a.size()) - 1);
  m.coeffs = std::move(a);
  return m;
}

bwx::Codebook random_codebook(std::mt19937_64& rng, int bits) {
  return bwx::Codebook(40, bits, noise(rng, (std::size_t{1} << bits) * 40, 10.0));
}

}  // namespace

TEST_CASE("full-wave rectified sine has the aliased Fourier series") {
  // At 16 kHz the 400 Hz tone has 40 samples per period, so harmonics 2m*400
  // with m = 20j and m = 20j +- 1 fold onto DC and 800 Hz in phase.
  const auto x = oracle::sine(16000, 400.0, 16000.0);
  const auto y = bwx::extend_excitation(x);
  const double pi = std::numbers::pi;
  double dc = 2.0 / pi, h2 = 4.0 / (3.0 * pi);
  for (int j = 1; j < 20000; ++j) {
    const double m = 20.0 * j;
    dc -= 4.0 / (pi * (4.0 * m * m - 1.0));
    h2 += 4.0 / (pi * (4.0 * (m - 1) * (m - 1) - 1.0)) + 4.0 / (pi * (4.0 * (m + 1) * (m + 1) - 1.0));
  }
  CHECK(oracle::tone_amplitude(y, 0.0, 16000.0) == doctest::Approx(dc).epsilon(1e-7));
  CHECK(oracle::tone_amplitude(y, 800.0, 16000.0) == doctest::Approx(h2).epsilon(1e-7));
  CHECK(oracle::tone_amplitude(y, 400.0, 16000.0) <= 1e-9);
  // Folding costs about 1e-3 against the continuous series.
  CHECK(std::abs(dc - 2.0 / pi) < 2e-3);
  CHECK(std::abs(h2 - 4.0 / (3.0 * pi)) < 3e-3);
}

TEST_CASE("rectified sine matches the continuous series when sampling phases are averaged") {
  double dc = 0.0, h2 = 0.0;
  constexpr int phases = 16;
  for (int i = 0; i < phases; ++i) {
    const auto y = bwx::extend_excitation(oracle::sine(16000, 400.0, 16000.0, 1.0, 2.0 * std::numbers::pi * i / (40.0 * phases)));
    dc += oracle::tone_amplitude(y, 0.0, 16000.0) / phases;
    h2 += oracle::tone_amplitude(y, 800.0, 16000.0) / phases;
  }
  CHECK(std::abs(dc - 2.0 / std::numbers::pi) <= 1e-3);
  CHECK(std::abs(h2 - 4.0 / (3.0 * std::numbers::pi)) <= 1e-3);
}

TEST_CASE("rectification is the identity on non-negative input") {
  const std::vector<double> x{0.0, 0.5, 1.0, 2.0};
  CHECK(bwx::extend_excitation(x) == x);
}

TEST_CASE("rectification creates energy above 4 kHz and keeps harmonic structure") {
  const std::size_t n = 2048;
  const double f0 = 16000.0 / 64.0;  // whole periods in the window
  const auto x = harmonic_signal(n, f0, 12);  // up to 3 kHz
  const auto px = spectrum(x);
  const auto py = spectrum(bwx::extend_excitation(x));
  double hx = 0.0, hy = 0.0, total = 0.0;
  for (std::size_t k = 0; k < px.size(); ++k) {
    total += px[k];
    if (k >= n / 4) {
      hx += px[k];
      hy += py[k];
    }
  }
  // The input has nothing above 4 kHz beyond rounding noise.
  CHECK(db_power(hy / std::max(hx, 1e-30 * total)) >= 20.0);

  std::vector<double> sorted(py.begin(), py.end());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2), sorted.end());
  const double peak = *std::max_element(py.begin(), py.end());
  const double median = std::max(sorted[sorted.size() / 2], 1e-20 * peak);
  const double bin_hz = 16000.0 / static_cast<double>(n);
  int peaks = 0;
  for (std::size_t k = 1; k + 1 < py.size(); ++k) {
    if (py[k] > py[k - 1] && py[k] > py[k + 1] && db_power(py[k] / median) >= 20.0) {
      ++peaks;
      const double harmonic = std::round(static_cast<double>(k) * bin_hz / f0) * f0;
      CHECK(std::abs(static_cast<double>(k) * bin_hz - harmonic) <= bin_hz);
    }
  }
  CHECK(peaks > 10);
}

TEST_CASE("whitening leaves white noise alone and flattens tilt") {
  std::mt19937_64 rng(3);
  for (int seed = 0; seed < 20; ++seed) {
    const auto x = noise(rng, 256);
    const auto w = bwx::whiten(x, bwx::FilterState::zeros(16));
    CHECK_FALSE(w.passthrough);
    CHECK(std::abs(db_power(oracle::energy(w.output) / oracle::energy(x))) < 1.0);
  }

  const auto ar = oracle::all_pole(std::vector<double>{1.0, -0.9}, noise(rng, 2560));
  auto state = bwx::FilterState::zeros(16);
  std::vector<double> out;
  for (std::size_t f = 0; f < 10; ++f) {
    auto w = bwx::whiten(std::span<const double>(ar.data() + 256 * f, 256), state);
    state = w.state;
    if (f > 0) out.insert(out.end(), w.output.begin(), w.output.end());
  }
  const auto r_in = oracle::brute_autocorrelation(std::span<const double>(ar.data() + 256, 256 * 9), 1);
  const auto r_out = oracle::brute_autocorrelation(out, 1);
  CHECK(r_in[1] / r_in[0] > 0.8);
  CHECK(std::abs(r_out[1] / r_out[0]) < 0.1);

  const auto z = bwx::whiten(std::vector<double>(256, 0.0), bwx::FilterState::zeros(16));
  CHECK(z.passthrough);
  for (double v : z.output) CHECK(v == 0.0);
  CHECK_THROWS_AS(bwx::whiten(out, bwx::FilterState::zeros(10)), bwx::PreconditionError);
}

TEST_CASE("gain matching equalizes 0-3.4 kHz energy") {
  std::mt19937_64 rng(4);
  const auto ref = noise(rng, 256);
  const auto same = bwx::gain_match(ref, ref);
  CHECK(same.gain == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t n = 0; n < ref.size(); ++n) CHECK(std::abs(same.output[n] - ref[n]) < 1e-9);

  auto twice = ref;
  for (auto& v : twice) v *= 2.0;
  CHECK(std::abs(bwx::gain_match(twice, ref).gain - 0.5) < 1e-6);

  const auto zero = bwx::gain_match(std::vector<double>(256, 0.0), ref);
  CHECK(zero.gain == 0.0);
  for (double v : zero.output) CHECK(v == 0.0);

  const auto other = noise(rng, 256, 0.1);
  const auto m = bwx::gain_match(other, ref);
  const auto& lp = bwx::filters::gain_match_lowpass().taps;
  const double e_out = oracle::energy(bwx::apply_fir(m.output, lp));
  const double e_ref = oracle::energy(bwx::apply_fir(ref, lp));
  CHECK(std::abs(db_power(e_out / e_ref)) < 0.01);
}

TEST_CASE("envelope vector is level free") {
  for (double v : bwx::highband_vector(bwx::EnvelopeSpectrum::flat(0.0))) CHECK(v == 0.0);
  for (double v : bwx::highband_vector(bwx::EnvelopeSpectrum::flat(-37.0))) CHECK(v == 0.0);

  std::mt19937_64 rng(5);
  const auto cb = random_codebook(rng, 6);
  std::size_t nearest_zero = oracle::brute_nearest(cb.vectors, 40, std::vector<double>(40, 0.0));
  auto env = bwx::EnvelopeSpectrum::flat(3.0);
  CHECK(bwx::quantize(cb, bwx::highband_vector(env)) == nearest_zero);

  for (int trial = 0; trial < 20; ++trial) {
    const auto frame = oracle::all_pole(oracle::random_stable_predictor(rng, 8, 0.9), noise(rng, 256));
    auto louder = frame;
    for (auto& v : louder) v *= 4.0;  // +12 dB
    CHECK(bwx::encode_envelope(frame, cb).index == bwx::encode_envelope(louder, cb).index);
    const auto a = bwx::highband_vector(frame);
    const auto b = bwx::highband_vector(louder);
    for (int i = 0; i < 40; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("encoded envelope error equals the quantizer distortion") {
  std::mt19937_64 rng(6);
  const auto cb = random_codebook(rng, 5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto model = model_of(oracle::random_stable_predictor(rng, 16, 0.9));
    const auto v = bwx::highband_vector(bwx::lpc_to_envelope(model, 1.0));
    const auto nearest = bwx::nearest_codeword(cb, v);
    const auto word = bwx::decode_index(cb, nearest.index);
    double sq = 0.0;
    for (int i = 0; i < 40; ++i) sq += (word[i] - v[i]) * (word[i] - v[i]);
    CHECK(std::sqrt(sq / 40.0) == doctest::Approx(std::sqrt(nearest.distance / 40.0)).epsilon(1e-12));
  }
}

TEST_CASE("silent frames map to the floor envelope") {
  const auto env = bwx::wideband_envelope(std::vector<double>(256, 0.0));
  for (double v : env.points) CHECK(v == bwx::kSilentEnvelopeDb);
  const auto nb = bwx::narrowband_envelope(std::vector<double>(128, 0.0));
  for (double v : nb) CHECK(v == bwx::kSilentEnvelopeDb);
  CHECK_THROWS_AS(bwx::wideband_envelope(std::vector<double>(128, 0.0)), bwx::PreconditionError);
  CHECK_THROWS_AS(bwx::narrowband_envelope(std::vector<double>(256, 0.0)), bwx::PreconditionError);
}

TEST_CASE("narrowband and wideband envelopes agree on white noise") {
  // For white noise at 16 kHz and its 8 kHz decimation the two analyses see
  // the same spectral density below 4 kHz once the decimated copy carries
  // half the power, as a half-band filter would leave it.
  std::mt19937_64 rng(7);
  double diff = 0.0;
  int count = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto wb = noise(rng, 256);
    std::vector<double> nb(128);
    for (int i = 0; i < 128; ++i) nb[i] = wb[2 * i] / std::sqrt(2.0);
    const auto a = bwx::wideband_envelope(wb);
    const auto b = bwx::narrowband_envelope(nb);
    for (int k = 4; k < 20; ++k) {
      diff += b[k] - a.points[k];
      ++count;
    }
  }
  CHECK(std::abs(diff / count) < 1.5);
}

TEST_CASE("concatenation re-anchors the codeword on the local envelope") {
  std::array<double, bwx::kNarrowbandEnvelopePoints> local{};
  for (int k = 0; k < 24; ++k) local[k] = 10.0 - 0.5 * k;
  std::vector<double> word(40);
  for (int i = 0; i < 40; ++i) word[i] = -0.25 * i;
  const auto env = bwx::concatenate_envelope(local, word);
  const double anchor = (local[20] + local[21] + local[22] + local[23]) / 4.0;
  for (int k = 0; k < 24; ++k) CHECK(env.points[k] == local[k]);
  for (int i = 0; i < 40; ++i) CHECK(env.points[24 + i] == doctest::Approx(word[i] + anchor));
  CHECK_THROWS_AS(bwx::concatenate_envelope(local, std::vector<double>(39, 0.0)), bwx::PreconditionError);
}

TEST_CASE("decoded models are stable and indices are checked") {
  std::mt19937_64 rng(8);
  const auto cb = random_codebook(rng, 6);
  for (int trial = 0; trial < 64; ++trial) {
    const auto nb = oracle::all_pole(oracle::random_stable_predictor(rng, 6, 0.95), noise(rng, 128));
    const auto m = bwx::decode_envelope({static_cast<std::size_t>(trial)}, cb, nb);
    CHECK(m.order == 16);
    CHECK(bwx::is_stable(m.coeffs));
    CHECK_FALSE(m.truncated);
  }
  CHECK_THROWS_AS(bwx::decode_envelope({64}, cb, std::vector<double>(128, 0.1)), bwx::IndexError);
}

TEST_CASE("high band synthesis matches a direct cascade and stays above 3 kHz") {
  std::mt19937_64 rng(9);
  const auto a = oracle::random_stable_predictor(rng, 16, 0.8);
  std::vector<double> impulse(512, 0.0);
  impulse[0] = 1.0;
  bwx::HighbandSynthesisState state(0.7);
  std::vector<double> got;
  for (int f = 0; f < 2; ++f) {
    const auto y = bwx::synthesize_highband(std::span<const double>(impulse.data() + 256 * f, 256), model_of(a), state);
    got.insert(got.end(), y.begin(), y.end());
  }
  auto x = oracle::all_pole(a, impulse);
  for (std::size_t n = 1; n < x.size(); ++n) x[n] += 0.7 * x[n - 1];
  const auto& h = bwx::filters::highband_split().taps;
  for (std::size_t n = 0; n < x.size(); ++n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < h.size() && k <= n; ++k) acc += h[k] * x[n - k];
    CHECK(std::abs(got[n] - acc) < 1e-9);
  }

  bwx::HighbandSynthesisState flat_state(0.0);
  const auto white = noise(rng, 4096);
  const auto y = bwx::synthesize_highband(white, bwx::LpcModel::identity(16), flat_state);
  // Hann window keeps rectangular-window leakage out of the measurement.
  std::vector<double> seg(y.begin() + 2048, y.end());
  const auto w = bwx::hanning_window(seg.size());
  for (std::size_t n = 0; n < seg.size(); ++n) seg[n] *= w[n];
  const auto p = spectrum(seg);
  double low = 0.0, total = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    total += p[k];
    if (k * 16000.0 / 2048.0 < 3000.0) low += p[k];
  }
  CHECK(db_power(low / total) <= -50.0);

  bwx::HighbandSynthesisState zero_state;
  std::vector<double> unstable(17, 0.0);
  unstable[0] = 1.0;
  unstable[1] = -1.2;
  for (double v : bwx::synthesize_highband(std::vector<double>(256, 0.0), model_of(a), zero_state)) CHECK(v == 0.0);
  CHECK_THROWS_AS(bwx::synthesize_highband(white, model_of(unstable), zero_state), bwx::StabilityError);
  CHECK(bwx::highband_split_delay() == 63);
}
