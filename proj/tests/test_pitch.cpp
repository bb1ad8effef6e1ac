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

#include <cmath>
#include <random>

#include "bwx/error.hpp"
#include "bwx/pitch.hpp"
#include "oracles.hpp"

namespace {

double rho_oracle(const std::vector<double>& x, int t) {
  double c = 0.0, a = 0.0, b = 0.0;
  for (std::size_t n = static_cast<std::size_t>(t); n < x.size(); ++n) {
    c += x[n] * x[n - static_cast<std::size_t>(t)];
    a += x[n] * x[n];
    b += x[n - static_cast<std::size_t>(t)] * x[n - static_cast<std::size_t>(t)];
  }
  return c / std::sqrt(a * b);
}

}  // namespace

TEST_CASE("100 Hz sine gives an 80-sample period") {
  const auto x = oracle::sine(256, 100.0, 8000.0);
  const auto p = bwx::estimate_pitch(x);
  CHECK(std::abs(p.delay - 80.0) <= 0.5);
  CHECK(p.gain >= 0.99);
  CHECK(p.gain == doctest::Approx(std::min(1.0, rho_oracle(x, 80))).epsilon(1e-12));
  CHECK(p.f0_hz() == doctest::Approx(100.0));
}

TEST_CASE("normalized correlation matches the direct formula") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<double> x(256);
  for (auto& v : x) v = g(rng);
  for (int t : {20, 57, 160}) CHECK(bwx::normalized_correlation(x, t) == doctest::Approx(rho_oracle(x, t)));
}

TEST_CASE("white noise is unvoiced in at least 95 of 100 seeds") {
  int quiet = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<double> x(256);
    for (auto& v : x) v = g(rng);
    if (bwx::estimate_pitch(x).gain < 0.4) ++quiet;
  }
  CHECK(quiet >= 95);
}

TEST_CASE("silence returns the default period with zero gain") {
  const auto p = bwx::estimate_pitch(std::vector<double>(256, 0.0));
  CHECK(p.delay == 80.0);
  CHECK(p.gain == 0.0);
  CHECK_THROWS_AS(bwx::estimate_pitch(std::vector<double>(128, 0.0)), bwx::PreconditionError);
}

TEST_CASE("exactly periodic frames return their period, scale invariantly") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int t0 : {20, 23, 37, 50, 64, 80, 99, 128, 160}) {
    CAPTURE(t0);
    std::vector<double> period(static_cast<std::size_t>(t0));
    for (auto& v : period) v = g(rng);
    std::vector<double> x(256);
    for (std::size_t n = 0; n < x.size(); ++n) x[n] = period[n % period.size()];
    const auto p = bwx::estimate_pitch(x);
    CHECK(p.delay == t0);
    CHECK(p.gain >= 0.99);
    for (auto& v : x) v *= 37.5;
    const auto q = bwx::estimate_pitch(x);
    CHECK(q.delay == p.delay);
    CHECK(q.gain == doctest::Approx(p.gain));
  }
}

TEST_CASE("pitch doubling is corrected towards the true period") {
  // A pulse train with period 45 whose odd pulses are slightly weaker peaks
  // at 90 as well; the sub-multiple check must return 45.
  std::vector<double> x(256, 0.0);
  for (std::size_t n = 0, i = 0; n < x.size(); n += 45, ++i) x[n] = i % 2 == 0 ? 1.0 : 0.8;
  const auto p = bwx::estimate_pitch(x);
  CHECK(p.delay == 45.0);
}

TEST_CASE("gain stays in [0, 1] for pathological frames") {
  std::vector<double> alt(256);
  for (std::size_t n = 0; n < alt.size(); ++n) alt[n] = n % 2 == 0 ? 1.0 : -1.0;
  const auto p = bwx::estimate_pitch(alt);
  CHECK(p.gain >= 0.0);
  CHECK(p.gain <= 1.0);
  CHECK(p.delay >= bwx::kMinPitchLag);
  CHECK(p.delay <= bwx::kMaxPitchLag);
  std::vector<double> spike(256, 0.0);
  spike[255] = 1.0;
  const auto q = bwx::estimate_pitch(spike);
  CHECK(q.gain == 0.0);
}
