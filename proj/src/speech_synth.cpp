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

#include "bwx/speech_synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "bwx/detail/random.hpp"
#include "bwx/error.hpp"

namespace bwx {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRate = kWidebandRate;
constexpr int kControlStep = 16;

struct Vowel {
  std::array<double, 3> f;
};

// Adult male averages; speakers scale them.
constexpr std::array<Vowel, 10> kVowels{{
    {{270, 2290, 3010}},
    {{390, 1990, 2550}},
    {{530, 1840, 2480}},
    {{660, 1720, 2410}},
    {{730, 1090, 2440}},
    {{570, 840, 2410}},
    {{440, 1020, 2240}},
    {{300, 870, 2240}},
    {{640, 1190, 2390}},
    {{490, 1350, 1690}},
}};

enum class Kind { Vowel, Nasal, Fricative, Silence };

struct Segment {
  Kind kind = Kind::Silence;
  std::size_t length = 0;
  std::array<double, 5> formants{};
  double fricative_hz = 0.0;
  double fricative_bw = 0.0;
  double level = 0.0;
};

// Two-pole resonator with unity gain at DC.
class Resonator {
 public:
  void set(double f, double bw) {
    const double r = std::exp(-kPi * bw / kRate);
    c_ = -r * r;
    b_ = 2.0 * r * std::cos(2.0 * kPi * f / kRate);
    a_ = 1.0 - b_ - c_;
  }
  double step(double x) {
    const double y = a_ * x + b_ * y1_ + c_ * y2_;
    y2_ = y1_;
    y1_ = y;
    return y;
  }

 private:
  double a_ = 1.0, b_ = 0.0, c_ = 0.0, y1_ = 0.0, y2_ = 0.0;
};

// Resonator normalized to unity gain at its centre frequency.
class BandResonator {
 public:
  void set(double f, double bw) {
    const double r = std::exp(-kPi * bw / kRate);
    c_ = -r * r;
    b_ = 2.0 * r * std::cos(2.0 * kPi * f / kRate);
    g_ = 1.0 - r;
  }
  double step(double x) {
    const double y = g_ * (x - x2_) + b_ * y1_ + c_ * y2_;
    x2_ = x1_;
    x1_ = x;
    y2_ = y1_;
    y1_ = y;
    return y;
  }

 private:
  double g_ = 0.0, b_ = 0.0, c_ = 0.0, x1_ = 0.0, x2_ = 0.0, y1_ = 0.0, y2_ = 0.0;
};

std::size_t ms(double v) { return static_cast<std::size_t>(v * kRate / 1000.0); }

std::vector<Segment> plan(const SpeakerProfile& sp, std::size_t total, detail::Rng& rng) {
  std::vector<Segment> segs;
  std::size_t used = 0;
  auto push = [&](Segment s) {
    used += s.length;
    segs.push_back(s);
  };
  push({Kind::Silence, ms(rng.uniform(80, 200))});
  while (used < total) {
    const int syllables = 1 + static_cast<int>(rng.below(4));
    for (int s = 0; s < syllables; ++s) {
      const double onset = rng.uniform();
      if (onset < 0.35) {
        Segment f{Kind::Fricative, ms(rng.uniform(60, 160))};
        const double type = rng.uniform();
        if (type < 0.45) {
          f.fricative_hz = rng.uniform(4500, 6500) * sp.formant_scale;
          f.fricative_bw = rng.uniform(1200, 2200);
        } else if (type < 0.75) {
          f.fricative_hz = rng.uniform(2600, 3600) * sp.formant_scale;
          f.fricative_bw = rng.uniform(800, 1500);
        } else {
          f.fricative_hz = rng.uniform(3000, 7000);
          f.fricative_bw = rng.uniform(3000, 5000);
        }
        f.level = rng.uniform(0.012, 0.05);
        push(f);
      } else if (onset < 0.55) {
        Segment n{Kind::Nasal, ms(rng.uniform(50, 110))};
        n.formants = {250.0 * sp.formant_scale, rng.uniform(900, 1300) * sp.formant_scale,
                      2200.0 * sp.formant_scale, 3400.0 * sp.formant_scale, 4400.0 * sp.formant_scale};
        n.level = rng.uniform(0.2, 0.4);
        push(n);
      }
      Segment v{Kind::Vowel, ms(rng.uniform(90, 260))};
      const auto& vw = kVowels[rng.below(kVowels.size())];
      for (int k = 0; k < 3; ++k) v.formants[k] = vw.f[k] * sp.formant_scale * rng.uniform(0.93, 1.07);
      v.formants[3] = rng.uniform(3300, 3700) * sp.formant_scale;
      v.formants[4] = rng.uniform(4300, 4900) * sp.formant_scale;
      v.level = rng.uniform(0.6, 1.0);
      push(v);
      if (rng.uniform() < 0.25) {
        Segment c{Kind::Fricative, ms(rng.uniform(40, 100))};
        c.fricative_hz = rng.uniform(3500, 6500) * sp.formant_scale;
        c.fricative_bw = rng.uniform(1500, 3000);
        c.level = rng.uniform(0.01, 0.035);
        push(c);
      }
    }
    push({Kind::Silence, ms(rng.uniform(40, 300))});
  }
  return segs;
}

}  // namespace

SpeakerProfile random_speaker(std::uint64_t seed, bool female) {
  detail::Rng rng(seed);
  SpeakerProfile sp;
  sp.f0_hz = female ? rng.uniform(165, 250) : rng.uniform(85, 150);
  sp.f0_spread = rng.uniform(0.08, 0.22);
  sp.formant_scale = female ? rng.uniform(1.12, 1.22) : rng.uniform(0.95, 1.05);
  sp.tilt = rng.uniform(0.80, 0.95);
  sp.breathiness = rng.uniform(0.01, female ? 0.08 : 0.04);
  sp.jitter = rng.uniform(0.002, 0.01);
  return sp;
}

AudioBuffer synthesize_utterance(const SpeakerProfile& sp, double seconds, std::uint64_t seed) {
  require(seconds > 0.0, "utterance length must be positive");
  detail::Rng rng(seed);
  const auto total = static_cast<std::size_t>(seconds * kRate);
  const auto segs = plan(sp, total, rng);

  std::vector<double> out;
  out.reserve(total + ms(1000));
  std::array<Resonator, 5> tract;
  std::array<double, 5> formants{500, 1500, 2500, 3500, 4500};
  const std::array<double, 5> bandwidths{80, 110, 160, 250, 320};
  BandResonator fric;
  double fric_hz = 5000, fric_bw = 2000;

  double voice_amp = 0.0, noise_amp = 0.0;
  double phase = 0.0;  // fraction of the current glottal period
  double period = kRate / sp.f0_hz;
  double open_quotient = 0.6;
  double tilt_state = 0.0, radiation_prev = 0.0;
  double contour = 0.0;  // slow random intonation
  const double duration_samples = static_cast<double>(total);
  std::size_t n = 0;

  for (const auto& seg : segs) {
    const bool voiced = seg.kind == Kind::Vowel || seg.kind == Kind::Nasal;
    const double voice_target = voiced ? seg.level : 0.0;
    const double noise_target = seg.kind == Kind::Fricative ? seg.level : 0.0;
    for (std::size_t i = 0; i < seg.length; ++i, ++n) {
      if (i % kControlStep == 0) {
        // Formants glide towards the segment targets with a ~25 ms time constant.
        const double a = 1.0 - std::exp(-kControlStep / (0.025 * kRate));
        if (voiced)
          for (int k = 0; k < 5; ++k) formants[k] += a * (seg.formants[k] - formants[k]);
        const double bw_scale = seg.kind == Kind::Nasal ? 1.6 : 1.0;
        for (int k = 0; k < 5; ++k) tract[k].set(formants[k], bandwidths[k] * bw_scale);
        if (seg.kind == Kind::Fricative) {
          fric_hz += 0.3 * (seg.fricative_hz - fric_hz);
          fric_bw += 0.3 * (seg.fricative_bw - fric_bw);
        }
        fric.set(fric_hz, fric_bw);
        contour += 0.02 * (rng.uniform(-1.0, 1.0) - 0.05 * contour);
        contour = std::clamp(contour, -1.0, 1.0);
      }
      const double ramp = 1.0 - std::exp(-1.0 / (0.008 * kRate));
      voice_amp += ramp * (voice_target - voice_amp);
      noise_amp += ramp * (noise_target - noise_amp);

      // Rosenberg glottal flow derivative shape over one period.
      phase += 1.0 / period;
      if (phase >= 1.0) {
        phase -= 1.0;
        const double declination = 1.0 - 0.15 * static_cast<double>(n) / duration_samples;
        const double f0 = sp.f0_hz * declination * (1.0 + sp.f0_spread * contour);
        period = kRate / f0 * (1.0 + sp.jitter * rng.normal());
        open_quotient = std::clamp(0.6 + 0.05 * rng.normal(), 0.45, 0.75);
      }
      double pulse = 0.0;
      const double tp = 0.66 * open_quotient, tn = open_quotient - tp;
      if (phase < tp) pulse = 0.5 * (1.0 - std::cos(kPi * phase / tp));
      else if (phase < open_quotient) pulse = std::cos(0.5 * kPi * (phase - tp) / tn);
      const double aspiration = sp.breathiness * rng.normal() * (phase < open_quotient ? 1.0 : 0.3);
      tilt_state = sp.tilt * tilt_state + (1.0 - sp.tilt) * (pulse + aspiration);
      double y = voice_amp * tilt_state * 4.0;
      for (auto& r : tract) y = r.step(y);
      const double noise = fric.step(rng.normal()) * noise_amp * 2.0;
      const double s = y + noise;
      // Lip radiation.
      out.push_back(s - radiation_prev);
      radiation_prev = s;
    }
  }
  out.resize(total, 0.0);

  double peak = 0.0, energy = 0.0;
  for (double v : out) {
    peak = std::max(peak, std::abs(v));
    energy += v * v;
  }
  if (peak > 0.0) {
    // Active level between -28 and -20 dBFS, peaks kept below -1 dBFS.
    const double rms = std::sqrt(energy / static_cast<double>(out.size()));
    double g = std::pow(10.0, rng.uniform(-28.0, -20.0) / 20.0) / rms;
    g = std::min(g, 0.89 / peak);
    for (double& v : out) v *= g;
    // Recording noise floor: pink noise 40-55 dB below the utterance level.
    const double floor_rms = rms * g * std::pow(10.0, -rng.uniform(40.0, 55.0) / 20.0);
    std::vector<double> noise(out.size());
    double b0 = 0.0, b1 = 0.0, b2 = 0.0, noise_energy = 0.0;
    for (double& v : noise) {
      const double w = rng.normal();
      b0 = 0.99765 * b0 + 0.0990460 * w;
      b1 = 0.96300 * b1 + 0.2965164 * w;
      b2 = 0.57000 * b2 + 1.0526913 * w;
      v = b0 + b1 + b2 + 0.1848 * w;
      noise_energy += v * v;
    }
    const double scale = floor_rms / std::sqrt(noise_energy / static_cast<double>(noise.size()));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += scale * noise[i];
  }
  return AudioBuffer(std::move(out), kWidebandRate);
}

std::vector<AudioBuffer> synthetic_corpus(std::size_t count, double seconds, std::uint64_t seed) {
  require(seconds > 0.0, "utterance length must be positive");
  std::vector<AudioBuffer> out(count);
  const auto c = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < c; ++i) {
    const auto u = static_cast<std::uint64_t>(i);
    const auto speaker = random_speaker(seed * 1000003u + 2 * u, i % 2 == 1);
    out[static_cast<std::size_t>(i)] = synthesize_utterance(speaker, seconds, seed * 1000003u + 2 * u + 1);
  }
  return out;
}

}  // namespace bwx
