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

// Seeded formant synthesizer producing speech-like 16 kHz test material:
// glottal pulse trains through time-varying cascade resonators, noise
// fricatives, nasals and pauses.

#pragma once

#include <cstdint>
#include <vector>

#include "bwx/audio.hpp"

namespace bwx {

struct SpeakerProfile {
  double f0_hz = 120.0;          // mean fundamental
  double f0_spread = 0.15;       // relative intonation excursion
  double formant_scale = 1.0;    // vocal tract length factor
  double tilt = 0.9;             // glottal source low-pass pole
  double breathiness = 0.02;     // aspiration noise relative to the pulse
  double jitter = 0.005;         // relative period perturbation
};

SpeakerProfile random_speaker(std::uint64_t seed, bool female);

AudioBuffer synthesize_utterance(const SpeakerProfile& speaker, double seconds, std::uint64_t seed);

// `count` utterances of about `seconds` each, alternating male and female
// speakers, all derived from `seed`.
std::vector<AudioBuffer> synthetic_corpus(std::size_t count, double seconds, std::uint64_t seed);

}  // namespace bwx
