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

// Corpus plumbing for the two trainers: manifests, silence stripping, and
// collection of envelope vectors and harmonic-gain examples.

#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "bwx/audio.hpp"
#include "bwx/lowband.hpp"
#include "bwx/mfcc.hpp"
#include "bwx/mlp.hpp"
#include "bwx/pipeline.hpp"
#include "bwx/pitch.hpp"

namespace bwx {

inline constexpr double kSilenceDbfs = -60.0;

// One WAV path per line; blank lines and '#' comments are skipped. Relative
// paths resolve against the manifest's directory.
std::vector<std::filesystem::path> read_manifest(const std::filesystem::path& manifest);
std::vector<AudioBuffer> load_corpus(const std::filesystem::path& manifest);

// Mean-square level below -60 dBFS.
bool is_silent(std::span<const double> frame);

// Row-major 40-point vectors of every non-silent 256-sample frame.
std::vector<double> collect_highband_vectors(std::span<const AudioBuffer> signals,
                                             double preemph = kDefaultPreemphasis);

struct HarmonicExample {
  std::size_t frame_index = 0;
  PitchInfo pitch;
  FeatureVector features{};
  HarmonicAmplitudes amplitudes;
};

// Voiced, non-silent frames of one 16 kHz signal. Features come from the
// encoder's narrowband rendering exactly as the decoder computes them.
std::vector<HarmonicExample> collect_harmonic_examples(const AudioBuffer& wideband,
                                                       const EncoderOptions& encoder = {},
                                                       const MfccConfig& mfcc = {},
                                                       TargetSource source = TargetSource::WidebandLowBand);

std::vector<TrainingSample> to_training_samples(std::span<const HarmonicExample> examples);

// Rows `frame_index,f0_hz,gain1_db,gain2_db,pitch_gain` under a header line.
void write_targets_csv(std::span<const HarmonicExample> examples, const std::filesystem::path& path);

}  // namespace bwx
