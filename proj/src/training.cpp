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

#include "bwx/training.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "bwx/detail/binio.hpp"
#include "bwx/error.hpp"
#include "bwx/kernels.hpp"

namespace bwx {

std::vector<std::filesystem::path> read_manifest(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw IoError("cannot open " + manifest.string());
  const auto base = manifest.parent_path();
  std::vector<std::filesystem::path> out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    std::filesystem::path p = line.substr(first, last - first + 1);
    out.push_back(p.is_absolute() ? p : base / p);
  }
  if (out.empty()) throw InputError(manifest.string() + ": manifest lists no files");
  return out;
}

std::vector<AudioBuffer> load_corpus(const std::filesystem::path& manifest) {
  std::vector<AudioBuffer> out;
  for (const auto& p : read_manifest(manifest)) {
    auto buf = read_wav(p);
    if (buf.sample_rate() != kWidebandRate) throw InputError(p.string() + ": training audio must be 16 kHz");
    out.push_back(std::move(buf));
  }
  return out;
}

bool is_silent(std::span<const double> frame) {
  if (frame.empty()) return true;
  double e = 0.0;
  for (double v : frame) e += v * v;
  e /= static_cast<double>(frame.size());
  return !(e > 0.0) || 10.0 * std::log10(e) < kSilenceDbfs;
}

std::vector<double> collect_highband_vectors(std::span<const AudioBuffer> signals, double preemph) {
  std::vector<double> out;
  for (const auto& sig : signals) {
    const auto vectors = highband_vectors(sig.view(), preemph);
    for (std::size_t j = 0; j < frame_count(sig.size()); ++j) {
      if (is_silent(wideband_frame(sig.view(), j))) continue;
      const auto row = std::span<const double>(vectors).subspan(j * kHighbandPoints, kHighbandPoints);
      out.insert(out.end(), row.begin(), row.end());
    }
  }
  return out;
}

std::vector<HarmonicExample> collect_harmonic_examples(const AudioBuffer& wideband, const EncoderOptions& encoder,
                                                       const MfccConfig& mfcc, TargetSource source) {
  require(wideband.sample_rate() == kWidebandRate, "training audio must be 16 kHz");
  const auto nb = make_narrowband(wideband, encoder);
  const auto limited = lowband_limit(wideband.view());
  const MfccExtractor extractor(mfcc);
  std::vector<HarmonicExample> out;
  std::array<double, kPitchFrameLength> pitch_frame{};
  for (std::size_t j = 0; j < frame_count(wideband.size()); ++j) {
    const auto cur = narrowband_frame(nb.view(), j);
    std::copy(pitch_frame.begin() + kNarrowbandFrameSize, pitch_frame.end(), pitch_frame.begin());
    std::copy(cur.begin(), cur.end(), pitch_frame.begin() + kNarrowbandFrameSize);
    const auto wb = wideband_frame(wideband.view(), j);
    if (is_silent(wb)) continue;
    const auto pitch = estimate_pitch(pitch_frame);
    if (pitch.gain < kVoicingThreshold) continue;
    HarmonicExample ex;
    ex.frame_index = j;
    ex.pitch = pitch;
    ex.features = assemble_features(extractor.compute(cur), pitch);
    if (source == TargetSource::WidebandLowBand) {
      ex.amplitudes = fit_lowband_frame(wideband_frame(limited, j), pitch.delay);
    } else {
      const auto t = extract_targets(wb, cur, pitch, source);
      if (!t) continue;
      ex.amplitudes = *t;
    }
    out.push_back(ex);
  }
  return out;
}

std::vector<TrainingSample> to_training_samples(std::span<const HarmonicExample> examples) {
  std::vector<TrainingSample> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) out.push_back({ex.features, ex.amplitudes.gains_db()});
  return out;
}

void write_targets_csv(std::span<const HarmonicExample> examples, const std::filesystem::path& path) {
  std::ostringstream out;
  out.precision(10);
  out << "frame_index,f0_hz,gain1_db,gain2_db,pitch_gain\n";
  for (const auto& ex : examples) {
    const auto g = ex.amplitudes.gains_db();
    out << ex.frame_index << ',' << ex.pitch.f0_hz() << ',' << g[0] << ',' << g[1] << ',' << ex.pitch.gain << '\n';
  }
  detail::write_file_bytes(path, out.str());
}

}  // namespace bwx
