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

// Command-line front end: resampling, codec, training, evaluation and
// inspection.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bwx/audio.hpp"
#include "bwx/detail/binio.hpp"
#include "bwx/error.hpp"
#include "bwx/eval.hpp"
#include "bwx/kernels.hpp"
#include "bwx/mlp.hpp"
#include "bwx/pipeline.hpp"
#include "bwx/sideinfo.hpp"
#include "bwx/training.hpp"
#include "bwx/vq.hpp"

namespace {

using nlohmann::json;

struct Options {
  std::string in, out, out_nb, out_si, si, codebook, model, manifest, train_manifest, irs_fir, source = "wideband";
  int bits = 8;
  std::uint64_t seed = 1;
  int epochs = 200;
  double learning_rate = bwx::TrainConfig{}.learning_rate;
  bool json = false;
  double preemph = bwx::kDefaultPreemphasis;
  double time = 0.0;
  double offset_db = 0.0;
  bool no_telephone_band = false;
};

void print(const Options& o, const json& j, const std::string& text) {
  if (o.json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

std::vector<bwx::TrainingSample> corpus_samples(const std::vector<bwx::AudioBuffer>& corpus,
                                                const bwx::EncoderOptions& enc, const bwx::MfccConfig& mfcc) {
  std::vector<bwx::TrainingSample> out;
  for (const auto& sig : corpus) {
    const auto s = bwx::to_training_samples(bwx::collect_harmonic_examples(sig, enc, mfcc));
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

bwx::EncoderOptions encoder_options(const Options& o) {
  bwx::EncoderOptions e;
  e.preemph = o.preemph;
  e.telephone_band = !o.no_telephone_band;
  if (!o.irs_fir.empty()) e.channel_filter = bwx::read_fir_taps(o.irs_fir);
  return e;
}

int cmd_resample(const Options& o) {
  const auto in = bwx::read_wav(o.in);
  const auto out = in.sample_rate() == bwx::kNarrowbandRate ? bwx::upsample_2x(in) : bwx::downsample_2x(in);
  bwx::write_wav(out, o.out);
  print(o, {{"in_rate", in.sample_rate()}, {"out_rate", out.sample_rate()}, {"samples", out.size()}},
        "wrote " + std::to_string(out.size()) + " samples at " + std::to_string(out.sample_rate()) + " Hz\n");
  return 0;
}

int cmd_encode(const Options& o) {
  const auto wb = bwx::read_wav(o.in);
  const auto cb = bwx::load_codebook(o.codebook);
  const auto enc = bwx::encode(wb, cb, encoder_options(o));
  bwx::write_wav(enc.narrowband, o.out_nb);
  bwx::write_sideinfo(enc.side, o.out_si);
  print(o,
        {{"frames", enc.side.frame_count()},
         {"narrowband_samples", enc.narrowband.size()},
         {"bit_rate", enc.side.bit_rate()}},
        "encoded " + std::to_string(enc.side.frame_count()) + " frames\n");
  return 0;
}

int cmd_decode(const Options& o) {
  const auto nb = bwx::read_wav(o.in);
  const auto side = bwx::read_sideinfo(o.si);
  const auto cb = bwx::load_codebook(o.codebook);
  const auto net = bwx::load_model(o.model);
  bwx::DecoderOptions d;
  d.preemph = o.preemph;
  if (!o.irs_fir.empty()) d.inverse_channel = bwx::read_fir_taps(o.irs_fir);
  const auto out = bwx::decode(nb, side, cb, net, d);
  bwx::write_wav(out, o.out);
  print(o, {{"samples", out.size()}, {"sample_rate", out.sample_rate()}},
        "decoded " + std::to_string(out.size()) + " samples\n");
  return 0;
}

int cmd_train_vq(const Options& o) {
  const auto corpus = bwx::load_corpus(o.manifest);
  const auto vectors = bwx::collect_highband_vectors(corpus, o.preemph);
  const auto result = bwx::lbg_train(vectors, bwx::kHighbandPoints, o.bits, o.seed);
  bwx::save_codebook(result.codebook, o.out);
  print(o,
        {{"vectors", vectors.size() / bwx::kHighbandPoints},
         {"bits", o.bits},
         {"distortion_db2", result.distortion},
         {"stage_distortion", result.stage_distortion},
         {"hash", result.codebook.content_hash()}},
        "trained " + std::to_string(result.codebook.size()) + " codewords on " +
            std::to_string(vectors.size() / bwx::kHighbandPoints) + " vectors, distortion " +
            std::to_string(result.distortion) + " dB^2\n");
  return 0;
}

int cmd_train_mlp(const Options& o) {
  const auto corpus = bwx::load_corpus(o.manifest);
  const bwx::MfccConfig mfcc;
  const auto samples = corpus_samples(corpus, encoder_options(o), mfcc);
  if (samples.empty()) throw bwx::InputError("manifest yields no voiced frames");
  bwx::TrainConfig cfg;
  cfg.epochs = o.epochs;
  cfg.learning_rate = o.learning_rate;
  cfg.seed = o.seed;
  const auto result = bwx::train(samples, cfg, mfcc);
  bwx::save_model(result.net, o.out);
  print(o, {{"samples", samples.size()}, {"epochs", o.epochs}, {"final_mse", result.final_mse}},
        "trained on " + std::to_string(samples.size()) + " voiced frames, final MSE " +
            std::to_string(result.final_mse) + " dB^2\n");
  return 0;
}

int cmd_extract_targets(const Options& o) {
  const auto wb = bwx::read_wav(o.in);
  bwx::TargetSource source;
  if (o.source == "wideband")
    source = bwx::TargetSource::WidebandLowBand;
  else if (o.source == "rectified")
    source = bwx::TargetSource::RectifiedNarrowband;
  else
    throw bwx::InputError("--source must be 'wideband' or 'rectified'");
  const auto examples = bwx::collect_harmonic_examples(wb, encoder_options(o), {}, source);
  bwx::write_targets_csv(examples, o.out);
  print(o, {{"frames", examples.size()}}, "wrote " + std::to_string(examples.size()) + " target rows\n");
  return 0;
}

int cmd_eval_sd(const Options& o) {
  const auto corpus = bwx::load_corpus(o.manifest);
  const auto cb = bwx::load_codebook(o.codebook);
  const auto r = bwx::evaluate_corpus_sd(corpus, cb, encoder_options(o));
  std::ostringstream text;
  text << "mean SD " << r.mean << " dB, median " << r.median << " dB over " << r.frame_count << " frames ("
       << r.low_hz << "-" << r.high_hz << " Hz)\n";
  print(o,
        {{"mean_db", r.mean},
         {"median_db", r.median},
         {"frames", r.frame_count},
         {"low_hz", r.low_hz},
         {"high_hz", r.high_hz}},
        text.str());
  return 0;
}

int cmd_eval_harm(const Options& o) {
  const auto net = bwx::load_model(o.model);
  const auto test = corpus_samples(bwx::load_corpus(o.manifest), encoder_options(o), net.mfcc);
  if (test.empty()) throw bwx::InputError("manifest yields no voiced frames");
  std::optional<bwx::GainPair> baseline;
  if (!o.train_manifest.empty())
    baseline = bwx::mean_targets(corpus_samples(bwx::load_corpus(o.train_manifest), encoder_options(o), net.mfcc));
  const auto r = bwx::evaluate_harmonics(net, test, baseline.value_or(bwx::mean_targets(test)));
  std::ostringstream text;
  text << "mean harmonic error " << r.mean_error << " dB over " << r.frame_count << " voiced frames; constant "
       << (baseline ? "training-mean" : "test-mean") << " predictor " << r.baseline_error << " dB\n";
  print(o,
        {{"mean_error_db", r.mean_error},
         {"baseline_error_db", r.baseline_error},
         {"baseline", baseline ? "training-mean" : "test-mean"},
         {"frames", r.frame_count}},
        text.str());
  return 0;
}

int cmd_dump_spectrum(const Options& o) {
  const auto x = bwx::read_wav(o.in);
  const auto spec = bwx::dump_spectrum(x, o.time, 32.0, o.offset_db);
  std::ostringstream csv;
  csv.precision(10);
  csv << "hz,db\n";
  for (const auto& p : spec) csv << p.hz << ',' << p.db << '\n';
  if (o.out.empty()) {
    std::cout << csv.str();
  } else {
    bwx::detail::write_file_bytes(o.out, csv.str());
    print(o, {{"bins", spec.size()}}, "wrote " + std::to_string(spec.size()) + " bins\n");
  }
  return 0;
}

int cmd_inspect(const Options& o) {
  const auto bytes = bwx::detail::read_file_bytes(o.in);
  const std::string_view head(bytes.data(), std::min<std::size_t>(bytes.size(), 8));
  json j;
  std::ostringstream text;
  if (head.starts_with("BWXSI")) {
    const auto s = bwx::deserialize_sideinfo(bytes);
    j = {{"type", "sideinfo"},
         {"version", s.header.version},
         {"frames", s.frame_count()},
         {"duration_s", s.duration_seconds()},
         {"bit_rate", s.bit_rate()},
         {"codebook_hash", s.header.codebook_hash}};
    text << "side info v" << s.header.version << ": " << s.frame_count() << " frames, " << s.duration_seconds()
         << " s, " << s.bit_rate() << " bit/s, codebook hash " << std::hex << s.header.codebook_hash << std::dec
         << "\n";
  } else if (head.starts_with("BWXVQ")) {
    const auto cb = bwx::deserialize_codebook(bytes);
    j = {{"type", "codebook"}, {"dim", cb.dim}, {"bits", cb.bits}, {"hash", cb.content_hash()}};
    text << "codebook: " << cb.size() << " x " << cb.dim << " (" << cb.bits << " bits), hash " << std::hex
         << cb.content_hash() << std::dec << "\n";
  } else if (head.starts_with("BWXMLP")) {
    const auto net = bwx::deserialize_model(bytes);
    j = {{"type", "model"},
         {"layers", {18, 10, 10, 2}},
         {"parameters", net.parameter_count()},
         {"mfcc_bands", net.mfcc.num_bands},
         {"mfcc_c0", net.mfcc.include_c0}};
    text << "model: 18-10-10-2, " << net.parameter_count() << " parameters, " << net.mfcc.num_bands
         << " mel bands\n";
  } else if (head.starts_with("RIFF")) {
    const auto w = bwx::read_wav(o.in);
    j = {{"type", "wav"}, {"sample_rate", w.sample_rate()}, {"samples", w.size()}, {"duration_s", w.duration_seconds()}};
    text << "wav: " << w.size() << " samples at " << w.sample_rate() << " Hz (" << w.duration_seconds() << " s)\n";
  } else {
    throw bwx::FormatError(o.in + ": unrecognized file type");
  }
  print(o, j, text.str());
  return 0;
}

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Speech bandwidth extension codec toolkit"};
  app.require_subcommand(1);
  Options o;
  int (*handler)(const Options&) = nullptr;

  auto add = [&](const char* name, const char* help, int (*fn)(const Options&)) {
    auto* sub = app.add_subcommand(name, help);
    sub->callback([&handler, fn] { handler = fn; });
    sub->add_flag("--json", o.json, "Print a JSON summary");
    return sub;
  };
  auto preemph = [&](CLI::App* s) {
    s->add_option("--preemph", o.preemph, "Pre-emphasis coefficient")->check(CLI::Range(0.0, 0.999));
  };

  auto* s = add("resample", "Convert 8 kHz <-> 16 kHz", cmd_resample);
  s->add_option("--in", o.in)->required();
  s->add_option("--out", o.out)->required();

  s = add("encode", "Wideband WAV -> narrowband WAV + side info", cmd_encode);
  s->add_option("--in", o.in)->required();
  s->add_option("--codebook", o.codebook)->required();
  s->add_option("--out-nb", o.out_nb)->required();
  s->add_option("--out-si", o.out_si)->required();
  s->add_option("--irs-fir", o.irs_fir, "Channel shaping taps applied to the narrowband");
  s->add_flag("--no-telephone-band", o.no_telephone_band, "Skip the 300-3400 Hz band-pass");
  preemph(s);

  s = add("decode", "Narrowband WAV + side info -> wideband WAV", cmd_decode);
  s->add_option("--in", o.in)->required();
  s->add_option("--si", o.si)->required();
  s->add_option("--codebook", o.codebook)->required();
  s->add_option("--model", o.model)->required();
  s->add_option("--out", o.out)->required();
  s->add_option("--irs-fir", o.irs_fir, "Inverse channel taps applied before decoding");
  preemph(s);

  s = add("train-vq", "Train the envelope codebook", cmd_train_vq);
  s->add_option("--manifest", o.manifest)->required();
  s->add_option("--out", o.out)->required();
  s->add_option("--bits", o.bits)->check(CLI::Range(0, 8));
  s->add_option("--seed", o.seed);
  preemph(s);

  s = add("train-mlp", "Train the harmonic gain predictor", cmd_train_mlp);
  s->add_option("--manifest", o.manifest)->required();
  s->add_option("--out", o.out)->required();
  s->add_option("--epochs", o.epochs)->check(CLI::Range(1, 100000));
  s->add_option("--lr", o.learning_rate, "Learning rate")->check(CLI::PositiveNumber);
  s->add_option("--seed", o.seed);
  preemph(s);

  s = add("extract-targets", "Dump harmonic training targets as CSV", cmd_extract_targets);
  s->add_option("--in", o.in)->required();
  s->add_option("--out", o.out)->required();
  s->add_option("--source", o.source, "wideband | rectified");

  s = add("eval-sd", "Mean spectral distortion over 3-8 kHz", cmd_eval_sd);
  s->add_option("--manifest", o.manifest)->required();
  s->add_option("--codebook", o.codebook)->required();
  preemph(s);

  s = add("eval-harm", "Mean harmonic gain error", cmd_eval_harm);
  s->add_option("--manifest", o.manifest)->required();
  s->add_option("--model", o.model)->required();
  s->add_option("--train-manifest", o.train_manifest, "Training corpus for the constant baseline");

  s = add("dump-spectrum", "32 ms Hanning spectrum as CSV", cmd_dump_spectrum);
  s->add_option("--in", o.in)->required();
  s->add_option("--out", o.out);
  s->add_option("--time", o.time, "Window start in seconds");
  s->add_option("--offset-db", o.offset_db);

  s = add("inspect", "Describe a WAV, codebook, model or side-info file", cmd_inspect);
  s->add_option("file,--in", o.in)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    return handler(o);
  } catch (const bwx::Error& e) {
    std::cerr << "error: " << e.kind() << ": " << one_line(e.what()) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << one_line(e.what()) << "\n";
    return 1;
  }
}
