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

#include "bwx/audio.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "bwx/detail/binio.hpp"
#include "bwx/error.hpp"
#include "bwx/filter_design.hpp"

namespace bwx {

namespace {

bool valid_rate(int rate) { return rate == kNarrowbandRate || rate == kWidebandRate; }

std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put32(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put16(std::string& s, std::uint16_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>(v >> 8));
}

}  // namespace

AudioBuffer::AudioBuffer(std::vector<double> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (!valid_rate(sample_rate_))
    throw PreconditionError("sample rate " + std::to_string(sample_rate_) +
                            " Hz is not 8000 or 16000");
  for (double v : samples_)
    if (!std::isfinite(v)) throw PreconditionError("audio buffer holds a non-finite sample");
}

AudioBuffer AudioBuffer::zeros(std::size_t n, int sample_rate) {
  return AudioBuffer(std::vector<double>(n, 0.0), sample_rate);
}

FirFilter::FirFilter(std::vector<double> t, std::string desc)
    : taps(std::move(t)), description(std::move(desc)) {
  require(!taps.empty(), "FIR filter needs at least one tap");
  for (double v : taps) require(std::isfinite(v), "FIR filter holds a non-finite tap");
}

AudioBuffer read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12) throw IoError(path.string() + ": truncated RIFF header");
  if (std::memcmp(bytes.data(), "RIFF", 4) != 0 || std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw FormatError(path.string() + ": not a RIFF/WAVE file");

  bool have_fmt = false;
  int rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* hdr = bytes.data() + pos;
    const std::uint32_t size = le32(hdr + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (size < 16 || body + 16 > bytes.size()) throw IoError(path.string() + ": truncated fmt chunk");
      const unsigned char* f = bytes.data() + body;
      const std::uint16_t format = le16(f);
      const std::uint16_t channels = le16(f + 2);
      rate = static_cast<int>(le32(f + 4));
      const std::uint16_t bits = le16(f + 14);
      if (format != 1) throw FormatError(path.string() + ": only PCM is supported");
      if (channels != 1) throw FormatError(path.string() + ": only mono is supported");
      if (bits != 16) throw FormatError(path.string() + ": only 16-bit samples are supported");
      if (!valid_rate(rate))
        throw FormatError(path.string() + ": unsupported sample rate " + std::to_string(rate));
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      if (!have_fmt) throw FormatError(path.string() + ": data chunk before fmt chunk");
      if (body + size > bytes.size() || size % 2 != 0)
        throw IoError(path.string() + ": truncated data chunk");
      std::vector<double> samples(size / 2);
      for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto v = static_cast<std::int16_t>(le16(bytes.data() + body + 2 * i));
        samples[i] = static_cast<double>(v) / 32768.0;
      }
      return AudioBuffer(std::move(samples), rate);
    }
    pos = body + size + (size & 1u);
  }
  throw IoError(path.string() + ": no data chunk");
}

void write_wav(const AudioBuffer& buf, const std::filesystem::path& path) {
  const auto n = static_cast<std::uint32_t>(buf.size());
  std::string out;
  out.reserve(44 + 2 * n);
  out += "RIFF";
  put32(out, 36 + 2 * n);
  out += "WAVEfmt ";
  put32(out, 16);
  put16(out, 1);
  put16(out, 1);
  put32(out, static_cast<std::uint32_t>(buf.sample_rate()));
  put32(out, static_cast<std::uint32_t>(buf.sample_rate()) * 2);
  put16(out, 2);
  put16(out, 16);
  out += "data";
  put32(out, 2 * n);
  for (double v : buf.samples()) {
    const double clamped = std::clamp(v, -1.0, 1.0 - 1.0 / 32768.0);
    const auto q = static_cast<std::int16_t>(std::lround(clamped * 32768.0));
    put16(out, static_cast<std::uint16_t>(q));
  }
  detail::write_file_bytes(path, out);
}

FirFilter read_fir_taps(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<double> taps;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    double v;
    if (!(ss >> v)) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw FormatError(path.string() + ":" + std::to_string(lineno) + ": not a number");
      continue;
    }
    std::string rest;
    if (ss >> rest) throw FormatError(path.string() + ":" + std::to_string(lineno) + ": trailing text");
    taps.push_back(v);
  }
  if (taps.empty()) throw FormatError(path.string() + ": no taps");
  return FirFilter(std::move(taps), path.filename().string());
}

void write_fir_taps(const FirFilter& filt, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "# " << filt.description << "\n";
  out.precision(17);
  for (double t : filt.taps) out << t << "\n";
  detail::write_file_bytes(path, out.str());
}

std::vector<double> apply_fir(std::span<const double> x, std::span<const double> taps) {
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t n = 0; n < x.size(); ++n) {
    const std::size_t kmax = std::min(taps.size() - 1, n);
    double acc = 0.0;
    for (std::size_t k = 0; k <= kmax; ++k) acc += taps[k] * x[n - k];
    y[n] = acc;
  }
  return y;
}

AudioBuffer apply_fir(const AudioBuffer& buf, const FirFilter& filt) {
  return AudioBuffer(apply_fir(buf.view(), filt.taps), buf.sample_rate());
}

const FirFilter& resampler_filter() {
  static const FirFilter f(design_lowpass(127, 3750.0, kWidebandRate, 8.0),
                           "2x resampler anti-alias 3750 Hz");
  return f;
}

int resampler_delay() { return static_cast<int>(resampler_filter().taps.size() - 1) / 2; }

AudioBuffer upsample_2x(const AudioBuffer& buf) {
  if (buf.sample_rate() != kNarrowbandRate)
    throw PreconditionError("upsample_2x expects 8000 Hz input");
  StreamingUpsampler up;
  return AudioBuffer(up.process(buf.view()), kWidebandRate);
}

AudioBuffer downsample_2x(const AudioBuffer& buf) {
  if (buf.sample_rate() != kWidebandRate)
    throw PreconditionError("downsample_2x expects 16000 Hz input");
  const auto& h = resampler_filter().taps;
  const auto& x = buf.samples();
  std::vector<double> y(x.size() / 2);
  for (std::size_t i = 0; i < y.size(); ++i) {
    const std::size_t n = 2 * i;
    const std::size_t kmax = std::min(h.size() - 1, n);
    double acc = 0.0;
    for (std::size_t k = 0; k <= kmax; ++k) acc += h[k] * x[n - k];
    y[i] = acc;
  }
  return AudioBuffer(std::move(y), kNarrowbandRate);
}

StreamingFir::StreamingFir(std::vector<double> taps) : taps_(std::move(taps)) {
  require(!taps_.empty(), "streaming FIR needs taps");
  history_.assign(taps_.size() - 1, 0.0);
}

void StreamingFir::process(std::span<const double> in, std::span<double> out) {
  require(out.size() == in.size(), "streaming FIR output size mismatch");
  const std::size_t h = history_.size();
  // Work buffer = history followed by the new block.
  std::vector<double> work(h + in.size());
  std::copy(history_.begin(), history_.end(), work.begin());
  std::copy(in.begin(), in.end(), work.begin() + static_cast<std::ptrdiff_t>(h));
  for (std::size_t n = 0; n < in.size(); ++n) {
    double acc = 0.0;
    const std::size_t base = n + h;
    for (std::size_t k = 0; k < taps_.size(); ++k) acc += taps_[k] * work[base - k];
    out[n] = acc;
  }
  std::copy(work.end() - static_cast<std::ptrdiff_t>(h), work.end(), history_.begin());
}

std::vector<double> StreamingFir::process(std::span<const double> in) {
  std::vector<double> out(in.size());
  process(in, out);
  return out;
}

void StreamingFir::reset() { std::fill(history_.begin(), history_.end(), 0.0); }

StreamingUpsampler::StreamingUpsampler() {
  const auto& h = resampler_filter().taps;
  for (std::size_t k = 0; k < h.size(); ++k) (k % 2 == 0 ? even_ : odd_).push_back(2.0 * h[k]);
  history_.assign(even_.size() - 1, 0.0);
}

std::vector<double> StreamingUpsampler::process(std::span<const double> in) {
  const std::size_t h = history_.size();
  std::vector<double> work(h + in.size());
  std::copy(history_.begin(), history_.end(), work.begin());
  std::copy(in.begin(), in.end(), work.begin() + static_cast<std::ptrdiff_t>(h));
  std::vector<double> out(2 * in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    const std::size_t base = i + h;
    double e = 0.0, o = 0.0;
    for (std::size_t j = 0; j < even_.size(); ++j) e += even_[j] * work[base - j];
    for (std::size_t j = 0; j < odd_.size(); ++j) o += odd_[j] * work[base - j];
    out[2 * i] = e;
    out[2 * i + 1] = o;
  }
  std::copy(work.end() - static_cast<std::ptrdiff_t>(h), work.end(), history_.begin());
  return out;
}

void StreamingUpsampler::reset() { std::fill(history_.begin(), history_.end(), 0.0); }

void DelayLine::process(std::span<const double> in, std::span<double> out) {
  require(out.size() == in.size(), "delay line output size mismatch");
  if (buf_.empty()) {
    std::copy(in.begin(), in.end(), out.begin());
    return;
  }
  for (std::size_t n = 0; n < in.size(); ++n) {
    out[n] = buf_[pos_];
    buf_[pos_] = in[n];
    pos_ = (pos_ + 1) % buf_.size();
  }
}

void DelayLine::reset() {
  std::fill(buf_.begin(), buf_.end(), 0.0);
  pos_ = 0;
}

}  // namespace bwx
