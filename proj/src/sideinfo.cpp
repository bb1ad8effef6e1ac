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

#include "bwx/sideinfo.hpp"

#include "bwx/detail/binio.hpp"
#include "bwx/error.hpp"

namespace bwx {

namespace {

constexpr std::string_view kSideInfoMagic{"BWXSI1\0\0", 8};

}  // namespace

double SideInfoStream::duration_seconds() const {
  return static_cast<double>(payload.size()) * header.frame_size / header.sample_rate;
}

double SideInfoStream::bit_rate() const {
  return 8.0 * header.sample_rate / header.frame_size;
}

std::string serialize_sideinfo(const SideInfoStream& s) {
  detail::ByteWriter w;
  w.raw(kSideInfoMagic);
  w.uint<std::uint16_t>(s.header.version);
  w.uint<std::uint16_t>(s.header.frame_size);
  w.uint<std::uint32_t>(s.header.sample_rate);
  w.uint<std::uint64_t>(s.header.codebook_hash);
  w.uint<std::uint32_t>(static_cast<std::uint32_t>(s.payload.size()));
  w.raw({reinterpret_cast<const char*>(s.payload.data()), s.payload.size()});
  return w.bytes();
}

SideInfoStream deserialize_sideinfo(std::string_view bytes) {
  detail::ByteReader r(bytes, "side-info file");
  if (r.raw(8) != kSideInfoMagic) throw FormatError("side-info file: bad magic");
  SideInfoStream s;
  s.header.version = r.uint<std::uint16_t>();
  if (s.header.version != kSideInfoVersion)
    throw FormatError("side-info file: unsupported version " + std::to_string(s.header.version));
  s.header.frame_size = r.uint<std::uint16_t>();
  s.header.sample_rate = r.uint<std::uint32_t>();
  s.header.codebook_hash = r.uint<std::uint64_t>();
  if (s.header.frame_size != 256 || s.header.sample_rate != 16000)
    throw FormatError("side-info file: expected 256-sample frames at 16000 Hz");
  const auto frames = r.uint<std::uint32_t>();
  if (r.remaining() != frames)
    throw FormatError("side-info file: payload has " + std::to_string(r.remaining()) + " bytes, header expects " +
                      std::to_string(frames));
  const auto body = r.raw(frames);
  s.payload.assign(body.begin(), body.end());
  return s;
}

void write_sideinfo(const SideInfoStream& s, const std::filesystem::path& path) {
  detail::write_file_bytes(path, serialize_sideinfo(s));
}

SideInfoStream read_sideinfo(const std::filesystem::path& path) {
  return deserialize_sideinfo(detail::read_file_bytes(path));
}

}  // namespace bwx
