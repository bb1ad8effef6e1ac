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

// Side-information stream: one envelope index byte per 256-sample frame.
//
// File layout, little-endian:
//   magic "BWXSI1\0\0" | version u16 | frame_size u16 | sample_rate u32 |
//   codebook hash u64 | frame_count u32 | frame_count payload bytes

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace bwx {

inline constexpr std::uint16_t kSideInfoVersion = 1;

struct SideInfoHeader {
  std::uint16_t version = kSideInfoVersion;
  std::uint16_t frame_size = 256;
  std::uint32_t sample_rate = 16000;
  std::uint64_t codebook_hash = 0;

  bool operator==(const SideInfoHeader&) const = default;
};

struct SideInfoStream {
  SideInfoHeader header;
  std::vector<std::uint8_t> payload;

  std::size_t frame_count() const { return payload.size(); }
  double duration_seconds() const;
  double bit_rate() const;  // 8 bits per frame over the frame duration
  bool operator==(const SideInfoStream&) const = default;
};

std::string serialize_sideinfo(const SideInfoStream& s);
SideInfoStream deserialize_sideinfo(std::string_view bytes);
void write_sideinfo(const SideInfoStream& s, const std::filesystem::path& path);
SideInfoStream read_sideinfo(const std::filesystem::path& path);

}  // namespace bwx
