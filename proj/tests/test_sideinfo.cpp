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

#include "bwx/error.hpp"
#include "bwx/sideinfo.hpp"
#include "temp_dir.hpp"

namespace {

bwx::SideInfoStream sample_stream() {
  bwx::SideInfoStream s;
  s.header.codebook_hash = 0x0123456789abcdefull;
  for (int i = 0; i < 300; ++i) s.payload.push_back(static_cast<std::uint8_t>(i * 7));
  return s;
}

}  // namespace

TEST_CASE("side info runs at 500 bit/s") {
  const auto s = sample_stream();
  CHECK(s.bit_rate() == 500.0);
  CHECK(s.duration_seconds() == doctest::Approx(300 * 0.016));
  CHECK(8.0 * static_cast<double>(s.frame_count()) / s.duration_seconds() == doctest::Approx(500.0));
}

TEST_CASE("side info round trips through a file") {
  testutil::TempDir dir;
  const auto s = sample_stream();
  bwx::write_sideinfo(s, dir / "s.si");
  CHECK(bwx::read_sideinfo(dir / "s.si") == s);
  bwx::SideInfoStream empty;
  bwx::write_sideinfo(empty, dir / "e.si");
  CHECK(bwx::read_sideinfo(dir / "e.si") == empty);
}

TEST_CASE("truncation names expected and actual byte counts") {
  const auto bytes = bwx::serialize_sideinfo(sample_stream());
  try {
    (void)bwx::deserialize_sideinfo(bytes.substr(0, bytes.size() - 10));
    FAIL("truncated stream accepted");
  } catch (const bwx::FormatError& e) {
    const std::string what = e.what();
    CHECK(what.find("290") != std::string::npos);
    CHECK(what.find("300") != std::string::npos);
  }
  CHECK_THROWS_AS(bwx::deserialize_sideinfo(bytes.substr(0, 12)), bwx::FormatError);
}

TEST_CASE("header validation") {
  auto s = sample_stream();
  s.header.version = 99;
  const auto v99 = bwx::serialize_sideinfo(s);
  try {
    (void)bwx::deserialize_sideinfo(v99);
    FAIL("version 99 accepted");
  } catch (const bwx::FormatError& e) {
    CHECK(std::string(e.what()).find("unsupported version 99") != std::string::npos);
  }
  auto bad = bwx::serialize_sideinfo(sample_stream());
  bad[2] = 'Q';
  CHECK_THROWS_AS(bwx::deserialize_sideinfo(bad), bwx::FormatError);
  auto rate = sample_stream();
  rate.header.sample_rate = 8000;
  CHECK_THROWS_AS(bwx::deserialize_sideinfo(bwx::serialize_sideinfo(rate)), bwx::FormatError);
  CHECK_THROWS_AS(bwx::deserialize_sideinfo(bwx::serialize_sideinfo(sample_stream()) + "x"), bwx::FormatError);
  testutil::TempDir dir;
  CHECK_THROWS_AS(bwx::read_sideinfo(dir / "missing.si"), bwx::IoError);
}
