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

// Writes a seeded synthetic speech corpus and its manifest.

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "bwx/detail/binio.hpp"
#include "bwx/error.hpp"
#include "bwx/speech_synth.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Synthetic speech corpus generator"};
  std::string out_dir, manifest = "manifest.txt", prefix = "utt";
  std::size_t count = 10;
  double seconds = 10.0;
  std::uint64_t seed = 1;
  app.add_option("--out", out_dir, "Output directory")->required();
  app.add_option("--count", count)->check(CLI::Range(1, 100000));
  app.add_option("--seconds", seconds)->check(CLI::Range(0.1, 3600.0));
  app.add_option("--seed", seed);
  app.add_option("--manifest", manifest, "Manifest file name inside --out");
  app.add_option("--prefix", prefix);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    std::filesystem::create_directories(out_dir);
    const auto corpus = bwx::synthetic_corpus(count, seconds, seed);
    std::ostringstream list;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const std::string name = prefix + "_" + std::to_string(i) + ".wav";
      bwx::write_wav(corpus[i], std::filesystem::path(out_dir) / name);
      list << name << "\n";
    }
    bwx::detail::write_file_bytes(std::filesystem::path(out_dir) / manifest, list.str());
    std::cout << "wrote " << corpus.size() << " files to " << out_dir << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
