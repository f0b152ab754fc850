/*
 * Copyright 2026 The xgx Authors.
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

// Regenerates the CSV fixtures under tests/data from the seeded generator.
//
//   make_fixtures <out_dir>

#include <filesystem>
#include <iostream>
#include <vector>

#include "xgx/event_data.h"
#include "xgx/status.h"
#include "xgx/synthetic.h"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures <out_dir>\n";
    return 2;
  }
  const std::filesystem::path dir = argv[1];
  try {
    std::filesystem::create_directories(dir);
    const std::vector<xgx::ShotEvent> corpus = xgx::synth::GenerateFixtureCorpus();
    xgx::WriteCsvFile((dir / "fixture_shots.csv").string(), corpus);

    std::vector<xgx::ShotEvent> moukoko;
    for (const auto& e : corpus) {
      if (e.player == "Youssoufa Moukoko" && e.season == "2022/23") {
        moukoko.push_back(e);
      }
    }
    xgx::WriteCsvFile((dir / "moukoko_2022_23.csv").string(), moukoko);
    std::cout << corpus.size() << " shots, " << moukoko.size()
              << " Moukoko shots\n";
  } catch (const xgx::Error& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return 0;
}
