// Copyright 2026 The kgfact Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Writes a synthetic typed graph (TSV), matching seed pairs (JSONL) and,
// optionally, the default template catalog.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "kgfact.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic graph and seed pairs"};
  kgfact::SyntheticConfig cfg;
  std::string graph_path;
  std::string seeds_path;
  std::string catalog_path;
  app.add_option("--triples", cfg.total_triples, "Total triples including type triples");
  app.add_option("--seeds", cfg.seeds, "Number of seed pairs");
  app.add_option("--seed", cfg.seed, "Generator seed");
  app.add_option("--graph-out", graph_path, "TSV output")->required();
  app.add_option("--seeds-out", seeds_path, "Seed JSONL output");
  app.add_option("--catalog-out", catalog_path, "Write the default template catalog here");
  CLI11_PARSE(app, argc, argv);

  const auto world = kgfact::make_synthetic_world(cfg);
  std::ofstream(graph_path, std::ios::binary) << world.tsv();
  if (!seeds_path.empty()) {
    std::ofstream out(seeds_path, std::ios::binary);
    for (const auto& s : world.seeds) out << kgfact::seed_to_json_line(s) << "\n";
  }
  if (!catalog_path.empty()) {
    std::ofstream(catalog_path, std::ios::binary) << kgfact::catalog_to_json(kgfact::default_catalog()).dump(2)
                                                  << "\n";
  }
  std::cerr << world.triples.size() << " triples, " << world.seeds.size() << " seeds\n";
  return 0;
}
