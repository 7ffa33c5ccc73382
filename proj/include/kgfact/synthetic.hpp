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

#pragma once

// Seeded generator for typed random graphs and matching seed pairs, used by
// the demo data, the tests and the benchmarks.

#include <cstdio>
#include <string>
#include <unordered_set>
#include <vector>

#include "kgfact/claim_model.hpp"
#include "kgfact/common.hpp"
#include "kgfact/kg_store.hpp"
#include "kgfact/synthesizer.hpp"
#include "kgfact/templates.hpp"

namespace kgfact {

struct SchemaType {
  const char* name;
  unsigned share;  // parts per 100 of all entities
  const char* super = nullptr;
};

struct SchemaRelation {
  const char* name;
  const char* domain;
  const char* range;
  unsigned weight;
};

inline const std::vector<SchemaType>& synthetic_types() {
  static const std::vector<SchemaType> types{
      {"Person", 32},     {"Company", 14, "Organisation"}, {"Ship", 8},
      {"City", 12},       {"Country", 3},                  {"SportsTeam", 6},
      {"University", 5, "Organisation"},                   {"Film", 12},
      {"Award", 6},       {"Religion", 2},
  };
  return types;
}

inline const std::vector<SchemaRelation>& synthetic_relations() {
  static const std::vector<SchemaRelation> rels{
      {"shipBuilder", "Ship", "Company", 4},     {"shipOperator", "Ship", "Company", 3},
      {"builder", "Ship", "Company", 1},          {"location", "Company", "City", 4},
      {"headquarter", "Company", "City", 2},     {"parentCompany", "Company", "Company", 2},
      {"owner", "Company", "Company", 1},        {"founder", "Company", "Person", 3},
      {"manager", "Company", "Person", 2},       {"chairman", "Company", "Person", 2},
      {"country", "City", "Country", 4},         {"capital", "Country", "City", 1},
      {"leader", "Country", "Person", 1},        {"president", "Country", "Person", 1},
      {"vicePresident", "Country", "Person", 1}, {"primeMinister", "Country", "Person", 1},
      {"spouse", "Person", "Person", 2},         {"child", "Person", "Person", 2},
      {"successor", "Person", "Person", 2},      {"predecessor", "Person", "Person", 1},
      {"birthPlace", "Person", "City", 4},       {"almaMater", "Person", "University", 2},
      {"university", "Person", "University", 1}, {"award", "Person", "Award", 2},
      {"religion", "Person", "Religion", 1},     {"team", "Person", "SportsTeam", 2},
      {"formerTeam", "Person", "SportsTeam", 1}, {"currentteam", "Person", "SportsTeam", 1},
      {"location", "SportsTeam", "City", 1},     {"location", "University", "City", 1},
      {"director", "Film", "Person", 3},         {"producer", "Film", "Person", 2},
      {"writer", "Film", "Person", 1},           {"starring", "Film", "Person", 3},
  };
  return rels;
}

struct SyntheticConfig {
  // Total triples including type triples; the result can fall slightly short
  // when random draws collide.
  std::size_t total_triples = 5000;
  std::uint64_t seed = 1;
  std::size_t seeds = 0;
  double conjunction_share = 0.6;
};

struct SyntheticWorld {
  std::vector<SourceTriple> triples;
  std::vector<SeedPair> seeds;

  KnowledgeGraph graph() const {
    GraphBuilder b;
    for (const auto& t : triples) b.add(t.head, t.relation, t.tail);
    return std::move(b).build();
  }

  std::string tsv() const {
    std::string out;
    for (const auto& t : triples) {
      out += t.head;
      out += '\t';
      out += t.relation;
      out += '\t';
      out += t.tail;
      out += '\n';
    }
    return out;
  }
};

inline SyntheticWorld make_synthetic_world(const SyntheticConfig& cfg,
                                           const TemplateCatalog& catalog = default_catalog()) {
  Rng rng = derive_rng(cfg.seed, "synthetic-world");
  const auto& types = synthetic_types();
  const auto& rels = synthetic_relations();
  SyntheticWorld world;

  // Roughly 30 % of the budget becomes entities (plus their type triples).
  const std::size_t entities = std::max<std::size_t>(types.size() * 2, cfg.total_triples * 3 / 10);
  std::map<std::string, std::vector<std::string>> members;
  for (const auto& t : types) {
    const std::size_t n = std::max<std::size_t>(2, entities * t.share / 100);
    auto& list = members[t.name];
    list.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      list.push_back(std::string(t.name) + "_" + std::to_string(i + 1));
      world.triples.push_back({list.back(), std::string(kDefaultTypeRelation), t.name});
      if (t.super) world.triples.push_back({list.back(), std::string(kDefaultTypeRelation), t.super});
    }
  }

  unsigned total_weight = 0;
  for (const auto& r : rels) total_weight += r.weight;
  std::unordered_set<std::string> seen;
  const std::size_t start = world.triples.size();
  const std::size_t target = cfg.total_triples > start ? cfg.total_triples - start : 0;
  std::size_t misses = 0;
  while (world.triples.size() - start < target && misses < target + 1000) {
    auto w = static_cast<unsigned>(uniform_index(rng, total_weight));
    std::size_t ri = 0;
    while (w >= rels[ri].weight) w -= rels[ri++].weight;
    const auto& heads = members[rels[ri].domain];
    const auto& tails = members[rels[ri].range];
    const auto& h = heads[uniform_index(rng, heads.size())];
    const auto& t = tails[uniform_index(rng, tails.size())];
    if (h == t || !seen.insert(h + '\t' + rels[ri].name + '\t' + t).second) {
      ++misses;
      continue;
    }
    world.triples.push_back({h, rels[ri].name, t});
  }

  if (cfg.seeds == 0) return world;
  const std::size_t relational = world.triples.size() - start;
  if (relational == 0) return world;
  std::map<std::string, std::vector<std::size_t>> incident;
  for (std::size_t i = start; i < world.triples.size(); ++i) {
    incident[world.triples[i].head].push_back(i);
    incident[world.triples[i].tail].push_back(i);
  }
  std::set<std::vector<SourceTriple>> used;
  for (std::size_t attempt = 0; world.seeds.size() < cfg.seeds && attempt < cfg.seeds * 20; ++attempt) {
    const auto& first = world.triples[start + uniform_index(rng, relational)];
    std::vector<SourceTriple> picked{first};
    if (uniform_unit(rng) < cfg.conjunction_share) {
      const auto& pivot = uniform_index(rng, 2) == 0 ? first.head : first.tail;
      const auto& options = incident[pivot];
      const auto& second = world.triples[options[uniform_index(rng, options.size())]];
      if (second == first) continue;
      picked.push_back(second);
    }
    if (!used.insert(picked).second) continue;
    SeedPair seed;
    char id[32];
    std::snprintf(id, sizeof(id), "seed-%06zu", world.seeds.size() + 1);
    seed.id = id;
    seed.triples = picked;
    seed.text = render_pattern_text(pattern_from_triples(picked), catalog);
    world.seeds.push_back(std::move(seed));
  }
  return world;
}

}  // namespace kgfact
