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

#include <set>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "kgfact.hpp"

namespace kgfact {
namespace {

using testing::graph_of;

RetrievalContext ctx_of(std::size_t relations, std::size_t hops) {
  RetrievalContext ctx;
  for (std::size_t i = 0; i < relations; ++i) ctx.relations.push_back({RelationId{static_cast<std::uint32_t>(i)}, false});
  ctx.max_hops = hops;
  return ctx;
}

TEST(Retriever, SequenceCounts) {
  EXPECT_EQ(enumerate_sequences(ctx_of(1, 2), 100).sequences.size(), 2u);
  EXPECT_EQ(enumerate_sequences(ctx_of(2, 2), 100).sequences.size(), 6u);
  EXPECT_EQ(enumerate_sequences(ctx_of(5, 3), 1000).sequences.size(), 155u);
  EXPECT_EQ(sequence_count(5, 3), 155u);
  for (std::size_t r = 0; r <= 4; ++r) {
    for (std::size_t n = 0; n <= 4; ++n) {
      std::size_t expect = 0;
      for (std::size_t k = 1; k <= n; ++k) {
        std::size_t p = 1;
        for (std::size_t i = 0; i < k; ++i) p *= r;
        expect += p;
      }
      const auto e = enumerate_sequences(ctx_of(r, n), 100000);
      EXPECT_EQ(e.sequences.size(), expect);
      EXPECT_FALSE(e.truncated);
      std::set<RelationPath> unique(e.sequences.begin(), e.sequences.end());
      EXPECT_EQ(unique.size(), expect);
    }
  }
}

TEST(Retriever, SequenceCapTruncates) {
  const auto e = enumerate_sequences(ctx_of(5, 3), 100);
  EXPECT_EQ(e.sequences.size(), 100u);
  EXPECT_TRUE(e.truncated);
  EXPECT_THROW(enumerate_sequences(ctx_of(1, 1), 0), Error);
}

TEST(Retriever, DuplicateRelationsAreMerged) {
  RetrievalContext ctx;
  ctx.relations = {{RelationId{1}, false}, {RelationId{1}, false}, {RelationId{0}, true}};
  ctx.max_hops = 1;
  EXPECT_EQ(enumerate_sequences(ctx, 10).sequences.size(), 2u);
}

ClaimRecord aidastella_claim(const KnowledgeGraph& kg) {
  const SeedPair seed{"a", "AIDAstella was built by Meyer Werft in Papenburg.",
                      {{"AIDAstella", "shipBuilder", "Meyer_Werft"}, {"Meyer_Werft", "location", "Papenburg"}}};
  return std::get<ClaimRecord>(make_seed_record(kg, seed));
}

TEST(Retriever, WorkedExample) {
  const auto kg = testing::aidastella_graph();
  const auto rec = aidastella_claim(kg);
  Rng rng(0);
  const auto result = retrieve(kg, rec, OraclePredictor{}, rng);
  ASSERT_EQ(result.entities.size(), 3u);
  EXPECT_EQ(result.entities[0].entity, "AIDAstella");
  EXPECT_EQ(result.entities[0].sequences_tried, 6u);
  EXPECT_EQ(result.entities[0].reached, 2u);
  EXPECT_TRUE(result.any_reached());
  EXPECT_FALSE(result.truncated());
  const auto named = name_paths(kg, result.paths);
  const std::vector<SourceTriple> two_hop{{"AIDAstella", "shipBuilder", "Meyer_Werft"},
                                          {"Meyer_Werft", "location", "Papenburg"}};
  EXPECT_NE(std::find(named.begin(), named.end(), two_hop), named.end());
  EXPECT_EQ(serialize_evidence(NamedEvidence{two_hop}),
            testing::read_text_file(std::string(KGFACT_SOURCE_DIR) + "/tests/golden/evidence_sep.txt"));
  for (const auto& p : result.paths) EXPECT_TRUE(p.reached_other_claim_entity);
}

TEST(Retriever, SingleEntityClaimFallsBackToOnePath) {
  const auto kg = graph_of({{"Obama", "spouse", "Michelle_Obama"}, {"Obama", "spouse", "Someone"}});
  Rng rng(1);
  const auto recs = std::get<std::vector<ClaimRecord>>(
      make_existence(kg, {"Obama", "spouse", "Michelle_Obama"}, default_catalog(), rng));
  const auto& rec = recs.front();
  const auto oracle = retrieve(kg, rec, OraclePredictor{}, rng);
  EXPECT_TRUE(oracle.paths.empty());
  const auto lexical = retrieve(kg, rec, LexicalPredictor(kg), rng);
  ASSERT_EQ(lexical.paths.size(), 1u);
  EXPECT_FALSE(lexical.paths[0].reached_other_claim_entity);
  EXPECT_EQ(kg.relation_name(lexical.paths[0].triples[0].relation), "spouse");
}

TEST(Retriever, LexicalPredictorMatchesWholeWords) {
  const auto kg = graph_of({{"A", "shipBuilder", "B"}, {"A", "location", "C"}, {"A", "rdf:type", "Ship"}});
  ClaimRecord rec;
  rec.text = "The ship builder of A is B.";
  rec.pattern = build_pattern({GroundedNode{"A"}, GroundedNode{"B"}}, {{0, "shipBuilder", 1, false}});
  const auto ctx = LexicalPredictor(kg).predict(kg, rec, "A");
  std::set<std::string> names;
  for (const auto& d : ctx.relations) names.insert(kg.relation_name(d.relation));
  EXPECT_EQ(names, (std::set<std::string>{"shipBuilder"}));
  EXPECT_EQ(ctx.relations.size(), 2u);
}

struct Walk {
  std::vector<std::array<int, 3>> triples;
  int end;
};

// All walks of length 1..n from `start` over `rels` in either direction.
std::vector<Walk> brute_walks(const std::vector<std::array<int, 3>>& triples, int start,
                              const std::set<std::pair<int, bool>>& rels, std::size_t n) {
  std::vector<Walk> out;
  std::vector<Walk> frontier{{{}, start}};
  for (std::size_t len = 1; len <= n; ++len) {
    std::vector<Walk> next;
    for (const auto& w : frontier) {
      for (const auto& t : triples) {
        if (rels.contains({t[1], false}) && t[0] == w.end) {
          auto c = w;
          c.triples.push_back(t);
          c.end = t[2];
          next.push_back(c);
        }
        if (rels.contains({t[1], true}) && t[2] == w.end) {
          auto c = w;
          c.triples.push_back(t);
          c.end = t[0];
          next.push_back(c);
        }
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

class FixedPredictor final : public ContextPredictor {
 public:
  explicit FixedPredictor(RetrievalContext ctx) : ctx_(std::move(ctx)) {}
  std::string_view name() const override { return "fixed"; }
  RetrievalContext predict(const KnowledgeGraph&, const ClaimRecord&, std::string_view) const override {
    return ctx_;
  }

 private:
  RetrievalContext ctx_;
};

TEST(Retriever, MatchesBruteForceOnRandomGraphs) {
  Rng rng(42);
  for (int iter = 0; iter < 300; ++iter) {
    const int ne = 2 + static_cast<int>(uniform_index(rng, 10));
    const int nr = 1 + static_cast<int>(uniform_index(rng, 3));
    std::set<std::array<int, 3>> uniq;
    const std::size_t nt = uniform_index(rng, 25);
    for (std::size_t i = 0; i < nt; ++i) {
      uniq.insert({static_cast<int>(uniform_index(rng, ne)), static_cast<int>(uniform_index(rng, nr)),
                   static_cast<int>(uniform_index(rng, ne))});
    }
    std::vector<std::array<int, 3>> triples(uniq.begin(), uniq.end());
    std::vector<SourceTriple> named;
    for (int e = 0; e < ne; ++e) named.push_back({"e" + std::to_string(e), "r" + std::to_string(e % nr), "e" + std::to_string(e)});
    for (const auto& t : triples) {
      named.push_back({"e" + std::to_string(t[0]), "r" + std::to_string(t[1]), "e" + std::to_string(t[2])});
    }
    // Self loops keep every entity and relation interned; add them to the oracle too.
    for (int e = 0; e < ne; ++e) uniq.insert({e, e % nr, e});
    triples.assign(uniq.begin(), uniq.end());
    const auto kg = graph_of(named);

    const int a = static_cast<int>(uniform_index(rng, ne));
    const int b = (a + 1 + static_cast<int>(uniform_index(rng, ne - 1))) % ne;
    ClaimRecord rec;
    rec.pattern = build_pattern({GroundedNode{"e" + std::to_string(a)}, GroundedNode{"e" + std::to_string(b)}},
                                {{0, "r0", 1, false}});
    std::set<std::pair<int, bool>> rels;
    RetrievalContext ctx;
    ctx.max_hops = 1 + uniform_index(rng, 3);
    for (int r = 0; r < nr; ++r) {
      for (bool inv : {false, true}) {
        if (uniform_index(rng, 2) == 0) continue;
        rels.insert({r, inv});
        ctx.relations.push_back({*kg.find_relation("r" + std::to_string(r)), inv});
      }
    }
    Rng local(iter);
    const auto result = retrieve(kg, rec, FixedPredictor(ctx), local);
    const auto got = name_paths(kg, result.paths);
    std::size_t k = 0;
    for (std::size_t i = 0; i < 2; ++i) {
      const int start = i == 0 ? a : b;
      const int other = i == 0 ? b : a;
      const auto walks = brute_walks(triples, start, rels, ctx.max_hops);
      std::set<std::vector<SourceTriple>> reaching, all;
      for (const auto& w : walks) {
        std::vector<SourceTriple> p;
        for (const auto& t : w.triples) {
          p.push_back({"e" + std::to_string(t[0]), "r" + std::to_string(t[1]), "e" + std::to_string(t[2])});
        }
        all.insert(p);
        if (w.end == other && w.end != start) reaching.insert(p);
      }
      std::multiset<std::vector<SourceTriple>> mine;
      for (; k < result.paths.size() && result.paths[k].start == *kg.find_entity("e" + std::to_string(start)); ++k) {
        mine.insert(got[k]);
      }
      if (!reaching.empty()) {
        EXPECT_EQ(std::set<std::vector<SourceTriple>>(mine.begin(), mine.end()), reaching) << "iter " << iter;
        EXPECT_EQ(mine.size(), result.entities[i].reached);
      } else if (!all.empty()) {
        ASSERT_EQ(mine.size(), 1u) << "iter " << iter;
        EXPECT_TRUE(all.contains(*mine.begin()));
      } else {
        EXPECT_TRUE(mine.empty());
      }
    }
  }
}

TEST(Retriever, SerializationRoundTrip) {
  EXPECT_EQ(serialize_evidence(NamedEvidence{}), "");
  EXPECT_TRUE(parse_evidence("").empty());
  const NamedEvidence ev{{{"a", "r", "b"}, {"b", "s", "c"}}, {{"x", "y", "z"}}};
  const auto text = serialize_evidence(ev);
  EXPECT_EQ(text, "a r b <SEP> b s c\nx y z");
  EXPECT_EQ(parse_evidence(text), ev);
  EXPECT_THROW(parse_evidence("a r"), ParseError);
  EXPECT_THROW(parse_evidence("a r b c"), ParseError);
}

TEST(Retriever, BudgetMarksTruncation) {
  std::vector<SourceTriple> t;
  for (int i = 0; i < 50; ++i) t.push_back({"hub", "r", "n" + std::to_string(i)});
  t.push_back({"x", "r", "hub"});
  const auto kg = graph_of(t);
  ClaimRecord rec;
  rec.pattern = build_pattern({GroundedNode{"hub"}, GroundedNode{"x"}}, {{1, "r", 0, false}});
  RetrievalContext ctx;
  ctx.relations = {{*kg.find_relation("r"), false}, {*kg.find_relation("r"), true}};
  ctx.max_hops = 3;
  Rng rng(0);
  RetrieveOptions opts;
  opts.expansion_budget = 20;
  const auto result = retrieve(kg, rec, FixedPredictor(ctx), rng, opts);
  EXPECT_TRUE(result.truncated());
}

TEST(Retriever, OracleCompletenessAndSoundness) {
  SyntheticConfig wc;
  wc.total_triples = 3000;
  wc.seeds = 80;
  const auto world = make_synthetic_world(wc);
  const auto kg = world.graph();
  const auto data = generate_dataset(kg, world.seeds, default_catalog(), SynthConfig{});
  std::size_t with_gold = 0;
  for (const auto& r : data.records) {
    if (r.label != Label::kSupported) continue;
    std::size_t gold = 0;
    for (const auto& [e, paths] : r.evidence) gold += paths.size();
    if (gold == 0) continue;
    ++with_gold;
    Rng rng = derive_rng(0, r.id);
    const auto result = retrieve(kg, r, OraclePredictor{}, rng);
    EXPECT_TRUE(result.any_reached()) << r.id;
    for (const auto& p : result.paths) {
      for (const auto& t : p.triples) EXPECT_TRUE(kg.triple_exists(t)) << r.id;
    }
  }
  EXPECT_GT(with_gold, 50u);
}

TEST(Retriever, Deterministic) {
  SyntheticConfig wc;
  wc.total_triples = 2000;
  wc.seeds = 30;
  const auto world = make_synthetic_world(wc);
  const auto kg = world.graph();
  const auto data = generate_dataset(kg, world.seeds, default_catalog(), SynthConfig{});
  const LexicalPredictor lex(kg);
  auto run = [&] {
    std::string out;
    for (const auto& r : data.records) {
      Rng rng = derive_rng(5, r.id);
      out += serialize_evidence(kg, retrieve(kg, r, lex, rng).paths) + "\n";
    }
    return out;
  };
  EXPECT_EQ(run(), run());
}

}  // namespace
}  // namespace kgfact
