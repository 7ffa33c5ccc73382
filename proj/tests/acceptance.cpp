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

// Acceptance run: one PASS/FAIL line per criterion. Exit code is the number
// of failed criteria.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "fuzz.hpp"
#include "kgfact.hpp"
#include "oracle.hpp"

namespace kgfact {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
using testing::chain;
using testing::E;
using testing::G;
using testing::V;

// Tolerances.
constexpr std::size_t kFuzzCases = 10000;
constexpr double kFuzzSeconds = 60.0;
constexpr std::size_t kSynthRecords = 10000;
constexpr std::size_t kSynthTriples = 5000;
constexpr std::size_t kRadius = 4;
constexpr double kSplitTolerance = 1.0;
constexpr std::size_t kMaxRetrievalRecords = 5000;
constexpr std::size_t kPerfTriples = 1000000;
constexpr double kIngestSeconds = 60.0;
constexpr double kFollowPathMedianMs = 1.0;
constexpr std::size_t kFollowPathSamples = 2001;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(const char* name, const Outcome& o) {
  std::cout << name << ": " << (o.pass ? "PASS" : "FAIL") << " (" << o.detail << ")" << std::endl;
  failures += !o.pass;
}

Outcome ac1_verifier_oracle() {
  Rng rng(1729);
  std::size_t cases = 0;
  std::size_t agree = 0;
  const auto start = Clock::now();
  while (cases < kFuzzCases) {
    auto c = testing::random_case(rng);
    if (!c) continue;
    ++cases;
    const auto kg = testing::graph_of(c->triples);
    const testing::BruteForceOracle oracle(c->triples);
    agree += (verify(kg, c->pattern).label == Label::kSupported) == oracle.evaluate(c->pattern).supported;
  }
  const double secs = seconds_since(start);
  std::ostringstream d;
  d << agree << "/" << cases << " agree, " << secs << " s";
  return {agree == cases && secs < kFuzzSeconds, d.str()};
}

Outcome ac2_worked_examples() {
  const auto kg = testing::aidastella_graph();
  auto hamburg = testing::aidastella_triples();
  hamburg.push_back({"Meyer_Werft", "location", "Hamburg"});
  const auto kg_hamburg = testing::graph_of(hamburg);
  constexpr Label S = Label::kSupported;
  constexpr Label R = Label::kRefuted;
  struct Row {
    const KnowledgeGraph* kg;
    ClaimPattern pattern;
    Label expected;
  };
  auto nyc = [](bool a, bool b) {
    return chain(G("AIDAstella"), "shipBuilder", G("Meyer_Werft"), "location", G("New_York"), a, b);
  };
  auto samsung = [](bool a, bool b) {
    return chain(G("AIDAstella"), "shipBuilder", G("Samsung"), "location", G("Papenburg"), a, b);
  };
  const auto formula = chain(G("AIDAstella"), "shipBuilder", V(0, "Company"), "location", G("Papenburg"), false, true);
  const std::vector<Row> rows{
      // Five example claims.
      {&kg, build_pattern({G("AIDAstella"), G("Meyer_Werft")}, {E(0, "shipBuilder", 1)}), S},
      {&kg,
       build_pattern({G("AIDA_Cruises"), G("AIDAstella"), G("Meyer_Werft")},
                     {E(1, "shipOperator", 0), E(1, "shipBuilder", 2)}),
       S},
      {&kg, build_pattern({G("Meyer_Werft"), V(0)}, {E(0, "parentCompany", 1)}), S},
      {&kg, chain(G("AIDAstella"), "shipBuilder", V(0, "Company"), "location", G("Papenburg")), S},
      {&kg, chain(G("AIDAstella"), "shipBuilder", G("Meyer_Werft"), "location", G("Papenburg"), true), R},
      // Substituted tail rows.
      {&kg, chain(G("AIDAstella"), "shipBuilder", G("Meyer_Werft"), "location", G("Papenburg")), S},
      {&kg, nyc(false, false), R},
      {&kg, nyc(true, false), R},
      {&kg, nyc(false, true), S},
      {&kg, nyc(true, true), R},
      // Substituted middle rows.
      {&kg, samsung(false, false), R},
      {&kg, samsung(true, false), R},
      {&kg, samsung(false, true), R},
      {&kg, samsung(true, true), S},
      // Multi-hop negation formula.
      {&kg, formula, R},
      {&kg_hamburg, formula, S},
  };
  std::size_t ok = 0;
  for (const auto& row : rows) ok += verify(*row.kg, row.pattern).label == row.expected;
  return {ok == rows.size(), std::to_string(ok) + "/" + std::to_string(rows.size()) + " rows"};
}

struct SynthData {
  KnowledgeGraph kg;
  std::vector<ClaimRecord> records;
};

SynthData synthesize() {
  SyntheticConfig wc;
  wc.total_triples = kSynthTriples;
  wc.seed = 2026;
  wc.seeds = 1400;
  const auto world = make_synthetic_world(wc);
  SynthData out{world.graph(), {}};
  SynthConfig cfg;
  cfg.seed = 2026;
  cfg.threads = 4;
  out.records = generate_dataset(out.kg, world.seeds, default_catalog(), cfg).records;
  if (out.records.size() > kSynthRecords) out.records.resize(kSynthRecords);
  return out;
}

Outcome ac3_synthesis_soundness(const SynthData& data) {
  std::size_t sound = 0;
  std::size_t substituted = 0;
  std::size_t far = 0;
  for (const auto& r : data.records) {
    sound += verify(data.kg, r.pattern).label == r.label;
    std::set<std::string> originals;
    for (const auto& t : r.source_triples) {
      originals.insert(t.head);
      originals.insert(t.tail);
    }
    for (const auto& e : r.pattern.grounded_entities()) {
      if (originals.contains(e)) continue;
      ++substituted;
      const auto id = data.kg.find_entity(e);
      bool outside = id.has_value();
      for (const auto& o : originals) {
        if (id && data.kg.hop_distance(*id, *data.kg.find_entity(o), kRadius)) outside = false;
      }
      far += outside;
    }
  }
  std::ostringstream d;
  d << data.records.size() << " records, " << sound << " label-sound, " << far << "/" << substituted
    << " substitutions beyond " << kRadius << " hops";
  return {data.records.size() == kSynthRecords && sound == data.records.size() && far == substituted, d.str()};
}

Outcome ac4_split(const SynthData& data) {
  Rng rng(99);
  const std::array<double, 3> ratios{0.8, 0.1, 0.1};
  const auto split = split_dataset(data.records, ratios, rng);
  std::set<SourceTriple> all;
  for (const auto& r : data.records) all.insert(r.source_triples.begin(), r.source_triples.end());
  const double n = static_cast<double>(all.size());
  bool sizes = true;
  std::size_t sum = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    sizes &= std::abs(static_cast<double>(split.triples[i].size()) - ratios[i] * n) <= kSplitTolerance;
    sum += split.triples[i].size();
  }
  std::set<SourceTriple> seen;
  bool disjoint = sum == all.size();
  for (const auto& s : split.triples) {
    for (const auto& t : s) disjoint &= seen.insert(t).second;
  }
  std::size_t cross = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const std::set<SourceTriple> mine(split.triples[i].begin(), split.triples[i].end());
    for (const auto& r : split.records[i]) {
      for (const auto& t : r.source_triples) cross += !mine.contains(t);
    }
  }
  std::ostringstream d;
  d << "triples " << split.triples[0].size() << "/" << split.triples[1].size() << "/" << split.triples[2].size()
    << " of " << all.size() << ", disjoint=" << disjoint << ", cross-split kept=" << cross;
  return {sizes && disjoint && cross == 0, d.str()};
}

Outcome ac5_retrieval(const SynthData& data) {
  std::size_t eligible = 0;
  std::size_t reached = 0;
  for (const auto& r : data.records) {
    if (r.label != Label::kSupported) continue;
    bool short_gold = false;
    for (const auto& [e, paths] : r.evidence) {
      for (const auto& p : paths) short_gold |= p.size() <= 2;
    }
    if (!short_gold) continue;
    if (++eligible > kMaxRetrievalRecords) {
      --eligible;
      break;
    }
    Rng rng = derive_rng(5, r.id);
    reached += retrieve(data.kg, r, OraclePredictor{}, rng).any_reached();
  }
  bool counts = true;
  for (std::size_t rel = 0; rel <= 5; ++rel) {
    for (std::size_t n = 0; n <= 3; ++n) {
      RetrievalContext ctx;
      for (std::size_t i = 0; i < rel; ++i) ctx.relations.push_back({RelationId{static_cast<std::uint32_t>(i)}, false});
      ctx.max_hops = n;
      std::size_t expect = 0;
      std::size_t power = 1;
      for (std::size_t k = 1; k <= n; ++k) expect += (power *= rel);
      counts &= enumerate_sequences(ctx, 1000).sequences.size() == expect;
    }
  }
  const auto kg = testing::aidastella_graph();
  const SeedPair seed{"a", "AIDAstella was built by Meyer Werft in Papenburg.",
                      {{"AIDAstella", "shipBuilder", "Meyer_Werft"}, {"Meyer_Werft", "location", "Papenburg"}}};
  const auto rec = std::get<ClaimRecord>(make_seed_record(kg, seed));
  Rng rng(0);
  const auto named = name_paths(kg, retrieve(kg, rec, OraclePredictor{}, rng).paths);
  const std::string golden =
      testing::read_text_file(std::string(KGFACT_SOURCE_DIR) + "/tests/golden/evidence_sep.txt");
  bool sep = false;
  for (const auto& p : named) sep |= serialize_evidence(NamedEvidence{p}) == golden;
  std::ostringstream d;
  d << "oracle recall " << reached << "/" << eligible << ", enumeration counts " << (counts ? "exact" : "wrong")
    << ", SEP golden " << (sep ? "match" : "mismatch");
  return {eligible > 0 && reached == eligible && counts && sep, d.str()};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(KGFACT_CLI_PATH) + " " + args + " >/dev/null 2>&1 </dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome ac6_performance() {
  SyntheticConfig wc;
  wc.total_triples = kPerfTriples;
  wc.seed = 6;
  const auto world = make_synthetic_world(wc);
  std::istringstream tsv(world.tsv());
  const auto start = Clock::now();
  const auto kg = ingest_triples(tsv);
  const double ingest = seconds_since(start);

  Rng rng(6);
  std::vector<double> ms;
  std::size_t touched = 0;
  const auto num_rel = static_cast<std::uint32_t>(kg.relation_names().size());
  const auto num_ent = kg.num_entities();
  while (ms.size() < kFollowPathSamples) {
    const EntityId s{static_cast<std::uint32_t>(uniform_index(rng, num_ent))};
    const auto out = kg.out_edges(s);
    if (out.empty()) continue;
    RelationPath path{{out[uniform_index(rng, out.size())].relation, false}};
    if (uniform_index(rng, 2)) path.push_back({RelationId{static_cast<std::uint32_t>(uniform_index(rng, num_rel))},
                                               uniform_index(rng, 2) == 1});
    const auto t = Clock::now();
    const auto reached = kg.follow_path(s, path);
    ms.push_back(seconds_since(t) * 1000.0);
    touched += reached.size();
  }
  std::nth_element(ms.begin(), ms.begin() + ms.size() / 2, ms.end());
  const double median = ms[ms.size() / 2];

  const auto tmp = fs::temp_directory_path() / ("kgfact_accept_" + std::to_string(::getpid()));
  fs::remove_all(tmp);
  const std::string demo = std::string(KGFACT_SOURCE_DIR) + "/data/demo/";
  const std::string base = "synth " + demo + "graph.tsv " + demo + "seeds.jsonl --seed 17 --out ";
  const std::vector<std::string> files{"train.jsonl",           "dev.jsonl",         "test.jsonl",
                                       "generation_report.json", "split_report.json", "config.json"};
  auto snapshot = [&] {
    std::vector<std::string> out;
    if (run_cli(base + (tmp / "out").string()) != 0) return out;
    for (const auto& f : files) out.push_back(testing::read_text_file((tmp / "out" / f).string()));
    return out;
  };
  const auto first = snapshot();
  const bool identical = first.size() == files.size() && !first[0].empty() && snapshot() == first;
  fs::remove_all(tmp);
  std::ostringstream d;
  d << kg.num_triples() << " triples ingested in " << ingest << " s, median follow_path " << median
    << " ms over " << touched << " endpoints, synth rerun " << (identical ? "identical" : "differs");
  return {kg.num_triples() >= kPerfTriples && ingest < kIngestSeconds && median < kFollowPathMedianMs && identical,
          d.str()};
}

Outcome ac7_catalog() {
  const auto c = default_catalog();
  const auto asset = load_catalog_file(std::string(KGFACT_SOURCE_DIR) + "/data/catalog.json");
  bool ok = asset == c;
  ok &= c.existence_relation_count(ExistenceSide::kHead) == 17;
  ok &= c.existence_relation_count(ExistenceSide::kTail) == 5;
  for (const auto* fams : {&c.head_existence, &c.tail_existence}) {
    for (const auto& f : *fams) ok &= !f.positive.empty() && !f.negative.empty();
  }
  ok &= c.factive.size() == 8 && c.non_factive.size() == 3;
  ok &= c.factive[1] == "I realized that {claim}." && c.non_factive[1] == "I wish that {claim}.";
  const std::vector<std::size_t> sets{7, 2, 13, 3};
  ok &= c.substitution_groups.size() == sets.size();
  for (std::size_t g = 0; ok && g < sets.size(); ++g) ok &= c.substitution_groups[g].sets.size() == sets[g];
  ok &= c.head_existence[0].positive == "{head} had a(an) {relation}.";
  ok &= c.tail_existence[0].negative == "{tail} was not a {relation}.";
  std::ostringstream d;
  d << c.existence_relation_count(ExistenceSide::kHead) << "+" << c.existence_relation_count(ExistenceSide::kTail)
    << " existence relations, " << c.factive.size() << "+" << c.non_factive.size() << " presuppositions, "
    << c.substitution_groups.size() << " groups, asset " << (asset == c ? "matches" : "differs");
  return {ok, d.str()};
}

template <typename F>
Outcome guarded(F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
}

}  // namespace
}  // namespace kgfact

int main() {
  using namespace kgfact;
  report("AC1 verifier/oracle equivalence", guarded(ac1_verifier_oracle));
  report("AC2 worked-example fixtures", guarded(ac2_worked_examples));
  const auto data = synthesize();
  report("AC3 synthesis soundness", guarded([&] { return ac3_synthesis_soundness(data); }));
  report("AC4 split protocol", guarded([&] { return ac4_split(data); }));
  report("AC5 retrieval", guarded([&] { return ac5_retrieval(data); }));
  report("AC6 performance and reproducibility", guarded(ac6_performance));
  report("AC7 template catalog", guarded(ac7_catalog));
  return failures;
}
