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

// Command-line front end: ingest, stats, synth, verify, retrieve.
//
// Exit codes: 0 success, 1 data error, 2 usage error.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kgfact.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Defaults, overridden by --config, overridden by flags.
struct RunConfig {
  std::string graph;
  std::string catalog;
  std::string seeds;
  std::string records;
  std::string out;
  std::uint64_t seed = 0;
  std::size_t radius = 4;
  std::size_t max_attempts = 64;
  std::optional<std::map<std::string, std::size_t>> quotas;
  std::array<double, 3> split_ratios{0.8, 0.1, 0.1};
  double presupposition_rate = 0.25;
  std::string negation_policy = "uniform";
  std::string type_relation = std::string(kgfact::kDefaultTypeRelation);
  std::string predictor = "oracle";
  std::size_t lexical_hops = 2;
  std::size_t sequence_cap = 100000;
  std::size_t expansion_budget = 100000;
  double search_budget = 1e6;
  std::size_t max_hops = 6;
  std::size_t threads = 0;

  ordered_json to_json() const {
    ordered_json j;
    j["graph"] = graph;
    j["catalog"] = catalog;
    j["seeds"] = seeds;
    j["records"] = records;
    j["out"] = out;
    j["seed"] = seed;
    j["radius"] = radius;
    j["max_attempts"] = max_attempts;
    j["quotas"] = quotas ? ordered_json(*quotas) : ordered_json(nullptr);
    j["split_ratios"] = split_ratios;
    j["presupposition_rate"] = presupposition_rate;
    j["negation_policy"] = negation_policy;
    j["type_relation"] = type_relation;
    j["predictor"] = predictor;
    j["lexical_hops"] = lexical_hops;
    j["sequence_cap"] = sequence_cap;
    j["expansion_budget"] = expansion_budget;
    j["search_budget"] = search_budget;
    j["max_hops"] = max_hops;
    j["threads"] = threads;
    return j;
  }

  void merge(const nlohmann::json& j) {
    auto take = [&](const char* key, auto& field) {
      if (j.contains(key) && !j[key].is_null()) field = j[key].get<std::decay_t<decltype(field)>>();
    };
    take("graph", graph);
    take("catalog", catalog);
    take("seeds", seeds);
    take("records", records);
    take("out", out);
    take("seed", seed);
    take("radius", radius);
    take("max_attempts", max_attempts);
    if (j.contains("quotas") && !j["quotas"].is_null()) {
      quotas = j["quotas"].get<std::map<std::string, std::size_t>>();
    }
    take("split_ratios", split_ratios);
    take("presupposition_rate", presupposition_rate);
    take("negation_policy", negation_policy);
    take("type_relation", type_relation);
    take("predictor", predictor);
    take("lexical_hops", lexical_hops);
    take("sequence_cap", sequence_cap);
    take("expansion_budget", expansion_budget);
    take("search_budget", search_budget);
    take("max_hops", max_hops);
    take("threads", threads);
  }
};

std::size_t thread_count(std::size_t configured) {
  std::size_t n = configured ? configured : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("KGFACT_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
  }
  return n;
}

void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw kgfact::Error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw kgfact::Error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

kgfact::KnowledgeGraph load_graph(const RunConfig& cfg) {
  if (cfg.graph.empty()) throw UsageError("no graph given");
  std::ifstream in(cfg.graph, std::ios::binary);
  if (!in) throw kgfact::Error("cannot open " + cfg.graph);
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  const bool snapshot = in.gcount() == 8 && magic == kgfact::kSnapshotMagic;
  in.clear();
  in.seekg(0);
  if (snapshot) return kgfact::load_snapshot(in);
  return kgfact::ingest_triples(in, cfg.type_relation, kgfact::TraversalLimits{cfg.max_hops});
}

kgfact::TemplateCatalog load_catalog(const RunConfig& cfg) {
  return cfg.catalog.empty() ? kgfact::default_catalog() : kgfact::load_catalog_file(cfg.catalog);
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw kgfact::Error("cannot open " + path);
  return in;
}

kgfact::VerifyOptions verify_options(const RunConfig& cfg) {
  kgfact::VerifyOptions opts;
  opts.search_budget = static_cast<std::size_t>(cfg.search_budget);
  return opts;
}

std::string stats_line(const kgfact::KnowledgeGraph& kg) {
  return std::to_string(kg.num_triples()) + " triples, " + std::to_string(kg.num_entities()) + " entities, " +
         std::to_string(kg.num_relations()) + " relations";
}

int cmd_ingest(const std::string& input, const std::string& output, const RunConfig& cfg) {
  auto in = open_input(input);
  const auto kg = kgfact::ingest_triples(in, cfg.type_relation, kgfact::TraversalLimits{cfg.max_hops});
  std::ostringstream snap;
  kgfact::save_snapshot(kg, snap);
  write_atomic(output, snap.str());
  std::cout << stats_line(kg) << "\n";
  return 0;
}

int cmd_stats(const RunConfig& cfg) {
  const auto kg = load_graph(cfg);
  std::map<std::string, std::size_t> per_relation;
  for (const auto& t : kg.triples()) ++per_relation[kg.relation_name(t.relation)];
  ordered_json j;
  j["triples"] = kg.num_triples();
  j["entities"] = kg.num_entities();
  j["relations"] = kg.num_relations();
  j["type_relation"] = kg.type_relation_name();
  j["per_relation"] = per_relation;
  std::cout << stats_line(kg) << "\n" << j.dump(2) << "\n";
  return 0;
}

kgfact::SynthConfig synth_config(const RunConfig& cfg) {
  kgfact::SynthConfig sc;
  sc.seed = cfg.seed;
  sc.radius = cfg.radius;
  sc.max_attempts = cfg.max_attempts;
  sc.split_ratios = cfg.split_ratios;
  sc.presupposition_rate = cfg.presupposition_rate;
  sc.threads = thread_count(cfg.threads);
  sc.verify = verify_options(cfg);
  static const std::map<std::string, kgfact::NegationPolicy> policies{
      {"uniform", kgfact::NegationPolicy::kUniform}, {"first", kgfact::NegationPolicy::kFirst},
      {"second", kgfact::NegationPolicy::kSecond},   {"both", kgfact::NegationPolicy::kBoth},
      {"all", kgfact::NegationPolicy::kAll}};
  const auto p = policies.find(cfg.negation_policy);
  if (p == policies.end()) throw UsageError("unknown negation policy '" + cfg.negation_policy + "'");
  sc.negation_policy = p->second;
  if (cfg.quotas) {
    kgfact::Quotas q;
    for (const auto& [name, n] : *cfg.quotas) {
      const auto t = kgfact::parse_reasoning_type(name);
      if (!t) throw UsageError("unknown reasoning type in quotas: '" + name + "'");
      q[*t] = n;
    }
    sc.quotas = std::move(q);
  }
  try {
    sc.validate();
  } catch (const kgfact::Error& e) {
    throw UsageError(e.what());
  }
  return sc;
}

int cmd_synth(const RunConfig& cfg) {
  if (cfg.seeds.empty()) throw UsageError("no seeds file given");
  if (cfg.out.empty()) throw UsageError("no output directory given");
  const auto sc = synth_config(cfg);
  const auto kg = load_graph(cfg);
  const auto catalog = load_catalog(cfg);
  auto in = open_input(cfg.seeds);
  auto seeds = kgfact::read_seeds(in);
  std::cerr << "synth: " << seeds.size() << " seeds, " << stats_line(kg) << "\n";
  auto data = kgfact::generate_dataset(kg, std::move(seeds), catalog, sc);
  kgfact::Rng split_rng = kgfact::derive_rng(cfg.seed, "split");
  const auto split = kgfact::split_dataset(data.records, sc.split_ratios, split_rng);
  const fs::path out(cfg.out);
  const char* names[3] = {"train", "dev", "test"};
  for (std::size_t i = 0; i < 3; ++i) {
    write_atomic(out / (std::string(names[i]) + ".jsonl"), kgfact::write_records(split.records[i]));
  }
  write_atomic(out / "generation_report.json", data.report.to_json().dump(2) + "\n");
  write_atomic(out / "split_report.json", split.report().dump(2) + "\n");
  write_atomic(out / "config.json", cfg.to_json().dump(2) + "\n");
  for (const auto& [type, missing] : data.report.quota_shortfall) {
    std::cerr << "warning: quota for " << type << " short by " << missing << "\n";
  }
  std::cout << data.records.size() << " records, " << split.records[0].size() << " train, "
            << split.records[1].size() << " dev, " << split.records[2].size() << " test\n";
  return 0;
}

struct LoadedRecords {
  std::vector<kgfact::ClaimRecord> records;
  std::size_t malformed = 0;
};

LoadedRecords load_records(const std::string& path) {
  auto in = open_input(path);
  LoadedRecords out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (kgfact::trim(line).empty()) continue;
    try {
      out.records.push_back(kgfact::parse_record_line(line, line_no));
    } catch (const kgfact::Error& e) {
      ++out.malformed;
      std::cerr << "skipped: " << e.what() << "\n";
    }
  }
  return out;
}

int cmd_verify(const RunConfig& cfg, bool explain) {
  if (cfg.records.empty()) throw UsageError("no records file given");
  const auto kg = load_graph(cfg);
  const auto loaded = load_records(cfg.records);
  const auto opts = verify_options(cfg);
  std::size_t agree = 0;
  std::size_t failed = 0;
  for (const auto& r : loaded.records) {
    kgfact::Verdict v;
    try {
      v = kgfact::verify(kg, r.pattern, opts);
    } catch (const kgfact::ResourceError& e) {
      ++failed;
      std::cout << r.id << "\terror\t" << e.what() << "\n";
      continue;
    }
    const bool same = v.label == r.label;
    agree += same;
    std::cout << r.id << '\t' << kgfact::to_string(v.label) << '\t' << (same ? "agree" : "DISAGREE") << "\n";
    if (explain) std::cout << kgfact::explain(v) << "\n";
  }
  const std::size_t n = loaded.records.size();
  std::cout << n << " records";
  if (n) {
    std::ostringstream pct;
    pct.setf(std::ios::fixed);
    pct.precision(2);
    pct << 100.0 * static_cast<double>(agree) / static_cast<double>(n);
    std::cout << ", " << agree << " agree (" << pct.str() << "%), " << (n - agree - failed) << " disagree";
  }
  if (failed) std::cout << ", " << failed << " over budget";
  if (loaded.malformed) std::cout << ", " << loaded.malformed << " malformed";
  std::cout << "\n";
  return 0;
}

int cmd_retrieve(const RunConfig& cfg) {
  if (cfg.records.empty()) throw UsageError("no records file given");
  if (cfg.out.empty()) throw UsageError("no output directory given");
  if (cfg.predictor != "oracle" && cfg.predictor != "lexical") {
    throw UsageError("unknown predictor '" + cfg.predictor + "'");
  }
  const auto kg = load_graph(cfg);
  const auto loaded = load_records(cfg.records);
  std::unique_ptr<kgfact::ContextPredictor> predictor;
  if (cfg.predictor == "oracle") {
    predictor = std::make_unique<kgfact::OraclePredictor>();
  } else {
    predictor = std::make_unique<kgfact::LexicalPredictor>(kg, cfg.lexical_hops);
  }
  const kgfact::RetrieveOptions opts{cfg.sequence_cap, cfg.expansion_budget};
  const auto& records = loaded.records;
  std::vector<kgfact::RetrievalResult> results(records.size());
  const std::size_t threads = std::min(thread_count(cfg.threads), std::max<std::size_t>(1, records.size()));
  auto work = [&](std::size_t w) {
    for (std::size_t i = w; i < records.size(); i += threads) {
      kgfact::Rng rng = kgfact::derive_rng(cfg.seed, records[i].id + '#' + std::to_string(i));
      results[i] = kgfact::retrieve(kg, records[i], *predictor, rng, opts);
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < threads; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& t : pool) t.join();

  std::string evidence;
  ordered_json claims = ordered_json::array();
  std::size_t supported = 0;
  std::size_t supported_reached = 0;
  std::size_t with_gold = 0;
  std::size_t with_gold_reached = 0;
  std::size_t reached = 0;
  std::size_t truncated = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    evidence += "# " + records[i].id + "\n";
    const std::string body = kgfact::serialize_evidence(kg, results[i].paths);
    if (!body.empty()) evidence += body + "\n";
    evidence += "\n";
    claims.push_back(kgfact::retrieval_report(records[i], results[i]));
    const bool hit = results[i].any_reached();
    reached += hit;
    truncated += results[i].truncated();
    if (records[i].label == kgfact::Label::kSupported) {
      ++supported;
      supported_reached += hit;
      const bool gold = std::any_of(records[i].evidence.begin(), records[i].evidence.end(),
                                    [](const auto& kv) { return !kv.second.empty(); });
      with_gold += gold;
      with_gold_reached += gold && hit;
    }
  }
  ordered_json report;
  report["predictor"] = cfg.predictor;
  report["claims"] = records.size();
  report["reached"] = reached;
  report["supported"] = supported;
  report["supported_reached"] = supported_reached;
  report["supported_with_gold"] = with_gold;
  report["supported_with_gold_reached"] = with_gold_reached;
  report["truncated"] = truncated;
  report["malformed"] = loaded.malformed;
  report["per_claim"] = std::move(claims);
  const fs::path out(cfg.out);
  write_atomic(out / "evidence.txt", evidence);
  write_atomic(out / "retrieval_report.json", report.dump(2) + "\n");
  write_atomic(out / "config.json", cfg.to_json().dump(2) + "\n");
  std::cout << records.size() << " claims, " << reached << " reached another claim entity";
  if (supported) std::cout << ", supported reached " << supported_reached << "/" << supported;
  if (truncated) std::cout << ", " << truncated << " truncated";
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Knowledge-graph claim synthesis, verification and evidence retrieval"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> radius;
  std::string out;
  std::string predictor;
  std::string catalog;
  std::string type_relation;
  bool explain = false;
  std::string positional_a;
  std::string positional_b;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Master seed");
    sub->add_option("--type-relation", type_relation, "Relation naming entity types");
  };

  auto* ingest = app.add_subcommand("ingest", "Parse triples (TSV or N-Triples) into a snapshot");
  ingest->add_option("input", positional_a, "Triples file")->required();
  ingest->add_option("snapshot", positional_b, "Snapshot to write")->required();
  common(ingest);

  auto* stats = app.add_subcommand("stats", "Print graph statistics");
  stats->add_option("graph", positional_a, "Snapshot or triples file")->required();
  common(stats);

  auto* synth = app.add_subcommand("synth", "Synthesize and split a labeled claim dataset");
  synth->add_option("graph", positional_a, "Snapshot or triples file");
  synth->add_option("seeds", positional_b, "Seed pairs (JSONL)");
  synth->add_option("--out", out, "Output directory");
  synth->add_option("--radius", radius, "Minimum hop distance of substituted entities, exclusive");
  synth->add_option("--catalog", catalog, "Template catalog JSON");
  common(synth);

  auto* verify = app.add_subcommand("verify", "Re-verify the labels of a record file");
  verify->add_option("graph", positional_a, "Snapshot or triples file");
  verify->add_option("records", positional_b, "Claim records (JSONL)");
  verify->add_flag("--explain", explain, "Print the witness and per-edge checks");
  common(verify);

  auto* retrieve = app.add_subcommand("retrieve", "Retrieve evidence paths for claim records");
  retrieve->add_option("graph", positional_a, "Snapshot or triples file");
  retrieve->add_option("records", positional_b, "Claim records (JSONL)");
  retrieve->add_option("--out", out, "Output directory");
  retrieve->add_option("--predictor", predictor, "oracle or lexical");
  common(retrieve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
        cfg.merge(j);
      } catch (const nlohmann::json::exception& e) {
        throw UsageError("bad config " + config_path + ": " + e.what());
      }
    }
    if (seed) cfg.seed = *seed;
    if (radius) cfg.radius = *radius;
    if (!out.empty()) cfg.out = out;
    if (!predictor.empty()) cfg.predictor = predictor;
    if (!catalog.empty()) cfg.catalog = catalog;
    if (!type_relation.empty()) cfg.type_relation = type_relation;

    if (ingest->parsed()) return cmd_ingest(positional_a, positional_b, cfg);
    if (!positional_a.empty()) cfg.graph = positional_a;
    if (stats->parsed()) return cmd_stats(cfg);
    if (synth->parsed()) {
      if (!positional_b.empty()) cfg.seeds = positional_b;
      return cmd_synth(cfg);
    }
    if (!positional_b.empty()) cfg.records = positional_b;
    if (verify->parsed()) return cmd_verify(cfg, explain);
    if (retrieve->parsed()) return cmd_retrieve(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
