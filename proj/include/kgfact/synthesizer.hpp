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

// Labeled claim synthesis: entity/relation substitution, conjunction,
// existence, multi-hop generalisation, negation and presupposition wrappers,
// dataset assembly under quotas, and the triple-disjoint train/dev/test split.
//
// Every emitted record is re-verified; its stored label is the verifier's.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <unordered_set>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "kgfact/claim_model.hpp"
#include "kgfact/common.hpp"
#include "kgfact/kg_store.hpp"
#include "kgfact/templates.hpp"
#include "kgfact/verifier.hpp"

namespace kgfact {

struct SeedPair {
  std::string id;
  std::string text;
  std::vector<SourceTriple> triples;
};

inline SeedPair parse_seed_line(std::string_view line, std::size_t line_no) {
  try {
    const auto j = nlohmann::json::parse(line);
    SeedPair seed;
    seed.text = j.at("text").get<std::string>();
    for (const auto& t : j.at("triples")) {
      if (!t.is_array() || t.size() != 3) throw ParseError(line_no, "triple must have 3 elements");
      seed.triples.push_back({t[0].get<std::string>(), t[1].get<std::string>(), t[2].get<std::string>()});
    }
    if (seed.triples.empty()) throw ParseError(line_no, "seed has no triples");
    char buf[32];
    std::snprintf(buf, sizeof(buf), "seed-%06zu", line_no);
    seed.id = j.value("id", std::string(buf));
    return seed;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(line_no, e.what());
  }
}

inline std::vector<SeedPair> read_seeds(std::istream& in) {
  std::vector<SeedPair> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    out.push_back(parse_seed_line(line, line_no));
  }
  return out;
}

inline std::string seed_to_json_line(const SeedPair& seed) {
  nlohmann::ordered_json triples = nlohmann::ordered_json::array();
  for (const auto& t : seed.triples) triples.push_back({t.head, t.relation, t.tail});
  nlohmann::ordered_json j{{"id", seed.id}, {"text", seed.text}, {"triples", std::move(triples)}};
  return j.dump();
}

enum class NegationPlacement { kFirst, kSecond, kBoth };

inline std::string_view to_string(NegationPlacement p) {
  switch (p) {
    case NegationPlacement::kFirst: return "first";
    case NegationPlacement::kSecond: return "second";
    case NegationPlacement::kBoth: return "both";
  }
  return "?";
}

// How negate() placements are chosen during dataset generation.
enum class NegationPolicy { kUniform, kFirst, kSecond, kBoth, kAll };

enum class PresuppositionKind { kFactive, kNonFactive, kStructural };

inline std::string_view to_string(PresuppositionKind k) {
  switch (k) {
    case PresuppositionKind::kFactive: return "factive";
    case PresuppositionKind::kNonFactive: return "nonfactive";
    case PresuppositionKind::kStructural: return "structural";
  }
  return "?";
}

using Quotas = std::map<ReasoningType, std::size_t>;

struct SynthConfig {
  std::uint64_t seed = 0;
  std::size_t radius = 4;
  // Cap on (entity, type) pairs tried per substitution.
  std::size_t max_attempts = 64;
  // Per primary-tag record budget; nullopt means unlimited.
  std::optional<Quotas> quotas;
  std::array<double, 3> split_ratios{0.8, 0.1, 0.1};
  NegationPolicy negation_policy = NegationPolicy::kUniform;
  // Probability that a generated record also gets a presupposition variant.
  double presupposition_rate = 0.25;
  std::size_t threads = 1;
  VerifyOptions verify;

  void validate() const {
    const double sum = split_ratios[0] + split_ratios[1] + split_ratios[2];
    if (std::abs(sum - 1.0) > 1e-9) throw Error("split ratios must sum to 1");
    for (double r : split_ratios) {
      if (r < 0) throw Error("split ratios must be non-negative");
    }
    if (radius < 1) throw Error("radius must be at least 1");
    if (presupposition_rate < 0 || presupposition_rate > 1) {
      throw Error("presupposition rate must be in [0, 1]");
    }
  }
};

struct Skipped {
  std::string reason;
};

template <typename T>
using Synthesized = std::variant<T, Skipped>;

template <typename T>
bool ok(const Synthesized<T>& s) {
  return std::holds_alternative<T>(s);
}

// Final text gate on generated records; the default keeps everything.
using TextFilter = std::function<bool(const ClaimRecord&)>;

inline bool accept_all_text(const ClaimRecord&) { return true; }

// Picks the type name used when an entity is generalised to a variable.
using TypePicker = std::function<std::optional<std::string>(const KnowledgeGraph&, EntityId)>;

// Types of `e` ordered most specific first (fewest members), then by name.
inline std::vector<std::string> types_by_specificity(const KnowledgeGraph& kg, EntityId e) {
  auto types = kg.entity_types(e);
  std::stable_sort(types.begin(), types.end(), [&](const std::string& a, const std::string& b) {
    return kg.type_members(a).size() < kg.type_members(b).size();
  });
  return types;
}

inline std::optional<std::string> most_specific_type(const KnowledgeGraph& kg, EntityId e) {
  auto types = types_by_specificity(kg, e);
  if (types.empty()) return std::nullopt;
  return types.front();
}

// Nodes in first-seen order, one edge per triple.
inline ClaimPattern pattern_from_triples(const std::vector<SourceTriple>& triples) {
  std::vector<ClaimNode> nodes;
  std::map<std::string, std::size_t> index;
  auto node = [&](const std::string& name) {
    auto [it, inserted] = index.emplace(name, nodes.size());
    if (inserted) nodes.emplace_back(GroundedNode{name});
    return it->second;
  };
  std::vector<ClaimEdge> edges;
  for (const auto& t : triples) {
    const auto h = node(t.head);
    const auto tl = node(t.tail);
    edges.push_back({h, t.relation, tl, false});
  }
  return build_pattern(std::move(nodes), std::move(edges));
}

// Renders a pattern as one sentence of declarative clauses. Variables read
// "a <type>" on first mention and "that <type>" afterwards.
inline std::string render_pattern_text(const ClaimPattern& pattern, const TemplateCatalog& catalog) {
  std::vector<bool> mentioned(pattern.nodes().size(), false);
  auto mention = [&](std::size_t i) {
    const auto& n = pattern.nodes()[i];
    if (const auto* g = std::get_if<GroundedNode>(&n)) return surface_form(g->entity);
    const auto& v = std::get<VariableNode>(n);
    const std::string words = v.type_name ? type_words(*v.type_name) : "something";
    const bool first = !mentioned[i];
    mentioned[i] = true;
    if (!v.type_name) return words;
    return first ? with_article(words) : "that " + words;
  };
  std::vector<std::string> clauses;
  for (const auto& e : pattern.edges()) {
    // Mention order follows the clause's own word order.
    const auto& phrase = catalog.phrases.find(e.relation);
    const bool tail_first =
        phrase != catalog.phrases.end() && phrase->second.positive.find("{tail}") <
                                               phrase->second.positive.find("{head}");
    std::string head;
    std::string tail;
    if (tail_first) {
      tail = mention(e.dst);
      head = mention(e.src);
    } else {
      head = mention(e.src);
      tail = mention(e.dst);
    }
    clauses.push_back(render_clause(catalog, head, e.relation, tail, e.negated));
  }
  std::string text = join(clauses, ", and ") + ".";
  text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
  return text;
}

namespace detail {

inline std::string describe(const Label l) { return std::string(to_string(l)); }

// Fills evidence and label from the verifier; rejects when an expected label
// is not met or an entity's surface form is missing from the text.
inline Synthesized<ClaimRecord> finalize(const KnowledgeGraph& kg, ClaimRecord record,
                                         std::optional<Label> expected, const SynthConfig& cfg) {
  for (const auto& entity : record.pattern.grounded_entities()) {
    if (!contains_whole(record.text, surface_form(entity))) {
      return Skipped{"entity surface form missing from text"};
    }
  }
  record.evidence = derive_evidence(record.pattern);
  Verdict verdict;
  try {
    verdict = verify(kg, record.pattern, cfg.verify);
  } catch (const ResourceError&) {
    return Skipped{"verification budget exceeded"};
  }
  record.label = verdict.label;
  if (expected && *expected != verdict.label) {
    return Skipped{"verified " + describe(verdict.label) + ", expected " + describe(*expected)};
  }
  return record;
}

inline std::vector<std::size_t> shuffled_indexes(std::size_t n, Rng& rng) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  shuffle(idx, rng);
  return idx;
}

}  // namespace detail

// Supported one-hop or conjunction record straight from a seed.
inline Synthesized<ClaimRecord> make_seed_record(const KnowledgeGraph& kg, const SeedPair& seed,
                                                 const SynthConfig& cfg = {}) {
  ClaimRecord r;
  try {
    r.pattern = pattern_from_triples(seed.triples);
  } catch (const PatternError& e) {
    return Skipped{std::string("seed pattern invalid: ") + e.what()};
  }
  r.id = seed.id + "/base";
  r.text = seed.text;
  r.source_triples = seed.triples;
  auto out = detail::finalize(kg, std::move(r), Label::kSupported, cfg);
  if (!ok(out)) {
    auto& reason = std::get<Skipped>(out).reason;
    if (reason.starts_with("verified")) reason = "seed not supported by graph";
  }
  return out;
}

// Replaces one grounded entity by a same-typed entity farther than
// cfg.radius hops from every entity of the claim and its source triples.
inline Synthesized<ClaimRecord> substitute_entity(const KnowledgeGraph& kg, const ClaimRecord& record,
                                                  Rng& rng, const SynthConfig& cfg = {}) {
  std::set<std::string> originals;
  for (const auto& e : record.pattern.grounded_entities()) originals.insert(e);
  for (const auto& t : record.source_triples) {
    originals.insert(t.head);
    originals.insert(t.tail);
  }
  std::unordered_set<std::uint32_t> near;
  for (const auto& name : originals) {
    if (const auto id = kg.find_entity(name)) {
      for (EntityId e : kg.within_hops(*id, cfg.radius)) near.insert(index_of(e));
    }
  }
  const auto& nodes = record.pattern.nodes();
  std::size_t attempts = 0;
  std::string reason = "no grounded entity to substitute";
  for (std::size_t i : detail::shuffled_indexes(nodes.size(), rng)) {
    const auto* g = std::get_if<GroundedNode>(&nodes[i]);
    if (!g) continue;
    const std::string surface = surface_form(g->entity);
    if (!contains_whole(record.text, surface)) {
      reason = "entity surface form missing from text";
      continue;
    }
    const auto id = kg.find_entity(g->entity);
    if (!id) {
      reason = "entity not in graph";
      continue;
    }
    reason = "no same-type entity outside radius";
    for (const auto& type : types_by_specificity(kg, *id)) {
      if (attempts++ >= cfg.max_attempts) return Skipped{"substitution attempts exhausted"};
      auto accept = [&](EntityId cand) {
        if (near.contains(index_of(cand))) return false;
        const auto& name = kg.entity_name(cand);
        return !originals.contains(name) && !contains_whole(record.text, surface_form(name));
      };
      const auto pick = kg.sample_entity(type, accept, rng);
      if (!pick) continue;
      const std::string& replacement = kg.entity_name(*pick);
      std::vector<ClaimNode> new_nodes = nodes;
      new_nodes[i] = GroundedNode{replacement};
      ClaimRecord out = record;
      out.pattern = with_nodes(record.pattern, std::move(new_nodes));
      replace_whole(out.text, surface, surface_form(replacement));
      out.id = record.id + "/sub-entity";
      return detail::finalize(kg, std::move(out), Label::kRefuted, cfg);
    }
  }
  return Skipped{reason};
}

inline Synthesized<ClaimRecord> substitute_entity(const KnowledgeGraph& kg, const SeedPair& seed, Rng& rng,
                                                  const SynthConfig& cfg = {}) {
  auto base = make_seed_record(kg, seed, cfg);
  if (!ok(base)) return base;
  return substitute_entity(kg, std::get<ClaimRecord>(base), rng, cfg);
}

// Swaps the relation of a one-hop record for one from another set of the
// same substitution group, provided the swapped triple is absent.
inline Synthesized<ClaimRecord> substitute_relation(const KnowledgeGraph& kg, const ClaimRecord& record,
                                                    const TemplateCatalog& catalog, Rng& rng,
                                                    const SynthConfig& cfg = {}) {
  if (record.pattern.kind() != ReasoningType::kOneHop || record.pattern.has_negation()) {
    return Skipped{"relation substitution needs a plain one-hop claim"};
  }
  const auto& edge = record.pattern.edges().front();
  const auto pos = catalog.substitution_position(edge.relation);
  if (!pos) return Skipped{"relation not in any substitution group"};
  std::vector<std::string> options;
  const auto& sets = catalog.substitution_groups[pos->group].sets;
  for (std::size_t s = 0; s < sets.size(); ++s) {
    if (s == pos->set) continue;
    options.insert(options.end(), sets[s].begin(), sets[s].end());
  }
  if (options.empty()) return Skipped{"substitution group has a single relation set"};
  shuffle(options, rng);
  const auto& head = std::get<GroundedNode>(record.pattern.nodes()[edge.src]).entity;
  const auto& tail = std::get<GroundedNode>(record.pattern.nodes()[edge.dst]).entity;
  const auto h = kg.find_entity(head);
  const auto t = kg.find_entity(tail);
  for (const auto& rel : options) {
    const auto r = kg.find_relation(rel);
    if (h && t && r && kg.triple_exists(*h, *r, *t)) continue;
    auto edges = record.pattern.edges();
    edges.front().relation = rel;
    ClaimRecord out = record;
    out.pattern = with_edges(record.pattern, std::move(edges));
    out.text = render_clause(catalog, surface_form(head), rel, surface_form(tail), false) + ".";
    out.id = record.id + "/sub-relation";
    return detail::finalize(kg, std::move(out), Label::kRefuted, cfg);
  }
  return Skipped{"every swapped triple exists"};
}

// Supported conjunction from a multi-triple seed.
inline Synthesized<ClaimRecord> make_conjunction(const KnowledgeGraph& kg, const SeedPair& seed,
                                                 const SynthConfig& cfg = {}) {
  if (seed.triples.size() < 2) throw PatternError("not a conjunction: seed has a single triple");
  return make_seed_record(kg, seed, cfg);
}

namespace detail {

inline ClaimRecord existence_record(const ClaimRecord& proto, const std::string& entity,
                                    const std::string& relation, ExistenceSide side, bool negated,
                                    const ExistenceTemplate& family, std::string id) {
  ClaimRecord r = proto;
  std::vector<ClaimNode> nodes{GroundedNode{entity}, VariableNode{0, std::nullopt}};
  std::vector<ClaimEdge> edges;
  if (side == ExistenceSide::kHead) {
    edges.push_back({0, relation, 1, negated});
  } else {
    edges.push_back({1, relation, 0, negated});
  }
  r.pattern = build_pattern(std::move(nodes), std::move(edges), ReasoningType::kExistence);
  const std::string slot = side == ExistenceSide::kHead ? "head" : "tail";
  r.text = fill_template(negated ? family.negative : family.positive,
                         {{slot, surface_form(entity)}, {"relation", relation_words(relation)}});
  r.id = std::move(id);
  return r;
}

}  // namespace detail

// Existence claims from one triple: the true (entity, relation) pair and an
// absent pair for the same entity, each with positive and negative templates.
inline Synthesized<std::vector<ClaimRecord>> make_existence(const KnowledgeGraph& kg, const SourceTriple& triple,
                                                            const TemplateCatalog& catalog, Rng& rng,
                                                            const SynthConfig& cfg = {},
                                                            std::string id_prefix = "") {
  const auto match = catalog.existence_family(triple.relation);
  if (!match) return Skipped{"relation not among existence relations"};
  const ExistenceSide side = match->side;
  const std::string& entity = side == ExistenceSide::kHead ? triple.head : triple.tail;
  if (id_prefix.empty()) id_prefix = entity + "/" + triple.relation;
  ClaimRecord proto;
  proto.source_triples = {triple};
  std::vector<ClaimRecord> out;
  auto emit = [&](const std::string& rel, bool negated, std::optional<Label> expected, const char* tag) {
    auto rec = detail::finalize(
        kg, detail::existence_record(proto, entity, rel, side, negated, *match->family,
                                     id_prefix + "/" + tag),
        expected, cfg);
    if (ok(rec)) out.push_back(std::move(std::get<ClaimRecord>(rec)));
  };
  emit(triple.relation, false, Label::kSupported, "exist");
  emit(triple.relation, true, Label::kRefuted, "exist-neg");

  // Another relation of the same template family that the entity lacks.
  const auto id = kg.find_entity(entity);
  std::vector<std::string> absent;
  for (const auto& rel : match->family->relations) {
    if (rel == triple.relation) continue;
    const auto r = kg.find_relation(rel);
    bool has = false;
    if (id && r) {
      has = side == ExistenceSide::kHead ? !kg.out_edges(*id, *r).empty() : !kg.in_edges(*id, *r).empty();
    }
    if (!has) absent.push_back(rel);
  }
  if (!absent.empty()) {
    const auto& rel = absent[uniform_index(rng, absent.size())];
    emit(rel, false, Label::kRefuted, "absent");
    emit(rel, true, Label::kSupported, "absent-neg");
  }
  if (out.empty()) return Skipped{"existence claims failed verification"};
  return out;
}

// Generalises an internal entity (one joining two or more edges) of a
// Supported conjunction into a typed variable.
inline Synthesized<ClaimRecord> make_multihop(const KnowledgeGraph& kg, const ClaimRecord& record,
                                              const TypePicker& type_picker, Rng& rng,
                                              const SynthConfig& cfg = {}) {
  if (record.pattern.kind() != ReasoningType::kConjunction || record.pattern.has_negation()) {
    return Skipped{"multi-hop needs a plain conjunction"};
  }
  const auto& nodes = record.pattern.nodes();
  std::vector<std::size_t> degree(nodes.size(), 0);
  for (const auto& e : record.pattern.edges()) {
    ++degree[e.src];
    ++degree[e.dst];
  }
  std::string reason = "no internal node";
  for (std::size_t i : detail::shuffled_indexes(nodes.size(), rng)) {
    if (degree[i] < 2) continue;
    const auto& entity = std::get<GroundedNode>(nodes[i]).entity;
    const auto id = kg.find_entity(entity);
    const auto type = id ? type_picker(kg, *id) : std::nullopt;
    if (!type) {
      reason = "internal entity has no type";
      continue;
    }
    ClaimRecord out = record;
    if (replace_whole(out.text, surface_form(entity), with_article(type_words(*type))) == 0) {
      reason = "entity surface form missing from text";
      continue;
    }
    std::vector<ClaimNode> new_nodes = nodes;
    new_nodes[i] = VariableNode{0, *type};
    out.pattern = build_pattern(std::move(new_nodes), record.pattern.edges(), ReasoningType::kMultiHop);
    out.id = record.id + "/multihop";
    return detail::finalize(kg, std::move(out), Label::kSupported, cfg);
  }
  return Skipped{reason};
}

// Negates the first, second or both relations; the label comes from the
// verifier. Single-edge claims accept only kFirst.
inline Synthesized<ClaimRecord> negate(const KnowledgeGraph& kg, const ClaimRecord& record,
                                       NegationPlacement placement, const TemplateCatalog& catalog,
                                       const SynthConfig& cfg = {}) {
  const auto& p = record.pattern;
  if (p.has_negation()) return Skipped{"already negated"};
  if (p.inverted() || record.style != Style::kWritten) return Skipped{"presupposition records are not negated"};
  const std::size_t n = p.edges().size();
  if (n > 2 || (n == 1 && placement != NegationPlacement::kFirst)) {
    throw PatternError("unsupported negation placement '" + std::string(to_string(placement)) + "' for " +
                       std::to_string(n) + "-edge pattern");
  }
  auto edges = p.edges();
  if (placement != NegationPlacement::kSecond) edges[0].negated = true;
  if (placement != NegationPlacement::kFirst) edges[1].negated = true;
  ClaimRecord out = record;
  out.pattern = with_edges(p, std::move(edges));
  if (p.kind() == ReasoningType::kExistence) {
    const auto& e = out.pattern.edges().front();
    const auto match = catalog.existence_family(e.relation);
    if (!match) return Skipped{"relation not among existence relations"};
    const auto& entity = std::get<GroundedNode>(p.nodes()[e.src == 0 ? e.src : e.dst]).entity;
    const std::string slot = match->side == ExistenceSide::kHead ? "head" : "tail";
    out.text = fill_template(match->family->negative,
                             {{slot, surface_form(entity)}, {"relation", relation_words(e.relation)}});
  } else {
    out.text = render_pattern_text(out.pattern, catalog);
  }
  out.id = record.id + "/neg-" + std::string(to_string(placement));
  return detail::finalize(kg, std::move(out), std::nullopt, cfg);
}

// Wraps a claim in a presupposition. Factive and structural wrappers keep the
// label; non-factive ones invert the pattern and so the label.
inline Synthesized<ClaimRecord> wrap_presupposition(const KnowledgeGraph& kg, const ClaimRecord& record,
                                                    PresuppositionKind kind, const TemplateCatalog& catalog,
                                                    Rng& rng, const SynthConfig& cfg = {}) {
  if (record.style != Style::kWritten) return Skipped{"already wrapped"};
  ClaimRecord out = record;
  out.style = Style::kColloquialPresup;
  out.id = record.id + "/presup-" + std::string(to_string(kind));
  Label expected = record.label;
  const auto pick = [&](const std::vector<std::string>& list) -> const std::string& {
    return list[uniform_index(rng, list.size())];
  };
  switch (kind) {
    case PresuppositionKind::kFactive:
      out.text = fill_template(pick(catalog.factive), {{"claim", embedded_claim(record.text)}});
      break;
    case PresuppositionKind::kNonFactive:
      out.text = fill_template(pick(catalog.non_factive), {{"claim", embedded_claim(record.text)}});
      out.pattern = with_inverted(record.pattern, !record.pattern.inverted());
      expected = invert(record.label);
      break;
    case PresuppositionKind::kStructural: {
      const auto& p = record.pattern;
      const bool shape_ok = p.kind() == ReasoningType::kOneHop || p.kind() == ReasoningType::kExistence;
      if (!shape_ok || p.has_negation() || p.inverted()) {
        return Skipped{"structural presupposition needs a plain one-hop or existence claim"};
      }
      const auto& e = p.edges().front();
      const auto name = [&](std::size_t node) {
        const auto* g = std::get_if<GroundedNode>(&p.nodes()[node]);
        return g ? surface_form(g->entity) : std::string();
      };
      const std::string words = relation_words(e.relation);
      if (p.kind() == ReasoningType::kOneHop) {
        const auto* t = catalog.structural_for(e.relation, catalog.structural_one_hop);
        if (!t) return Skipped{"no structural template for relation"};
        out.text = fill_template(t->question, {{"head", name(e.src)}, {"tail", name(e.dst)}, {"relation", words}});
      } else if (!is_variable(p.nodes()[e.src])) {
        const auto* t = catalog.structural_for(e.relation, catalog.structural_head_existence);
        if (!t) return Skipped{"no structural template for relation"};
        out.text = fill_template(t->question, {{"head", name(e.src)}, {"relation", words}});
      } else {
        const auto match = catalog.existence_family(e.relation);
        if (!match || match->side != ExistenceSide::kTail || catalog.structural_tail_existence.empty()) {
          return Skipped{"no structural template for relation"};
        }
        out.text = fill_template(pick(catalog.structural_tail_existence),
                                 {{"tail", name(e.dst)}, {"Relation", title_case(words)}});
      }
      break;
    }
  }
  return detail::finalize(kg, std::move(out), expected, cfg);
}

// ---- dataset assembly -------------------------------------------------------

struct GenerationReport {
  std::size_t seeds = 0;
  std::size_t candidates = 0;
  std::size_t duplicates = 0;
  std::map<std::string, std::size_t> skips;
  // primary type -> style -> label -> count
  std::map<std::string, std::map<std::string, std::map<std::string, std::size_t>>> counts;
  std::map<std::string, std::size_t> quota_shortfall;

  void skip(const std::string& reason) { ++skips[reason]; }

  void merge_skips(const GenerationReport& other) {
    for (const auto& [reason, n] : other.skips) skips[reason] += n;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["seeds"] = seeds;
    j["candidates"] = candidates;
    j["duplicates"] = duplicates;
    j["counts"] = counts;
    j["skips"] = skips;
    j["quota_shortfall"] = quota_shortfall;
    return j;
  }
};

struct Dataset {
  std::vector<ClaimRecord> records;
  GenerationReport report;
};

namespace detail {

inline std::vector<NegationPlacement> placements_for(std::size_t edges, NegationPolicy policy, Rng& rng) {
  if (edges == 1) return {NegationPlacement::kFirst};
  if (edges != 2) return {};
  switch (policy) {
    case NegationPolicy::kFirst: return {NegationPlacement::kFirst};
    case NegationPolicy::kSecond: return {NegationPlacement::kSecond};
    case NegationPolicy::kBoth: return {NegationPlacement::kBoth};
    case NegationPolicy::kAll:
      return {NegationPlacement::kFirst, NegationPlacement::kSecond, NegationPlacement::kBoth};
    case NegationPolicy::kUniform: {
      static constexpr std::array<NegationPlacement, 3> all{
          NegationPlacement::kFirst, NegationPlacement::kSecond, NegationPlacement::kBoth};
      return {all[uniform_index(rng, all.size())]};
    }
  }
  return {};
}

// All candidate records for one seed, in a fixed order.
inline std::vector<ClaimRecord> seed_candidates(const KnowledgeGraph& kg, const SeedPair& seed,
                                                const TemplateCatalog& catalog, const SynthConfig& cfg,
                                                const TypePicker& type_picker, GenerationReport& report) {
  Rng rng = derive_rng(cfg.seed, seed.id);
  std::vector<ClaimRecord> out;
  auto take = [&](Synthesized<ClaimRecord> s) -> const ClaimRecord* {
    if (!ok(s)) {
      report.skip(std::get<Skipped>(s).reason);
      return nullptr;
    }
    out.push_back(std::move(std::get<ClaimRecord>(s)));
    return &out.back();
  };
  auto base_s = make_seed_record(kg, seed, cfg);
  if (!ok(base_s)) {
    report.skip(std::get<Skipped>(base_s).reason);
    return out;
  }
  const ClaimRecord base = std::get<ClaimRecord>(base_s);
  out.push_back(base);

  // Records that get negated variants; copies, since `out` reallocates.
  std::vector<ClaimRecord> negatable{base};
  if (const auto* r = take(substitute_entity(kg, base, rng, cfg))) negatable.push_back(*r);
  if (base.pattern.kind() == ReasoningType::kOneHop) {
    if (const auto* r = take(substitute_relation(kg, base, catalog, rng, cfg))) negatable.push_back(*r);
  } else {
    if (const auto* m = take(make_multihop(kg, base, type_picker, rng, cfg))) {
      const ClaimRecord multi = *m;
      negatable.push_back(multi);
      if (const auto* r = take(substitute_entity(kg, multi, rng, cfg))) negatable.push_back(*r);
    }
  }
  for (const auto& rec : negatable) {
    for (NegationPlacement p : placements_for(rec.pattern.edges().size(), cfg.negation_policy, rng)) {
      take(negate(kg, rec, p, catalog, cfg));
    }
  }
  for (std::size_t i = 0; i < seed.triples.size(); ++i) {
    const auto& t = seed.triples[i];
    if (!catalog.existence_family(t.relation)) continue;
    auto ex = make_existence(kg, t, catalog, rng, cfg, seed.id + "/t" + std::to_string(i));
    if (!ok(ex)) {
      report.skip(std::get<Skipped>(ex).reason);
      continue;
    }
    for (auto& r : std::get<std::vector<ClaimRecord>>(ex)) out.push_back(std::move(r));
  }
  const std::size_t plain = out.size();
  for (std::size_t i = 0; i < plain; ++i) {
    if (uniform_unit(rng) >= cfg.presupposition_rate) continue;
    std::vector<PresuppositionKind> kinds{PresuppositionKind::kFactive, PresuppositionKind::kNonFactive};
    const auto& p = out[i].pattern;
    if ((p.kind() == ReasoningType::kOneHop || p.kind() == ReasoningType::kExistence) && !p.has_negation()) {
      kinds.push_back(PresuppositionKind::kStructural);
    }
    const ClaimRecord source = out[i];
    take(wrap_presupposition(kg, source, kinds[uniform_index(rng, kinds.size())], catalog, rng, cfg));
  }
  return out;
}

}  // namespace detail

// Builds a dataset from seeds (processed in id order) until every quota is
// met or the seeds run out. Candidate generation per seed uses its own RNG
// stream, so the result does not depend on cfg.threads.
inline Dataset generate_dataset(const KnowledgeGraph& kg, std::vector<SeedPair> seeds,
                                const TemplateCatalog& catalog, const SynthConfig& cfg,
                                TypePicker type_picker = most_specific_type,
                                TextFilter text_filter = accept_all_text) {
  cfg.validate();
  Dataset data;
  std::sort(seeds.begin(), seeds.end(), [](const SeedPair& a, const SeedPair& b) { return a.id < b.id; });
  std::map<ReasoningType, std::size_t> filled;
  auto room = [&](ReasoningType t) {
    if (!cfg.quotas) return true;
    const auto it = cfg.quotas->find(t);
    return it != cfg.quotas->end() && filled[t] < it->second;
  };
  auto all_full = [&] {
    if (!cfg.quotas) return false;
    for (const auto& [t, q] : *cfg.quotas) {
      if (filled[t] < q) return false;
    }
    return true;
  };
  std::set<std::string> seen;
  const std::size_t threads = std::max<std::size_t>(1, cfg.threads);
  const std::size_t chunk = threads * 8;
  for (std::size_t begin = 0; begin < seeds.size() && !all_full(); begin += chunk) {
    const std::size_t end = std::min(seeds.size(), begin + chunk);
    std::vector<std::vector<ClaimRecord>> produced(end - begin);
    std::vector<GenerationReport> reports(end - begin);
    auto work = [&](std::size_t worker) {
      for (std::size_t i = begin + worker; i < end; i += threads) {
        produced[i - begin] =
            detail::seed_candidates(kg, seeds[i], catalog, cfg, type_picker, reports[i - begin]);
      }
    };
    if (threads == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(work, w);
      for (auto& t : pool) t.join();
    }
    for (std::size_t i = 0; i < produced.size(); ++i) {
      ++data.report.seeds;
      data.report.merge_skips(reports[i]);
      for (auto& rec : produced[i]) {
        ++data.report.candidates;
        if (!text_filter(rec)) {
          data.report.skip("rejected by text filter");
          continue;
        }
        const ReasoningType bucket = rec.tags().primary();
        if (!room(bucket)) continue;
        const std::string key = rec.text + '\x1f' + pattern_to_json(rec.pattern).dump();
        if (!seen.insert(key).second) {
          ++data.report.duplicates;
          continue;
        }
        ++filled[bucket];
        ++data.report.counts[std::string(to_string(bucket))][std::string(to_string(rec.style))]
                            [std::string(to_string(rec.label))];
        data.records.push_back(std::move(rec));
      }
    }
  }
  if (cfg.quotas) {
    for (const auto& [t, q] : *cfg.quotas) {
      if (filled[t] < q) data.report.quota_shortfall[std::string(to_string(t))] = q - filled[t];
    }
  }
  return data;
}

// ---- split ------------------------------------------------------------------

struct DatasetSplit {
  std::array<std::vector<ClaimRecord>, 3> records;  // train, dev, test
  std::array<std::vector<SourceTriple>, 3> triples;
  std::size_t dropped_cross_split = 0;
  std::size_t dropped_no_triples = 0;

  nlohmann::ordered_json report() const {
    nlohmann::ordered_json j;
    const char* names[3] = {"train", "dev", "test"};
    for (int i = 0; i < 3; ++i) {
      j[names[i]] = {{"triples", triples[i].size()}, {"records", records[i].size()}};
    }
    j["dropped_cross_split"] = dropped_cross_split;
    j["dropped_no_triples"] = dropped_no_triples;
    return j;
  }
};

// Split sizes for n items: floors of the exact shares, remainder handed out
// by largest fractional part (ties to the earlier split).
inline std::array<std::size_t, 3> split_sizes(std::size_t n, const std::array<double, 3>& ratios) {
  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> frac{};
  std::size_t used = 0;
  for (int i = 0; i < 3; ++i) {
    const double exact = static_cast<double>(n) * ratios[static_cast<std::size_t>(i)];
    sizes[static_cast<std::size_t>(i)] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    frac[static_cast<std::size_t>(i)] = exact - static_cast<double>(sizes[static_cast<std::size_t>(i)]);
    used += sizes[static_cast<std::size_t>(i)];
  }
  while (used < n) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < 3; ++i) {
      if (frac[i] > frac[best] + 1e-12) best = i;
    }
    ++sizes[best];
    frac[best] = -1;
    ++used;
  }
  return sizes;
}

// Partitions the records' source triples by ratio and assigns each record to
// the split holding all of its triples; records spanning splits are dropped.
inline DatasetSplit split_dataset(const std::vector<ClaimRecord>& records, const std::array<double, 3>& ratios,
                                  Rng& rng) {
  std::set<SourceTriple> universe;
  for (const auto& r : records) universe.insert(r.source_triples.begin(), r.source_triples.end());
  std::vector<SourceTriple> order(universe.begin(), universe.end());
  shuffle(order, rng);
  const auto sizes = split_sizes(order.size(), ratios);
  DatasetSplit out;
  std::map<SourceTriple, std::size_t> where;
  std::size_t next = 0;
  for (std::size_t s = 0; s < 3; ++s) {
    for (std::size_t k = 0; k < sizes[s]; ++k, ++next) {
      where[order[next]] = s;
      out.triples[s].push_back(order[next]);
    }
    std::sort(out.triples[s].begin(), out.triples[s].end());
  }
  for (const auto& r : records) {
    std::set<std::size_t> splits;
    for (const auto& t : r.source_triples) splits.insert(where.at(t));
    if (splits.empty()) {
      ++out.dropped_no_triples;
    } else if (splits.size() > 1) {
      ++out.dropped_cross_split;
    } else {
      out.records[*splits.begin()].push_back(r);
    }
  }
  return out;
}

// The graph plays no part in the split; this overload keeps the pipeline's
// (records, graph, ratios, rng) call shape.
inline DatasetSplit split_dataset(const std::vector<ClaimRecord>& records, const KnowledgeGraph&,
                                  const std::array<double, 3>& ratios, Rng& rng) {
  return split_dataset(records, ratios, rng);
}

}  // namespace kgfact
