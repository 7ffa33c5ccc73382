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

// Evidence retrieval: a predictor proposes a relation set and hop bound per
// claim entity; every ordered relation sequence is walked from the entity and
// paths reaching another claim entity are kept.

#include <algorithm>
#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "kgfact/claim_model.hpp"
#include "kgfact/common.hpp"
#include "kgfact/kg_store.hpp"

namespace kgfact {

struct RetrievalContext {
  std::vector<DirectedRelation> relations;
  std::size_t max_hops = 1;
};

struct SequenceEnumeration {
  std::vector<RelationPath> sequences;
  bool truncated = false;
};

inline std::size_t sequence_count(std::size_t relations, std::size_t max_hops) {
  std::size_t total = 0;
  std::size_t power = 1;
  for (std::size_t k = 1; k <= max_hops; ++k) {
    power *= relations;
    total += power;
  }
  return total;
}

// All sequences over the (deduplicated, sorted) relation set of length
// 1..max_hops, shorter first, lexicographic within a length.
inline SequenceEnumeration enumerate_sequences(const RetrievalContext& ctx, std::size_t cap) {
  if (cap < 1) throw Error("sequence cap must be at least 1");
  std::vector<DirectedRelation> rels = ctx.relations;
  std::sort(rels.begin(), rels.end());
  rels.erase(std::unique(rels.begin(), rels.end()), rels.end());
  SequenceEnumeration out;
  if (rels.empty()) return out;
  for (std::size_t len = 1; len <= ctx.max_hops; ++len) {
    std::vector<std::size_t> digits(len, 0);
    while (true) {
      if (out.sequences.size() == cap) {
        out.truncated = true;
        return out;
      }
      RelationPath path;
      path.reserve(len);
      for (std::size_t d : digits) path.push_back(rels[d]);
      out.sequences.push_back(std::move(path));
      std::size_t pos = len;
      while (pos > 0 && ++digits[pos - 1] == rels.size()) digits[--pos] = 0;
      if (pos == 0) break;
    }
  }
  return out;
}

struct EvidencePath {
  EntityId start{};
  std::vector<Triple> triples;
  EntityId terminal{};
  bool reached_other_claim_entity = false;

  RelationPath sequence() const {
    RelationPath seq;
    EntityId at = start;
    for (const Triple& t : triples) {
      const bool inverse = t.head != at;
      seq.push_back({t.relation, inverse});
      at = inverse ? t.head : t.tail;
    }
    return seq;
  }
};

class ContextPredictor {
 public:
  virtual ~ContextPredictor() = default;
  virtual std::string_view name() const = 0;
  virtual RetrievalContext predict(const KnowledgeGraph& kg, const ClaimRecord& record,
                                   std::string_view entity) const = 0;
};

// Reads the record's gold evidence for the entity.
class OraclePredictor final : public ContextPredictor {
 public:
  std::string_view name() const override { return "oracle"; }

  RetrievalContext predict(const KnowledgeGraph& kg, const ClaimRecord& record,
                           std::string_view entity) const override {
    RetrievalContext ctx;
    ctx.max_hops = 0;
    const auto it = record.evidence.find(std::string(entity));
    if (it == record.evidence.end()) return ctx;
    std::set<DirectedRelation> rels;
    for (const auto& path : it->second) {
      const auto resolved = resolve_path(kg, path);
      if (!resolved) continue;
      rels.insert(resolved->begin(), resolved->end());
      ctx.max_hops = std::max(ctx.max_hops, resolved->size());
    }
    ctx.relations.assign(rels.begin(), rels.end());
    return ctx;
  }
};

// Relations whose identifier words all occur as whole words in the claim
// text, in both directions.
class LexicalPredictor final : public ContextPredictor {
 public:
  explicit LexicalPredictor(const KnowledgeGraph& kg, std::size_t max_hops = 2) : max_hops_(max_hops) {
    for (std::uint32_t r = 0; r < kg.num_relations(); ++r) {
      const auto id = static_cast<RelationId>(r);
      if (kg.type_relation() == id) continue;
      auto words = split_identifier(kg.relation_name(id));
      if (!words.empty()) words_.push_back({id, std::move(words)});
    }
  }

  std::string_view name() const override { return "lexical"; }

  RetrievalContext predict(const KnowledgeGraph&, const ClaimRecord& record, std::string_view) const override {
    std::string text;
    text.reserve(record.text.size());
    for (char c : record.text) text.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    RetrievalContext ctx;
    ctx.max_hops = max_hops_;
    for (const auto& [id, words] : words_) {
      const bool all = std::all_of(words.begin(), words.end(),
                                   [&](const std::string& w) { return contains_whole(text, w); });
      if (!all) continue;
      ctx.relations.push_back({id, false});
      ctx.relations.push_back({id, true});
    }
    return ctx;
  }

 private:
  struct Entry {
    RelationId id;
    std::vector<std::string> words;
  };
  std::size_t max_hops_;
  std::vector<Entry> words_;
};

struct RetrieveOptions {
  std::size_t sequence_cap = 100000;
  std::size_t expansion_budget = 100000;
};

struct EntityRetrieval {
  std::string entity;
  std::size_t sequences_tried = 0;
  std::size_t paths_realized = 0;
  std::size_t reached = 0;
  bool truncated = false;
};

struct RetrievalResult {
  std::vector<EvidencePath> paths;
  std::vector<EntityRetrieval> entities;

  bool truncated() const {
    return std::any_of(entities.begin(), entities.end(), [](const EntityRetrieval& e) { return e.truncated; });
  }
  bool any_reached() const {
    return std::any_of(paths.begin(), paths.end(),
                       [](const EvidencePath& p) { return p.reached_other_claim_entity; });
  }
};

namespace detail {

class PathWalker {
 public:
  PathWalker(const KnowledgeGraph& kg, const std::set<EntityId>& targets, std::size_t budget)
      : kg_(kg), targets_(targets), budget_(budget) {}

  // Calls `sink` for every instantiation of `seq` from `start`. Returns false
  // once the expansion budget is exhausted.
  template <typename Sink>
  bool walk(EntityId start, const RelationPath& seq, Sink&& sink) {
    std::vector<Triple> stack;
    return step(start, start, seq, 0, stack, sink);
  }

  std::size_t expansions() const noexcept { return expansions_; }

 private:
  template <typename Sink>
  bool step(EntityId start, EntityId at, const RelationPath& seq, std::size_t depth, std::vector<Triple>& stack,
            Sink& sink) {
    if (depth == seq.size()) {
      sink(EvidencePath{start, stack, at, at != start && targets_.contains(at)});
      return true;
    }
    const DirectedRelation& d = seq[depth];
    const auto edges = d.inverse ? kg_.in_edges(at, d.relation) : kg_.out_edges(at, d.relation);
    for (const Edge& e : edges) {
      if (++expansions_ > budget_) return false;
      stack.push_back(d.inverse ? Triple{e.other, d.relation, at} : Triple{at, d.relation, e.other});
      const bool more = step(start, e.other, seq, depth + 1, stack, sink);
      stack.pop_back();
      if (!more) return false;
    }
    return true;
  }

  const KnowledgeGraph& kg_;
  const std::set<EntityId>& targets_;
  std::size_t budget_;
  std::size_t expansions_ = 0;
};

}  // namespace detail

// Per claim entity: keep every realized path ending at another claim entity;
// otherwise one realized path chosen uniformly at random.
inline RetrievalResult retrieve(const KnowledgeGraph& kg, const ClaimRecord& record,
                                const ContextPredictor& predictor, Rng& rng, const RetrieveOptions& opts = {}) {
  const auto names = record.pattern.grounded_entities();
  if (names.empty()) throw Error("retrieve needs at least one claim entity");
  std::set<EntityId> targets;
  for (const auto& n : names) {
    if (const auto id = kg.find_entity(n)) targets.insert(*id);
  }
  RetrievalResult result;
  for (const auto& name : names) {
    EntityRetrieval report{name};
    const auto start = kg.find_entity(name);
    if (!start) {
      result.entities.push_back(std::move(report));
      continue;
    }
    const RetrievalContext ctx = predictor.predict(kg, record, name);
    const SequenceEnumeration seqs = enumerate_sequences(ctx, opts.sequence_cap);
    report.truncated = seqs.truncated;
    detail::PathWalker walker(kg, targets, opts.expansion_budget);
    std::vector<EvidencePath> reaching;
    std::optional<EvidencePath> fallback;
    for (const auto& seq : seqs.sequences) {
      ++report.sequences_tried;
      const bool complete = walker.walk(*start, seq, [&](EvidencePath p) {
        ++report.paths_realized;
        if (p.reached_other_claim_entity) {
          reaching.push_back(std::move(p));
        } else if (reaching.empty() && uniform_index(rng, report.paths_realized - reaching.size()) == 0) {
          fallback = std::move(p);
        }
      });
      if (!complete) {
        report.truncated = true;
        break;
      }
    }
    report.reached = reaching.size();
    if (!reaching.empty()) {
      for (auto& p : reaching) result.paths.push_back(std::move(p));
    } else if (fallback) {
      result.paths.push_back(std::move(*fallback));
    }
    result.entities.push_back(std::move(report));
  }
  return result;
}

inline nlohmann::ordered_json retrieval_report(const ClaimRecord& record, const RetrievalResult& result) {
  nlohmann::ordered_json entities = nlohmann::ordered_json::array();
  for (const auto& e : result.entities) {
    entities.push_back({{"entity", e.entity},
                        {"sequences_tried", e.sequences_tried},
                        {"paths_realized", e.paths_realized},
                        {"reached", e.reached},
                        {"truncated", e.truncated}});
  }
  return {{"id", record.id},
          {"label", to_string(record.label)},
          {"reached", result.any_reached()},
          {"truncated", result.truncated()},
          {"entities", std::move(entities)}};
}

// ---- evidence text ----------------------------------------------------------

inline constexpr std::string_view kSep = " <SEP> ";

using NamedEvidence = std::vector<std::vector<SourceTriple>>;

inline NamedEvidence name_paths(const KnowledgeGraph& kg, const std::vector<EvidencePath>& paths) {
  NamedEvidence out;
  out.reserve(paths.size());
  for (const auto& p : paths) {
    auto& named = out.emplace_back();
    for (const Triple& t : p.triples) {
      named.push_back({kg.entity_name(t.head), kg.relation_name(t.relation), kg.entity_name(t.tail)});
    }
  }
  return out;
}

// One line per path, triples as "h r t" joined by " <SEP> ". No trailing
// newline.
inline std::string serialize_evidence(const NamedEvidence& paths) {
  std::string out;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (i) out += '\n';
    for (std::size_t j = 0; j < paths[i].size(); ++j) {
      if (j) out += kSep;
      const auto& t = paths[i][j];
      out += t.head + ' ' + t.relation + ' ' + t.tail;
    }
  }
  return out;
}

inline std::string serialize_evidence(const KnowledgeGraph& kg, const std::vector<EvidencePath>& paths) {
  return serialize_evidence(name_paths(kg, paths));
}

inline NamedEvidence parse_evidence(std::string_view text) {
  NamedEvidence out;
  if (text.empty()) return out;
  std::size_t line_no = 0;
  while (true) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    auto& path = out.emplace_back();
    while (true) {
      const auto sep = line.find(kSep);
      const std::string_view triple = line.substr(0, sep);
      std::vector<std::string> parts;
      std::size_t pos = 0;
      while (pos <= triple.size()) {
        const auto sp = triple.find(' ', pos);
        parts.emplace_back(triple.substr(pos, sp == std::string_view::npos ? triple.npos : sp - pos));
        if (sp == std::string_view::npos) break;
        pos = sp + 1;
      }
      if (parts.size() != 3) throw ParseError(line_no, "evidence triple must have 3 fields");
      path.push_back({parts[0], parts[1], parts[2]});
      if (sep == std::string_view::npos) break;
      line.remove_prefix(sep + kSep.size());
    }
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return out;
}

}  // namespace kgfact
