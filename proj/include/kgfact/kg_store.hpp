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

// In-memory triple store: interned entity/relation names, sorted forward and
// backward adjacency (CSR layout), type lookup and hop-bounded traversal.
//
// A KnowledgeGraph is immutable once built and may be queried concurrently.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "kgfact/common.hpp"

namespace kgfact {

enum class EntityId : std::uint32_t {};
enum class RelationId : std::uint32_t {};

constexpr std::uint32_t index_of(EntityId e) noexcept { return static_cast<std::uint32_t>(e); }
constexpr std::uint32_t index_of(RelationId r) noexcept { return static_cast<std::uint32_t>(r); }

inline constexpr std::string_view kDefaultTypeRelation = "rdf:type";
inline constexpr std::string_view kRdfTypeIri = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

struct Triple {
  EntityId head;
  RelationId relation;
  EntityId tail;
  auto operator<=>(const Triple&) const = default;
};

// One traversal step; `inverse` walks the relation from tail to head.
struct DirectedRelation {
  RelationId relation;
  bool inverse = false;
  auto operator<=>(const DirectedRelation&) const = default;
};

using RelationPath = std::vector<DirectedRelation>;

// Graph-independent form of DirectedRelation, rendered as "rel" or "~rel".
struct NamedStep {
  std::string relation;
  bool inverse = false;
  auto operator<=>(const NamedStep&) const = default;
};

using NamedPath = std::vector<NamedStep>;

inline std::string render_step(const NamedStep& step) {
  return step.inverse ? "~" + step.relation : step.relation;
}

inline NamedStep parse_step(std::string_view text) {
  if (!text.empty() && text.front() == '~') return {std::string(text.substr(1)), true};
  return {std::string(text), false};
}

// Adjacency entry: the relation and the entity on the other end.
struct Edge {
  RelationId relation;
  EntityId other;
  auto operator<=>(const Edge&) const = default;
};

struct TraversalLimits {
  std::size_t max_hops = 6;
};

namespace detail {

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

}  // namespace detail

// Bijection between names and dense handles, in first-seen order.
template <typename Id>
class Interner {
 public:
  Id intern(std::string_view name) {
    if (auto it = index_.find(name); it != index_.end()) return it->second;
    const Id id = static_cast<Id>(names_.size());
    names_.emplace_back(name);
    index_.emplace(names_.back(), id);
    return id;
  }

  std::optional<Id> find(std::string_view name) const {
    if (auto it = index_.find(name); it != index_.end()) return it->second;
    return std::nullopt;
  }

  const std::string& name(Id id) const { return names_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  void reserve(std::size_t n) {
    names_.reserve(n);
    index_.reserve(n);
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Id, detail::StringHash, std::equal_to<>> index_;
};

class GraphBuilder;

class KnowledgeGraph {
 public:
  KnowledgeGraph() : fwd_offsets_(1, 0), bwd_offsets_(1, 0) {}

  std::size_t num_entities() const noexcept { return entities_.size(); }
  std::size_t num_relations() const noexcept { return relations_.size(); }
  std::size_t num_triples() const noexcept { return fwd_.size(); }
  const TraversalLimits& limits() const noexcept { return limits_; }
  const std::string& type_relation_name() const noexcept { return type_relation_name_; }
  std::optional<RelationId> type_relation() const noexcept { return type_relation_; }

  std::optional<EntityId> find_entity(std::string_view name) const { return entities_.find(name); }
  std::optional<RelationId> find_relation(std::string_view name) const {
    return relations_.find(name);
  }
  const std::string& entity_name(EntityId e) const { return entities_.name(e); }
  const std::string& relation_name(RelationId r) const { return relations_.name(r); }
  const std::vector<std::string>& entity_names() const noexcept { return entities_.names(); }
  const std::vector<std::string>& relation_names() const noexcept { return relations_.names(); }

  std::span<const Edge> out_edges(EntityId head) const { return row(fwd_offsets_, fwd_, head); }
  std::span<const Edge> in_edges(EntityId tail) const { return row(bwd_offsets_, bwd_, tail); }
  std::span<const Edge> out_edges(EntityId head, RelationId r) const {
    return narrow(out_edges(head), r);
  }
  std::span<const Edge> in_edges(EntityId tail, RelationId r) const {
    return narrow(in_edges(tail), r);
  }

  bool triple_exists(EntityId h, RelationId r, EntityId t) const {
    const auto edges = out_edges(h);
    return std::binary_search(edges.begin(), edges.end(), Edge{r, t});
  }
  bool triple_exists(const Triple& t) const { return triple_exists(t.head, t.relation, t.tail); }

  // Same question answered through the backward index.
  bool triple_exists_backward(EntityId h, RelationId r, EntityId t) const {
    const auto edges = in_edges(t);
    return std::binary_search(edges.begin(), edges.end(), Edge{r, h});
  }

  // All triples in (head, relation, tail) order.
  std::vector<Triple> triples() const {
    std::vector<Triple> out;
    out.reserve(fwd_.size());
    for (std::uint32_t h = 0; h + 1 < fwd_offsets_.size(); ++h) {
      for (std::uint64_t i = fwd_offsets_[h]; i < fwd_offsets_[h + 1]; ++i) {
        out.push_back({EntityId{h}, fwd_[i].relation, fwd_[i].other});
      }
    }
    return out;
  }

  // Entities reachable from `start` by consuming `path` left to right.
  // Result is sorted by handle.
  std::vector<EntityId> follow_path(EntityId start, const RelationPath& path) const {
    check_hops(path.size());
    std::vector<EntityId> frontier{start};
    std::vector<EntityId> next;
    for (const DirectedRelation& step : path) {
      next.clear();
      for (EntityId e : frontier) {
        const auto edges = step.inverse ? in_edges(e, step.relation) : out_edges(e, step.relation);
        for (const Edge& edge : edges) next.push_back(edge.other);
      }
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      frontier.swap(next);
      if (frontier.empty()) break;
    }
    return frontier;
  }

  // Entities within undirected hop distance k of e (type edges excluded),
  // sorted by handle. Includes e.
  std::vector<EntityId> within_hops(EntityId e, std::size_t k) const {
    check_hops(k);
    std::unordered_set<std::uint32_t> seen{index_of(e)};
    std::vector<EntityId> frontier{e};
    std::vector<EntityId> next;
    for (std::size_t depth = 0; depth < k && !frontier.empty(); ++depth) {
      next.clear();
      for (EntityId u : frontier) {
        for_each_neighbor(u, [&](EntityId v) {
          if (seen.insert(index_of(v)).second) next.push_back(v);
        });
      }
      frontier.swap(next);
    }
    std::vector<EntityId> out;
    out.reserve(seen.size());
    for (std::uint32_t v : seen) out.push_back(EntityId{v});
    std::sort(out.begin(), out.end());
    return out;
  }

  // Undirected shortest-path length if it is at most `cap`.
  std::optional<std::size_t> hop_distance(EntityId a, EntityId b, std::size_t cap) const {
    check_hops(cap);
    if (a == b) return 0;
    std::unordered_set<std::uint32_t> seen{index_of(a)};
    std::vector<EntityId> frontier{a};
    std::vector<EntityId> next;
    for (std::size_t depth = 1; depth <= cap && !frontier.empty(); ++depth) {
      next.clear();
      bool found = false;
      for (EntityId u : frontier) {
        for_each_neighbor(u, [&](EntityId v) {
          if (v == b) found = true;
          if (seen.insert(index_of(v)).second) next.push_back(v);
        });
        if (found) return depth;
      }
      frontier.swap(next);
    }
    return std::nullopt;
  }

  std::vector<std::string> entity_types(EntityId e) const {
    std::vector<std::string> out;
    if (!type_relation_) return out;
    for (const Edge& edge : out_edges(e, *type_relation_)) out.push_back(entity_name(edge.other));
    std::sort(out.begin(), out.end());
    return out;
  }

  bool has_type(EntityId e, std::string_view type_name) const {
    if (!type_relation_) return false;
    const auto type_entity = find_entity(type_name);
    return type_entity && triple_exists(e, *type_relation_, *type_entity);
  }

  // Entities carrying `type_name`, sorted by handle.
  std::span<const Edge> type_members(std::string_view type_name) const {
    if (!type_relation_) return {};
    const auto type_entity = find_entity(type_name);
    if (!type_entity) return {};
    return in_edges(*type_entity, *type_relation_);
  }

  // Uniformly random member of `type_name` for which `accept` holds.
  template <typename Accept>
  std::optional<EntityId> sample_entity(std::string_view type_name, Accept&& accept,
                                        Rng& rng) const {
    const auto members = type_members(type_name);
    if (members.empty()) return std::nullopt;
    // Rejection probes first: the conditional distribution is uniform over
    // accepted members, and so is the exhaustive fallback.
    constexpr int kProbes = 32;
    for (int i = 0; i < kProbes; ++i) {
      const EntityId e = members[uniform_index(rng, members.size())].other;
      if (accept(e)) return e;
    }
    std::vector<EntityId> accepted;
    for (const Edge& m : members) {
      if (accept(m.other)) accepted.push_back(m.other);
    }
    if (accepted.empty()) return std::nullopt;
    return accepted[uniform_index(rng, accepted.size())];
  }

 private:
  friend class GraphBuilder;
  friend KnowledgeGraph load_snapshot(std::istream& in);

  static std::span<const Edge> row(const std::vector<std::uint64_t>& offsets,
                                   const std::vector<Edge>& edges, EntityId e) {
    const std::size_t i = index_of(e);
    if (i + 1 >= offsets.size()) return {};
    return std::span<const Edge>(edges.data() + offsets[i], offsets[i + 1] - offsets[i]);
  }

  static std::span<const Edge> narrow(std::span<const Edge> edges, RelationId r) {
    const auto lo = std::lower_bound(edges.begin(), edges.end(), Edge{r, EntityId{0}});
    const auto hi = std::lower_bound(lo, edges.end(), Edge{RelationId{index_of(r) + 1}, EntityId{0}});
    return std::span<const Edge>(lo, hi);
  }

  void check_hops(std::size_t k) const {
    if (k > limits_.max_hops) {
      throw ResourceError("hop count " + std::to_string(k) + " exceeds limit " +
                          std::to_string(limits_.max_hops));
    }
  }

  template <typename F>
  void for_each_neighbor(EntityId u, F&& f) const {
    for (const Edge& edge : out_edges(u)) {
      if (edge.relation != type_relation_) f(edge.other);
    }
    for (const Edge& edge : in_edges(u)) {
      if (edge.relation != type_relation_) f(edge.other);
    }
  }

  // Builds both CSR indexes from deduplicated (h, r, t) index triples.
  void index(std::vector<std::array<std::uint32_t, 3>> triples) {
    std::sort(triples.begin(), triples.end());
    triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
    const std::size_t n = entities_.size();
    fwd_offsets_.assign(n + 1, 0);
    bwd_offsets_.assign(n + 1, 0);
    fwd_.resize(triples.size());
    bwd_.resize(triples.size());
    for (const auto& t : triples) {
      ++fwd_offsets_[t[0] + 1];
      ++bwd_offsets_[t[2] + 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
      fwd_offsets_[i + 1] += fwd_offsets_[i];
      bwd_offsets_[i + 1] += bwd_offsets_[i];
    }
    std::vector<std::uint64_t> fill(bwd_offsets_.begin(), bwd_offsets_.end() - 1);
    for (std::size_t i = 0; i < triples.size(); ++i) {
      const auto& t = triples[i];
      fwd_[i] = Edge{RelationId{t[1]}, EntityId{t[2]}};
      bwd_[fill[t[2]]++] = Edge{RelationId{t[1]}, EntityId{t[0]}};
    }
    // Triples arrive ordered by head, so each backward row is ordered by
    // head within a relation only after sorting by (relation, head).
    for (std::size_t i = 0; i < n; ++i) {
      std::sort(bwd_.begin() + static_cast<std::ptrdiff_t>(bwd_offsets_[i]),
                bwd_.begin() + static_cast<std::ptrdiff_t>(bwd_offsets_[i + 1]));
    }
    type_relation_ = relations_.find(type_relation_name_);
    if (!type_relation_ && type_relation_name_ == kDefaultTypeRelation) {
      type_relation_ = relations_.find(kRdfTypeIri);
    }
  }

  Interner<EntityId> entities_;
  Interner<RelationId> relations_;
  std::vector<std::uint64_t> fwd_offsets_;
  std::vector<Edge> fwd_;
  std::vector<std::uint64_t> bwd_offsets_;
  std::vector<Edge> bwd_;
  std::string type_relation_name_{kDefaultTypeRelation};
  std::optional<RelationId> type_relation_;
  TraversalLimits limits_;
};

namespace detail {

// Reads one N-Triples term starting at s[pos]; advances pos past it.
inline std::optional<std::string> read_nt_term(std::string_view s, std::size_t& pos) {
  while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  if (pos >= s.size()) return std::nullopt;
  if (s[pos] == '<') {
    const std::size_t end = s.find('>', pos + 1);
    if (end == std::string_view::npos) return std::nullopt;
    std::string out(s.substr(pos + 1, end - pos - 1));
    pos = end + 1;
    return out;
  }
  if (s.compare(pos, 2, "_:") == 0) {
    const std::size_t start = pos;
    while (pos < s.size() && s[pos] != ' ' && s[pos] != '\t') ++pos;
    return std::string(s.substr(start, pos - start));
  }
  if (s[pos] == '"') {
    std::string out;
    ++pos;
    while (pos < s.size() && s[pos] != '"') {
      if (s[pos] == '\\' && pos + 1 < s.size()) {
        ++pos;
        switch (s[pos]) {
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          case 'r': out.push_back('\r'); break;
          default: out.push_back(s[pos]);
        }
      } else {
        out.push_back(s[pos]);
      }
      ++pos;
    }
    if (pos >= s.size()) return std::nullopt;
    ++pos;
    // Language tags and datatypes are dropped.
    if (pos < s.size() && s[pos] == '@') {
      while (pos < s.size() && s[pos] != ' ' && s[pos] != '\t') ++pos;
    } else if (s.compare(pos, 2, "^^") == 0) {
      pos += 2;
      if (pos < s.size() && s[pos] == '<') {
        const std::size_t end = s.find('>', pos);
        if (end == std::string_view::npos) return std::nullopt;
        pos = end + 1;
      }
    }
    return out;
  }
  return std::nullopt;
}

}  // namespace detail

// Parses one input line. Returns false for blank and comment lines.
// Accepts `head<TAB>relation<TAB>tail` or `<iri> <iri> <iri|literal> .`.
inline bool parse_triple_line(std::string_view line, std::size_t line_no,
                              std::array<std::string, 3>& out) {
  line = trim(line);
  if (line.empty() || line.front() == '#') return false;
  if (line.front() == '<' || line.starts_with("_:")) {
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
      auto term = detail::read_nt_term(line, pos);
      if (!term || term->empty()) throw ParseError(line_no, "malformed N-Triples term");
      out[static_cast<std::size_t>(i)] = std::move(*term);
    }
    if (trim(line.substr(pos)) != ".") throw ParseError(line_no, "N-Triples line must end with '.'");
    return true;
  }
  std::size_t field = 0;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    const std::string_view part =
        trim(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (field >= 3) throw ParseError(line_no, "expected 3 tab-separated fields");
    if (part.empty()) throw ParseError(line_no, "empty field");
    out[field++] = std::string(part);
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  if (field != 3) throw ParseError(line_no, "expected 3 tab-separated fields");
  return true;
}

class GraphBuilder {
 public:
  explicit GraphBuilder(std::string type_relation_name = std::string(kDefaultTypeRelation),
                        TraversalLimits limits = {})
      : type_relation_name_(std::move(type_relation_name)), limits_(limits) {}

  void reserve(std::size_t n) { triples_.reserve(n); }

  // Handles are assigned in first-seen order: head, relation, tail.
  void add(std::string_view head, std::string_view relation, std::string_view tail) {
    const auto h = index_of(entities_.intern(head));
    const auto r = index_of(relations_.intern(relation));
    const auto t = index_of(entities_.intern(tail));
    triples_.push_back({h, r, t});
  }

  void add_line(std::string_view line, std::size_t line_no) {
    std::array<std::string, 3> fields;
    if (parse_triple_line(line, line_no, fields)) add(fields[0], fields[1], fields[2]);
  }

  void add_stream(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) add_line(line, ++line_no);
  }

  KnowledgeGraph build() && {
    KnowledgeGraph kg;
    kg.entities_ = std::move(entities_);
    kg.relations_ = std::move(relations_);
    kg.type_relation_name_ = std::move(type_relation_name_);
    kg.limits_ = limits_;
    kg.index(std::move(triples_));
    return kg;
  }

 private:
  Interner<EntityId> entities_;
  Interner<RelationId> relations_;
  std::vector<std::array<std::uint32_t, 3>> triples_;
  std::string type_relation_name_;
  TraversalLimits limits_;
};

inline KnowledgeGraph ingest_triples(std::istream& in,
                                     std::string type_relation_name = std::string(kDefaultTypeRelation),
                                     TraversalLimits limits = {}) {
  GraphBuilder builder(std::move(type_relation_name), limits);
  builder.add_stream(in);
  return std::move(builder).build();
}

inline KnowledgeGraph ingest_file(const std::string& path,
                                  std::string type_relation_name = std::string(kDefaultTypeRelation),
                                  TraversalLimits limits = {}) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return ingest_triples(in, std::move(type_relation_name), limits);
}

// Binary snapshot: 8-byte magic, u32 version, limits, type relation name,
// entity and relation name tables, then (h, r, t) u32 triples.
inline constexpr std::array<char, 8> kSnapshotMagic{'K', 'G', 'F', 'S', 'N', 'A', 'P', '\0'};
inline constexpr std::uint32_t kSnapshotVersion = 1;

namespace detail {

template <typename T>
void write_pod(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw Error("snapshot truncated");
  return value;
}

inline void write_string(std::ostream& out, const std::string& s) {
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string read_string(std::istream& in) {
  const auto n = read_pod<std::uint32_t>(in);
  std::string s(n, '\0');
  in.read(s.data(), n);
  if (!in) throw Error("snapshot truncated");
  return s;
}

}  // namespace detail

inline void save_snapshot(const KnowledgeGraph& kg, std::ostream& out) {
  out.write(kSnapshotMagic.data(), kSnapshotMagic.size());
  detail::write_pod(out, kSnapshotVersion);
  detail::write_pod<std::uint64_t>(out, kg.limits().max_hops);
  detail::write_string(out, kg.type_relation_name());
  detail::write_pod<std::uint64_t>(out, kg.num_entities());
  for (const auto& name : kg.entity_names()) detail::write_string(out, name);
  detail::write_pod<std::uint64_t>(out, kg.num_relations());
  for (const auto& name : kg.relation_names()) detail::write_string(out, name);
  const auto triples = kg.triples();
  detail::write_pod<std::uint64_t>(out, triples.size());
  for (const Triple& t : triples) {
    const std::array<std::uint32_t, 3> row{index_of(t.head), index_of(t.relation), index_of(t.tail)};
    out.write(reinterpret_cast<const char*>(row.data()), sizeof(row));
  }
  if (!out) throw Error("snapshot write failed");
}

inline KnowledgeGraph load_snapshot(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kSnapshotMagic) throw Error("not a kgfact snapshot");
  const auto version = detail::read_pod<std::uint32_t>(in);
  if (version != kSnapshotVersion) {
    throw Error("unsupported snapshot version " + std::to_string(version));
  }
  KnowledgeGraph kg;
  kg.limits_.max_hops = detail::read_pod<std::uint64_t>(in);
  kg.type_relation_name_ = detail::read_string(in);
  const auto n_entities = detail::read_pod<std::uint64_t>(in);
  kg.entities_.reserve(n_entities);
  for (std::uint64_t i = 0; i < n_entities; ++i) kg.entities_.intern(detail::read_string(in));
  const auto n_relations = detail::read_pod<std::uint64_t>(in);
  for (std::uint64_t i = 0; i < n_relations; ++i) kg.relations_.intern(detail::read_string(in));
  if (kg.entities_.size() != n_entities || kg.relations_.size() != n_relations) {
    throw Error("snapshot name table has duplicates");
  }
  const auto n_triples = detail::read_pod<std::uint64_t>(in);
  std::vector<std::array<std::uint32_t, 3>> triples(n_triples);
  in.read(reinterpret_cast<char*>(triples.data()),
          static_cast<std::streamsize>(n_triples * sizeof(std::array<std::uint32_t, 3>)));
  if (!in) throw Error("snapshot truncated");
  for (const auto& t : triples) {
    if (t[0] >= n_entities || t[2] >= n_entities || t[1] >= n_relations) {
      throw Error("snapshot triple references unknown handle");
    }
  }
  kg.index(std::move(triples));
  return kg;
}

inline void save_snapshot_file(const KnowledgeGraph& kg, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  save_snapshot(kg, out);
}

inline KnowledgeGraph load_snapshot_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return load_snapshot(in);
}

// Resolves a named path against the graph; nullopt if any relation is unknown.
inline std::optional<RelationPath> resolve_path(const KnowledgeGraph& kg, const NamedPath& path) {
  RelationPath out;
  out.reserve(path.size());
  for (const NamedStep& step : path) {
    const auto r = kg.find_relation(step.relation);
    if (!r) return std::nullopt;
    out.push_back({*r, step.inverse});
  }
  return out;
}

}  // namespace kgfact
