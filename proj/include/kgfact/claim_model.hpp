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

// Claim patterns (small graphs of grounded entities and variables joined by
// possibly negated relation edges), reasoning-type classification and the
// JSON-lines dataset record format.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "kgfact/common.hpp"
#include "kgfact/kg_store.hpp"

namespace kgfact {

enum class ReasoningType : std::uint8_t { kOneHop, kConjunction, kExistence, kMultiHop, kNegation };

inline constexpr std::array<ReasoningType, 5> kAllReasoningTypes{
    ReasoningType::kOneHop, ReasoningType::kConjunction, ReasoningType::kExistence,
    ReasoningType::kMultiHop, ReasoningType::kNegation};

inline std::string_view to_string(ReasoningType t) {
  switch (t) {
    case ReasoningType::kOneHop: return "one-hop";
    case ReasoningType::kConjunction: return "conjunction";
    case ReasoningType::kExistence: return "existence";
    case ReasoningType::kMultiHop: return "multi-hop";
    case ReasoningType::kNegation: return "negation";
  }
  return "?";
}

inline std::optional<ReasoningType> parse_reasoning_type(std::string_view s) {
  for (ReasoningType t : kAllReasoningTypes) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

class ReasoningTags {
 public:
  ReasoningTags() = default;
  ReasoningTags(std::initializer_list<ReasoningType> types) {
    for (ReasoningType t : types) add(t);
  }

  void add(ReasoningType t) { bits_ |= bit(t); }
  bool contains(ReasoningType t) const { return (bits_ & bit(t)) != 0; }
  bool empty() const { return bits_ == 0; }

  std::vector<ReasoningType> list() const {
    std::vector<ReasoningType> out;
    for (ReasoningType t : kAllReasoningTypes) {
      if (contains(t)) out.push_back(t);
    }
    return out;
  }

  // Bucket used for statistics and quotas.
  // Precedence: negation > multi-hop > existence > conjunction > one-hop.
  ReasoningType primary() const {
    for (ReasoningType t : {ReasoningType::kNegation, ReasoningType::kMultiHop,
                            ReasoningType::kExistence, ReasoningType::kConjunction}) {
      if (contains(t)) return t;
    }
    return ReasoningType::kOneHop;
  }

  bool operator==(const ReasoningTags&) const = default;

 private:
  static std::uint8_t bit(ReasoningType t) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(t));
  }
  std::uint8_t bits_ = 0;
};

enum class Label : std::uint8_t { kSupported, kRefuted };

inline std::string_view to_string(Label l) {
  return l == Label::kSupported ? "Supported" : "Refuted";
}

inline std::optional<Label> parse_label(std::string_view s) {
  if (s == "Supported") return Label::kSupported;
  if (s == "Refuted") return Label::kRefuted;
  return std::nullopt;
}

inline Label invert(Label l) { return l == Label::kSupported ? Label::kRefuted : Label::kSupported; }

struct GroundedNode {
  std::string entity;
  bool operator==(const GroundedNode&) const = default;
};

struct VariableNode {
  std::size_t index = 0;
  std::optional<std::string> type_name;
  bool operator==(const VariableNode&) const = default;
};

using ClaimNode = std::variant<GroundedNode, VariableNode>;

inline bool is_variable(const ClaimNode& n) { return std::holds_alternative<VariableNode>(n); }

// Relations are kept as names so patterns stay portable across graphs; they
// are resolved against a graph only when verified.
struct ClaimEdge {
  std::size_t src = 0;
  std::string relation;
  std::size_t dst = 0;
  bool negated = false;
  bool operator==(const ClaimEdge&) const = default;
};

class ClaimPattern;
ClaimPattern build_pattern(std::vector<ClaimNode> nodes, std::vector<ClaimEdge> edges,
                           std::optional<ReasoningType> kind, bool inverted);

class ClaimPattern {
 public:
  const std::vector<ClaimNode>& nodes() const noexcept { return nodes_; }
  const std::vector<ClaimEdge>& edges() const noexcept { return edges_; }
  const ReasoningTags& tags() const noexcept { return tags_; }
  // Structural kind: one of one-hop, conjunction, existence, multi-hop.
  ReasoningType kind() const noexcept { return kind_; }
  // Whole-claim polarity flip (non-factive presupposition wrappers).
  bool inverted() const noexcept { return inverted_; }
  std::size_t num_variables() const noexcept { return num_variables_; }
  bool has_negation() const noexcept { return tags_.contains(ReasoningType::kNegation); }

  std::vector<std::string> grounded_entities() const {
    std::vector<std::string> out;
    for (const auto& n : nodes_) {
      if (const auto* g = std::get_if<GroundedNode>(&n)) out.push_back(g->entity);
    }
    return out;
  }

  bool operator==(const ClaimPattern& o) const {
    return nodes_ == o.nodes_ && edges_ == o.edges_ && inverted_ == o.inverted_;
  }

 private:
  friend ClaimPattern build_pattern(std::vector<ClaimNode>, std::vector<ClaimEdge>,
                                    std::optional<ReasoningType>, bool);
  std::vector<ClaimNode> nodes_;
  std::vector<ClaimEdge> edges_;
  ReasoningTags tags_;
  ReasoningType kind_ = ReasoningType::kOneHop;
  bool inverted_ = false;
  std::size_t num_variables_ = 0;
};

namespace detail {

inline std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

// Shape rules over a validated node/edge list:
//   no variables, one edge                    -> one-hop
//   no variables, several edges               -> conjunction
//   one edge, grounded endpoint + untyped var -> existence
//   some variable joins two or more edges     -> multi-hop
inline ReasoningType classify_shape(const std::vector<ClaimNode>& nodes,
                                    const std::vector<ClaimEdge>& edges) {
  std::size_t variables = 0;
  std::vector<std::size_t> degree(nodes.size(), 0);
  for (const auto& e : edges) {
    ++degree[e.src];
    ++degree[e.dst];
  }
  bool internal_variable = false;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (is_variable(nodes[i])) {
      ++variables;
      if (degree[i] >= 2) internal_variable = true;
    }
  }
  if (variables == 0) {
    return edges.size() == 1 ? ReasoningType::kOneHop : ReasoningType::kConjunction;
  }
  if (edges.size() == 1) {
    const auto& a = nodes[edges[0].src];
    const auto& b = nodes[edges[0].dst];
    const auto* var = std::get_if<VariableNode>(is_variable(a) ? &a : &b);
    if (is_variable(a) != is_variable(b) && !var->type_name) return ReasoningType::kExistence;
    throw PatternError("unsupported shape: single edge needs one grounded and one untyped variable end");
  }
  if (internal_variable) return ReasoningType::kMultiHop;
  throw PatternError("unsupported shape: variables must join at least two edges");
}

}  // namespace detail

// Validates and assembles a pattern. When `kind` is given it must match the
// classified shape.
inline ClaimPattern build_pattern(std::vector<ClaimNode> nodes, std::vector<ClaimEdge> edges,
                                  std::optional<ReasoningType> kind = std::nullopt,
                                  bool inverted = false) {
  if (nodes.size() < 2) throw PatternError("pattern needs at least two nodes");
  if (edges.empty()) throw PatternError("pattern needs at least one edge");
  std::vector<bool> var_seen;
  std::vector<std::string> grounded;
  for (const auto& n : nodes) {
    if (const auto* v = std::get_if<VariableNode>(&n)) {
      if (v->index >= var_seen.size()) var_seen.resize(v->index + 1, false);
      if (var_seen[v->index]) throw PatternError("duplicate variable index");
      var_seen[v->index] = true;
    } else {
      const auto& name = std::get<GroundedNode>(n).entity;
      if (name.empty()) throw PatternError("empty entity name");
      grounded.push_back(name);
    }
  }
  if (std::find(var_seen.begin(), var_seen.end(), false) != var_seen.end()) {
    throw PatternError("variable indexes are not dense");
  }
  std::sort(grounded.begin(), grounded.end());
  if (std::adjacent_find(grounded.begin(), grounded.end()) != grounded.end()) {
    throw PatternError("duplicate grounded node");
  }
  std::vector<std::size_t> parent(nodes.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& e : edges) {
    if (e.src >= nodes.size() || e.dst >= nodes.size()) throw PatternError("dangling node ref");
    if (e.src == e.dst) throw PatternError("edge endpoints must differ");
    if (e.relation.empty()) throw PatternError("empty relation name");
    parent[detail::find_root(parent, e.src)] = detail::find_root(parent, e.dst);
  }
  const std::size_t root = detail::find_root(parent, 0);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (detail::find_root(parent, i) != root) throw PatternError("disconnected pattern");
  }
  const ReasoningType shape = detail::classify_shape(nodes, edges);
  if (kind && *kind != shape && *kind != ReasoningType::kNegation) {
    throw PatternError("kind/shape mismatch: declared " + std::string(to_string(*kind)) +
                       ", shape is " + std::string(to_string(shape)));
  }
  ClaimPattern p;
  p.kind_ = shape;
  p.tags_.add(shape);
  for (const auto& e : edges) {
    if (e.negated) p.tags_.add(ReasoningType::kNegation);
  }
  if (kind == ReasoningType::kNegation && !p.tags_.contains(ReasoningType::kNegation)) {
    throw PatternError("kind/shape mismatch: negation declared without negated edge");
  }
  p.num_variables_ = var_seen.size();
  p.inverted_ = inverted;
  p.nodes_ = std::move(nodes);
  p.edges_ = std::move(edges);
  return p;
}

inline ReasoningTags classify_reasoning(const ClaimPattern& pattern) { return pattern.tags(); }

// Copy of `pattern` with edges replaced, re-validated.
inline ClaimPattern with_edges(const ClaimPattern& pattern, std::vector<ClaimEdge> edges) {
  return build_pattern(pattern.nodes(), std::move(edges), std::nullopt, pattern.inverted());
}

inline ClaimPattern with_nodes(const ClaimPattern& pattern, std::vector<ClaimNode> nodes) {
  return build_pattern(std::move(nodes), pattern.edges(), std::nullopt, pattern.inverted());
}

inline ClaimPattern with_inverted(const ClaimPattern& pattern, bool inverted) {
  return build_pattern(pattern.nodes(), pattern.edges(), std::nullopt, inverted);
}

enum class Style : std::uint8_t { kWritten, kColloquialPresup };

inline std::string_view to_string(Style s) {
  return s == Style::kWritten ? "written" : "colloquial-presup";
}

inline std::optional<Style> parse_style(std::string_view s) {
  if (s == "written") return Style::kWritten;
  if (s == "colloquial-presup") return Style::kColloquialPresup;
  return std::nullopt;
}

struct SourceTriple {
  std::string head;
  std::string relation;
  std::string tail;
  auto operator<=>(const SourceTriple&) const = default;
};

// entity -> relation paths starting at that entity.
using Evidence = std::map<std::string, std::vector<NamedPath>>;

struct ClaimRecord {
  std::string id;
  std::string text;
  ClaimPattern pattern;
  Evidence evidence;
  Label label = Label::kSupported;
  Style style = Style::kWritten;
  std::vector<SourceTriple> source_triples;

  ReasoningTags tags() const { return pattern.tags(); }
  bool operator==(const ClaimRecord&) const = default;
};

// Display form of an entity name in claim text.
inline std::string surface_form(std::string_view entity) {
  std::string out(entity);
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

// Gold evidence: for every grounded entity, the relation paths (up to
// `max_len` steps over non-negated edges) that lead to another grounded entity.
// Inverted patterns assert the opposite of their edges and get no paths.
inline Evidence derive_evidence(const ClaimPattern& pattern, std::size_t max_len = 3) {
  Evidence evidence;
  const auto& nodes = pattern.nodes();
  const auto& edges = pattern.edges();
  struct Step {
    std::size_t to;
    NamedStep step;
  };
  std::vector<std::vector<Step>> adj(nodes.size());
  for (const auto& e : edges) {
    if (e.negated) continue;
    adj[e.src].push_back({e.dst, {e.relation, false}});
    adj[e.dst].push_back({e.src, {e.relation, true}});
  }
  for (std::size_t start = 0; start < nodes.size(); ++start) {
    const auto* g = std::get_if<GroundedNode>(&nodes[start]);
    if (!g) continue;
    auto& paths = evidence[g->entity];
    std::vector<bool> on_path(nodes.size(), false);
    NamedPath current;
    auto dfs = [&](auto&& self, std::size_t at) -> void {
      if (current.size() == max_len) return;
      for (const Step& s : adj[at]) {
        if (on_path[s.to]) continue;
        current.push_back(s.step);
        on_path[s.to] = true;
        if (!is_variable(nodes[s.to])) paths.push_back(current);
        self(self, s.to);
        on_path[s.to] = false;
        current.pop_back();
      }
    };
    if (pattern.inverted()) continue;
    on_path[start] = true;
    dfs(dfs, start);
    std::sort(paths.begin(), paths.end());
    paths.erase(std::unique(paths.begin(), paths.end()), paths.end());
  }
  return evidence;
}

// ---- JSON lines -----------------------------------------------------------

using ordered_json = nlohmann::ordered_json;

inline ordered_json pattern_to_json(const ClaimPattern& p) {
  ordered_json nodes = ordered_json::array();
  for (const auto& n : p.nodes()) {
    if (const auto* g = std::get_if<GroundedNode>(&n)) {
      nodes.push_back({{"entity", g->entity}});
    } else {
      const auto& v = std::get<VariableNode>(n);
      ordered_json j{{"var", v.index}};
      if (v.type_name) j["type"] = *v.type_name;
      nodes.push_back(std::move(j));
    }
  }
  ordered_json edges = ordered_json::array();
  for (const auto& e : p.edges()) {
    edges.push_back({{"src", e.src}, {"rel", e.relation}, {"dst", e.dst}, {"neg", e.negated}});
  }
  ordered_json j{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
  if (p.inverted()) j["inverted"] = true;
  return j;
}

inline ClaimPattern pattern_from_json(const nlohmann::json& j) {
  std::vector<ClaimNode> nodes;
  for (const auto& n : j.at("nodes")) {
    if (n.contains("entity")) {
      nodes.emplace_back(GroundedNode{n.at("entity").get<std::string>()});
    } else {
      VariableNode v{n.at("var").get<std::size_t>(), std::nullopt};
      if (n.contains("type")) v.type_name = n.at("type").get<std::string>();
      nodes.emplace_back(std::move(v));
    }
  }
  std::vector<ClaimEdge> edges;
  for (const auto& e : j.at("edges")) {
    edges.push_back({e.at("src").get<std::size_t>(), e.at("rel").get<std::string>(),
                     e.at("dst").get<std::size_t>(), e.value("neg", false)});
  }
  return build_pattern(std::move(nodes), std::move(edges), std::nullopt, j.value("inverted", false));
}

inline ordered_json record_to_json(const ClaimRecord& r) {
  ordered_json types = ordered_json::array();
  for (ReasoningType t : r.tags().list()) types.push_back(std::string(to_string(t)));
  ordered_json entities = ordered_json::object();
  for (const auto& [entity, paths] : r.evidence) {
    ordered_json list = ordered_json::array();
    for (const auto& path : paths) {
      ordered_json steps = ordered_json::array();
      for (const auto& step : path) steps.push_back(render_step(step));
      list.push_back(std::move(steps));
    }
    entities[entity] = std::move(list);
  }
  ordered_json triples = ordered_json::array();
  for (const auto& t : r.source_triples) triples.push_back({t.head, t.relation, t.tail});
  ordered_json j;
  j["text"] = r.text;
  j["label"] = std::string(to_string(r.label));
  j["types"] = std::move(types);
  j["style"] = std::string(to_string(r.style));
  j["entities"] = std::move(entities);
  j["pattern"] = pattern_to_json(r.pattern);
  j["source_triples"] = std::move(triples);
  j["id"] = r.id;
  return j;
}

inline ClaimRecord record_from_json(const nlohmann::json& j) {
  ClaimRecord r;
  r.text = j.at("text").get<std::string>();
  const auto label = parse_label(j.at("label").get<std::string>());
  if (!label) throw Error("unknown label");
  r.label = *label;
  const auto style = parse_style(j.value("style", std::string("written")));
  if (!style) throw Error("unknown style");
  r.style = *style;
  r.pattern = pattern_from_json(j.at("pattern"));
  if (j.contains("types")) {
    ReasoningTags declared;
    for (const auto& t : j.at("types")) {
      const auto type = parse_reasoning_type(t.get<std::string>());
      if (!type) throw Error("unknown reasoning type " + t.get<std::string>());
      declared.add(*type);
    }
    if (!(declared == r.pattern.tags())) throw Error("types do not match pattern");
  }
  const auto entities = j.value("entities", nlohmann::json::object());
  for (const auto& [entity, paths] : entities.items()) {
    auto& out = r.evidence[entity];
    for (const auto& path : paths) {
      NamedPath p;
      for (const auto& step : path) p.push_back(parse_step(step.get<std::string>()));
      out.push_back(std::move(p));
    }
  }
  for (const auto& t : j.value("source_triples", nlohmann::json::array())) {
    if (!t.is_array() || t.size() != 3) throw Error("source triple must have 3 elements");
    r.source_triples.push_back(
        {t[0].get<std::string>(), t[1].get<std::string>(), t[2].get<std::string>()});
  }
  r.id = j.value("id", std::string());
  return r;
}

inline ClaimRecord parse_record_line(std::string_view line, std::size_t line_no) {
  try {
    return record_from_json(nlohmann::json::parse(line));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(line_no, e.what());
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(line_no, e.what());
  }
}

inline void write_records(const std::vector<ClaimRecord>& records, std::ostream& out) {
  for (const auto& r : records) out << record_to_json(r).dump() << '\n';
}

inline std::string write_records(const std::vector<ClaimRecord>& records) {
  std::ostringstream out;
  write_records(records, out);
  return out.str();
}

inline std::vector<ClaimRecord> read_records(std::istream& in) {
  std::vector<ClaimRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    out.push_back(parse_record_line(line, line_no));
  }
  return out;
}

inline std::vector<ClaimRecord> read_records(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_records(in);
}

}  // namespace kgfact
