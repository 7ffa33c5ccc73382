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

// Supported/Refuted decisions for claim patterns against a knowledge graph.
//
// Semantics by pattern kind:
//   grounded (one-hop, conjunction): every edge must be satisfied; a plain
//     edge by its triple existing, a negated edge by its triple being absent.
//   existence: some entity completes the edge; negated, no entity does.
//   multi-hop: some assignment of the variables satisfies every edge. A
//     negated edge (u, r, v) is satisfied when u has an r-edge to some z != v
//     (kDistinctTail), or, optionally, when (u, r, v) is simply absent.
// An inverted pattern flips the final label.

#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "kgfact/claim_model.hpp"
#include "kgfact/kg_store.hpp"

namespace kgfact {

enum class NegationSemantics { kDistinctTail, kAbsent };

struct VerifyOptions {
  bool enforce_types = true;
  NegationSemantics negation = NegationSemantics::kDistinctTail;
  std::size_t search_budget = 1'000'000;
};

// Variable index -> bound entity.
using Assignment = std::vector<EntityId>;

struct CheckedEdge {
  std::string head;
  std::string relation;
  std::string tail;
  bool negated = false;
  bool present = false;    // the literal triple is in the graph
  bool satisfied = false;  // the edge holds under the claim semantics
};

struct Verdict {
  Label label = Label::kRefuted;
  bool has_variables = false;
  bool inverted = false;
  std::optional<Assignment> witness;
  std::vector<std::string> witness_names;
  std::vector<CheckedEdge> checked_edges;
};

namespace detail {

struct ResolvedNode {
  bool variable = false;
  std::size_t var = 0;
  std::optional<EntityId> entity;
  std::string name;
  // Variables only: set when a type constraint applies.
  bool constrained = false;
  std::optional<EntityId> type_entity;
};

struct ResolvedEdge {
  std::size_t src;
  std::size_t dst;
  std::optional<RelationId> relation;
  std::string relation_name;
  bool negated;
};

class PatternSearch {
 public:
  PatternSearch(const KnowledgeGraph& kg, const ClaimPattern& pattern, const VerifyOptions& options)
      : kg_(kg), options_(options) {
    for (const auto& n : pattern.nodes()) {
      ResolvedNode r;
      if (const auto* g = std::get_if<GroundedNode>(&n)) {
        r.entity = kg.find_entity(g->entity);
        r.name = g->entity;
      } else {
        const auto& v = std::get<VariableNode>(n);
        r.variable = true;
        r.var = v.index;
        r.name = "?" + std::to_string(v.index);
        if (v.type_name && options.enforce_types) {
          r.constrained = true;
          r.type_entity = kg.find_entity(*v.type_name);
        }
      }
      nodes_.push_back(std::move(r));
    }
    for (const auto& e : pattern.edges()) {
      edges_.push_back({e.src, e.dst, kg.find_relation(e.relation), e.relation, e.negated});
    }
    binding_.assign(pattern.num_variables(), std::nullopt);
    var_node_.resize(pattern.num_variables());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].variable) var_node_[nodes_[i].var] = i;
    }
  }

  std::optional<EntityId> value(std::size_t node) const {
    const auto& n = nodes_[node];
    return n.variable ? binding_[n.var] : n.entity;
  }

  bool present(const ResolvedEdge& e) const {
    const auto u = value(e.src);
    const auto v = value(e.dst);
    return e.relation && u && v && kg_.triple_exists(*u, *e.relation, *v);
  }

  // Grounded patterns use plain absence for negated edges.
  bool satisfied(const ResolvedEdge& e, bool grounded_pattern) const {
    if (!e.negated) return present(e);
    if (grounded_pattern || options_.negation == NegationSemantics::kAbsent) return !present(e);
    const auto u = value(e.src);
    if (!e.relation || !u) return false;
    const auto out = kg_.out_edges(*u, *e.relation);
    if (out.empty()) return false;
    const auto v = value(e.dst);
    return !v || out.size() > 1 || out.front().other != *v;
  }

  std::vector<CheckedEdge> checked(bool grounded_pattern) const {
    std::vector<CheckedEdge> out;
    for (const auto& e : edges_) {
      const auto name = [&](std::size_t node) {
        const auto v = value(node);
        return v ? kg_.entity_name(*v) : nodes_[node].name;
      };
      out.push_back({name(e.src), e.relation_name, name(e.dst), e.negated, present(e),
                     satisfied(e, grounded_pattern)});
    }
    return out;
  }

  const std::vector<ResolvedNode>& nodes() const { return nodes_; }
  const std::vector<ResolvedEdge>& edges() const { return edges_; }

  // Lexicographically smallest satisfying assignment (variables in index
  // order, candidates in ascending handle order).
  std::optional<Assignment> search() {
    for (const auto& e : edges_) {
      if (!nodes_[e.src].variable && !nodes_[e.dst].variable && !satisfied(e, false)) {
        return std::nullopt;
      }
    }
    if (!extend(0)) return std::nullopt;
    Assignment out;
    for (const auto& b : binding_) out.push_back(*b);
    return out;
  }

  void bind(const Assignment& a) {
    for (std::size_t i = 0; i < a.size(); ++i) binding_[i] = a[i];
  }

 private:
  bool bound(std::size_t node) const {
    const auto& n = nodes_[node];
    return !n.variable || binding_[n.var].has_value();
  }

  // Candidate list for variable `var`, or nullopt for "every entity".
  // An empty vector means no candidate can work.
  std::optional<std::vector<EntityId>> candidates(std::size_t var) const {
    const std::size_t node = var_node_[var];
    std::optional<std::span<const Edge>> best;
    for (const auto& e : edges_) {
      if (e.negated) continue;
      std::size_t other;
      bool forward;
      if (e.dst == node && bound(e.src)) {
        other = e.src;
        forward = true;
      } else if (e.src == node && bound(e.dst)) {
        other = e.dst;
        forward = false;
      } else {
        continue;
      }
      const auto anchor = value(other);
      if (!anchor || !e.relation) return std::vector<EntityId>{};
      const auto edges = forward ? kg_.out_edges(*anchor, *e.relation) : kg_.in_edges(*anchor, *e.relation);
      if (!best || edges.size() < best->size()) best = edges;
    }
    if (!best) return std::nullopt;
    std::vector<EntityId> out;
    out.reserve(best->size());
    for (const Edge& edge : *best) out.push_back(edge.other);
    return out;
  }

  bool admissible(std::size_t var, EntityId e) const {
    const auto& n = nodes_[var_node_[var]];
    if (!n.constrained) return true;
    return n.type_entity && kg_.type_relation() &&
           kg_.triple_exists(e, *kg_.type_relation(), *n.type_entity);
  }

  bool try_bind(std::size_t var, EntityId e) {
    if (++explored_ > options_.search_budget) {
      throw ResourceError("search budget of " + std::to_string(options_.search_budget) +
                          " assignments exceeded");
    }
    if (!admissible(var, e)) return false;
    binding_[var] = e;
    const std::size_t node = var_node_[var];
    for (const auto& edge : edges_) {
      if (edge.src != node && edge.dst != node) continue;
      if (!bound(edge.src) || !bound(edge.dst)) continue;
      if (!satisfied(edge, false)) {
        binding_[var].reset();
        return false;
      }
    }
    if (extend(var + 1)) return true;
    binding_[var].reset();
    return false;
  }

  bool extend(std::size_t var) {
    if (var == binding_.size()) return true;
    if (const auto list = candidates(var)) {
      for (EntityId e : *list) {
        if (try_bind(var, e)) return true;
      }
      return false;
    }
    for (std::uint32_t i = 0; i < kg_.num_entities(); ++i) {
      if (try_bind(var, EntityId{i})) return true;
    }
    return false;
  }

  const KnowledgeGraph& kg_;
  const VerifyOptions& options_;
  std::vector<ResolvedNode> nodes_;
  std::vector<ResolvedEdge> edges_;
  std::vector<std::optional<EntityId>> binding_;
  std::vector<std::size_t> var_node_;
  std::size_t explored_ = 0;
};

}  // namespace detail

// First satisfying assignment for a pattern with variables, or nullopt.
// Existence patterns return their first completing entity.
inline std::optional<Assignment> verify_existential(const KnowledgeGraph& kg, const ClaimPattern& pattern,
                                                    const VerifyOptions& options = {}) {
  if (pattern.num_variables() == 0) throw PatternError("pattern has no variables");
  detail::PatternSearch search(kg, pattern, options);
  if (pattern.kind() == ReasoningType::kExistence) {
    // The existence edge is read positively here; negation is applied by verify().
    const auto& e = search.edges().front();
    const auto& src = search.nodes()[e.src];
    const auto& anchor = src.variable ? search.nodes()[e.dst] : src;
    if (!anchor.entity || !e.relation) return std::nullopt;
    const auto edges = src.variable ? kg.in_edges(*anchor.entity, *e.relation)
                                    : kg.out_edges(*anchor.entity, *e.relation);
    if (edges.empty()) return std::nullopt;
    return Assignment{edges.front().other};
  }
  return search.search();
}

inline Verdict verify(const KnowledgeGraph& kg, const ClaimPattern& pattern,
                      const VerifyOptions& options = {}) {
  Verdict verdict;
  verdict.has_variables = pattern.num_variables() > 0;
  verdict.inverted = pattern.inverted();
  detail::PatternSearch search(kg, pattern, options);
  bool supported = false;
  if (!verdict.has_variables) {
    verdict.checked_edges = search.checked(true);
    supported = std::all_of(verdict.checked_edges.begin(), verdict.checked_edges.end(),
                            [](const CheckedEdge& c) { return c.satisfied; });
  } else {
    verdict.witness = verify_existential(kg, pattern, options);
    if (verdict.witness) {
      search.bind(*verdict.witness);
      for (EntityId e : *verdict.witness) verdict.witness_names.push_back(kg.entity_name(e));
    }
    verdict.checked_edges = search.checked(false);
    if (pattern.kind() == ReasoningType::kExistence) {
      const bool negated = pattern.edges().front().negated;
      supported = verdict.witness.has_value() != negated;
      auto& c = verdict.checked_edges.front();
      c.present = verdict.witness.has_value();
      c.satisfied = supported;
    } else {
      supported = verdict.witness.has_value();
    }
  }
  if (pattern.inverted()) supported = !supported;
  verdict.label = supported ? Label::kSupported : Label::kRefuted;
  return verdict;
}

// Stable, line-oriented rendering of a verdict.
inline std::string explain(const Verdict& verdict) {
  std::ostringstream out;
  out << "label: " << to_string(verdict.label) << '\n';
  if (verdict.inverted) out << "inverted: yes\n";
  if (verdict.has_variables) {
    out << "witness:";
    if (verdict.witness_names.empty()) {
      out << " none";
    } else {
      for (std::size_t i = 0; i < verdict.witness_names.size(); ++i) {
        out << " ?" << i << "=" << verdict.witness_names[i];
      }
    }
    out << '\n';
  }
  for (std::size_t i = 0; i < verdict.checked_edges.size(); ++i) {
    const auto& c = verdict.checked_edges[i];
    out << "edge " << i << ": " << (c.negated ? "NOT " : "") << c.head << ' ' << c.relation << ' '
        << c.tail << " -> " << (c.present ? "present" : "absent") << ", "
        << (c.satisfied ? "satisfied" : "unsatisfied") << '\n';
  }
  return out.str();
}

}  // namespace kgfact
