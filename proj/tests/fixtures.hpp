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

// Shared test fixtures: the AIDAstella mini-graph and terse pattern builders.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "kgfact.hpp"

namespace kgfact::testing {

inline ClaimNode G(std::string name) { return GroundedNode{std::move(name)}; }
inline ClaimNode V(std::size_t index, std::optional<std::string> type = std::nullopt) {
  return VariableNode{index, std::move(type)};
}
inline ClaimEdge E(std::size_t src, std::string rel, std::size_t dst, bool neg = false) {
  return ClaimEdge{src, std::move(rel), dst, neg};
}

inline const std::vector<SourceTriple>& aidastella_triples() {
  static const std::vector<SourceTriple> triples{
      {"AIDAstella", "shipBuilder", "Meyer_Werft"},
      {"Meyer_Werft", "location", "Papenburg"},
      {"AIDAstella", "shipOperator", "AIDA_Cruises"},
      {"Meyer_Werft", "parentCompany", "Meyer_Group"},
      {"Samsung_Heavy_Industries", "location", "Geoje"},
      {"AIDAstella", "rdf:type", "Ship"},
      {"Meyer_Werft", "rdf:type", "Company"},
      {"Meyer_Group", "rdf:type", "Company"},
      {"AIDA_Cruises", "rdf:type", "Company"},
      {"Samsung", "rdf:type", "Company"},
      {"Samsung_Heavy_Industries", "rdf:type", "Company"},
      {"Papenburg", "rdf:type", "City"},
      {"New_York", "rdf:type", "City"},
      {"Geoje", "rdf:type", "City"},
  };
  return triples;
}

inline KnowledgeGraph graph_of(const std::vector<SourceTriple>& triples) {
  GraphBuilder b;
  for (const auto& t : triples) b.add(t.head, t.relation, t.tail);
  return std::move(b).build();
}

inline KnowledgeGraph aidastella_graph() { return graph_of(aidastella_triples()); }

// Chain pattern a -r1-> b -r2-> c with per-edge negation.
inline ClaimPattern chain(ClaimNode a, const std::string& r1, ClaimNode b, const std::string& r2, ClaimNode c,
                          bool neg1 = false, bool neg2 = false) {
  return build_pattern({std::move(a), std::move(b), std::move(c)}, {E(0, r1, 1, neg1), E(1, r2, 2, neg2)});
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace kgfact::testing
