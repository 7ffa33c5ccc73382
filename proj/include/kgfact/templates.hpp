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

// Template catalog: existence templates, presupposition wrappers,
// structural question templates, relation-substitution groups and the
// declarative relation phrases used to render clauses.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "kgfact/common.hpp"

namespace kgfact {

// One template family shared by several relations. Placeholders: {head} or
// {tail} for the grounded entity, {relation} for the relation words.
struct ExistenceTemplate {
  std::vector<std::string> relations;
  std::string positive;
  std::string negative;
  bool operator==(const ExistenceTemplate&) const = default;
};

struct StructuralTemplate {
  std::vector<std::string> relations;
  std::string question;
  bool operator==(const StructuralTemplate&) const = default;
};

// Relations with the same head/tail entity types. Relations inside one set
// are synonyms; substitution moves between sets.
struct RelationGroup {
  std::string head_type;
  std::string tail_type;
  std::vector<std::vector<std::string>> sets;
  bool operator==(const RelationGroup&) const = default;
};

struct RelationPhrase {
  std::string positive;
  std::string negative;
  bool operator==(const RelationPhrase&) const = default;
};

enum class ExistenceSide { kHead, kTail };

struct TemplateCatalog {
  std::vector<ExistenceTemplate> head_existence;
  std::vector<ExistenceTemplate> tail_existence;
  std::vector<std::string> factive;
  std::vector<std::string> non_factive;
  std::vector<StructuralTemplate> structural_one_hop;
  std::vector<StructuralTemplate> structural_head_existence;
  // Every tail-existence relation can use any of these.
  std::vector<std::string> structural_tail_existence;
  std::vector<RelationGroup> substitution_groups;
  std::map<std::string, RelationPhrase> phrases;

  bool operator==(const TemplateCatalog&) const = default;

  struct ExistenceMatch {
    const ExistenceTemplate* family;
    ExistenceSide side;
  };

  std::optional<ExistenceMatch> existence_family(std::string_view relation) const {
    for (const auto& t : head_existence) {
      if (std::find(t.relations.begin(), t.relations.end(), relation) != t.relations.end()) {
        return ExistenceMatch{&t, ExistenceSide::kHead};
      }
    }
    for (const auto& t : tail_existence) {
      if (std::find(t.relations.begin(), t.relations.end(), relation) != t.relations.end()) {
        return ExistenceMatch{&t, ExistenceSide::kTail};
      }
    }
    return std::nullopt;
  }

  std::size_t existence_relation_count(ExistenceSide side) const {
    std::size_t n = 0;
    for (const auto& t : side == ExistenceSide::kHead ? head_existence : tail_existence) {
      n += t.relations.size();
    }
    return n;
  }

  const StructuralTemplate* structural_for(std::string_view relation,
                                           const std::vector<StructuralTemplate>& table) const {
    for (const auto& t : table) {
      if (std::find(t.relations.begin(), t.relations.end(), relation) != t.relations.end()) return &t;
    }
    return nullptr;
  }

  struct GroupPosition {
    std::size_t group;
    std::size_t set;
  };

  std::optional<GroupPosition> substitution_position(std::string_view relation) const {
    for (std::size_t g = 0; g < substitution_groups.size(); ++g) {
      const auto& sets = substitution_groups[g].sets;
      for (std::size_t s = 0; s < sets.size(); ++s) {
        if (std::find(sets[s].begin(), sets[s].end(), relation) != sets[s].end()) {
          return GroupPosition{g, s};
        }
      }
    }
    return std::nullopt;
  }
};

inline TemplateCatalog default_catalog() {
  TemplateCatalog c;
  c.head_existence = {
      {{"successor", "spouse", "children", "parentCompany", "capital", "garrison", "nickname",
        "mascot", "youthclubs", "predecessor", "child", "precededBy", "religion", "awards", "award"},
       "{head} had a(an) {relation}.",
       "{head} did not have a(an) {relation}."},
      {{"college", "university"}, "{head} attended {relation}.", "{head} did not attend {relation}."},
  };
  c.tail_existence = {
      {{"president", "primeMinister", "vicepresident", "primeminister", "vicePresident"},
       "{tail} was a {relation}.",
       "{tail} was not a {relation}."},
  };
  c.factive = {
      "I forgot that {claim}.",     "I realized that {claim}.",   "I wasn’t aware that {claim}.",
      "I didn’t know that {claim}.", "I remembered that {claim}.", "I explained that {claim}.",
      "I emphasized that {claim}.", "I understand that {claim}.",
  };
  c.non_factive = {"I imagined that {claim}.", "I wish that {claim}.", "If only {claim}."};
  c.structural_one_hop = {
      {{"leader", "leaderName", "mayor", "senators", "president", "manager", "generalManager",
        "coach", "chairman", "dean"},
       "When was {tail} a {relation} of {head}?"},
      {{"team", "draftTeam", "clubs", "managerClub", "managerclubs"}, "When did {head} play for {tail}?"},
      {{"operator"}, "When did {tail} operate {head}?"},
      {{"occupation", "formerName"}, "When was {head} a {tail}?"},
      {{"almaMater"}, "When did {head} graduate from the {tail}?"},
      {{"fossil"}, "When was {tail} fossil found in {head}?"},
      {{"director"}, "When was {head} directed by {tail}?"},
      {{"producer"}, "When was {head} produced by {tail}?"},
      {{"foundation", "foundedBy", "founder"}, "When was {head} founded by {tail}?"},
      {{"deathCause"}, "When did {head} die from {tail}?"},
      {{"creators", "creator"}, "When was {head} created by {tail}?"},
      {{"starring"}, "When was {head} starring {tail}?"},
      {{"shipBuilder", "builder"}, "When was {head} built by {tail}?"},
      {{"designer"}, "When was {head} designed by {tail}?"},
      {{"shipCountry"}, "When did {head} come from {tail}?"},
      {{"spouse"}, "When was {head} married to {tail}?"},
      {{"champions"}, "When was {tail} champion at the {head}?"},
      {{"recordedIn"}, "When was {head} recorded in {tail}?"},
  };
  c.structural_head_existence = {
      {{"successor", "spouse", "children", "parentCompany", "capital", "garrison", "nickname",
        "mascot", "youthclubs", "predecessor", "child", "precededBy", "religion", "awards", "award"},
       "What is the name of {head}'s {relation}?"},
      {{"college", "university"}, "When did {head} attend {relation}?"},
  };
  c.structural_tail_existence = {"When was {tail} {Relation}?", "Where was {tail} {Relation}?",
                                 "What country was {tail} {Relation}?"};
  c.substitution_groups = {
      {"person",
       "person",
       {{"child", "children"},
        {"successor"},
        {"parent"},
        {"predecessor", "precededBy"},
        {"spouse"},
        {"vicePresident", "vicepresident"},
        {"primeminister", "primeMinister"}}},
      {"person", "team", {{"currentteam", "currentclub", "team"}, {"debutTeam", "formerTeam"}}},
      {"non-person",
       "person",
       {{"chairperson", "chairman", "leader", "leaderName"},
        {"manager"},
        {"founder"},
        {"director"},
        {"crewMembers"},
        {"producer"},
        {"discoverer"},
        {"creator"},
        {"editor"},
        {"writer"},
        {"coach"},
        {"starring"},
        {"dean"}}},
      {"non-person",
       "non-person",
       {{"owningCompany", "parentCompany", "owner"}, {"headquarter"}, {"builder"}}},
  };
  auto phrase = [&](const char* rel, const char* pos, const char* neg) {
    c.phrases[rel] = RelationPhrase{pos, neg};
  };
  phrase("shipBuilder", "{head} was built by {tail}", "{head} was not built by {tail}");
  phrase("builder", "{head} was built by {tail}", "{head} was not built by {tail}");
  phrase("shipOperator", "{head} was operated by {tail}", "{head} was not operated by {tail}");
  phrase("operator", "{head} was operated by {tail}", "{head} was not operated by {tail}");
  phrase("location", "{head} is located in {tail}", "{head} is not located in {tail}");
  phrase("headquarter", "{head} has its headquarters in {tail}",
         "{head} does not have its headquarters in {tail}");
  phrase("country", "{head} is in {tail}", "{head} is not in {tail}");
  phrase("capital", "{head} has the capital {tail}", "{head} does not have the capital {tail}");
  phrase("birthPlace", "{head} was born in {tail}", "{head} was not born in {tail}");
  phrase("deathPlace", "{head} died in {tail}", "{head} did not die in {tail}");
  phrase("spouse", "{head} was married to {tail}", "{head} was not married to {tail}");
  phrase("child", "{head} had the child {tail}", "{head} did not have the child {tail}");
  phrase("children", "{head} had the child {tail}", "{head} did not have the child {tail}");
  phrase("parent", "{head} is a child of {tail}", "{head} is not a child of {tail}");
  phrase("successor", "{head} was succeeded by {tail}", "{head} was not succeeded by {tail}");
  phrase("predecessor", "{head} was preceded by {tail}", "{head} was not preceded by {tail}");
  phrase("precededBy", "{head} was preceded by {tail}", "{head} was not preceded by {tail}");
  phrase("currentteam", "{head} plays for {tail}", "{head} does not play for {tail}");
  phrase("currentclub", "{head} plays for {tail}", "{head} does not play for {tail}");
  phrase("team", "{head} played for {tail}", "{head} did not play for {tail}");
  phrase("formerTeam", "{head} formerly played for {tail}", "{head} did not formerly play for {tail}");
  phrase("debutTeam", "{head} debuted for {tail}", "{head} did not debut for {tail}");
  phrase("leader", "{head} is led by {tail}", "{head} is not led by {tail}");
  phrase("leaderName", "{head} is led by {tail}", "{head} is not led by {tail}");
  phrase("chairman", "{head} is chaired by {tail}", "{head} is not chaired by {tail}");
  phrase("manager", "{head} is managed by {tail}", "{head} is not managed by {tail}");
  phrase("founder", "{head} was founded by {tail}", "{head} was not founded by {tail}");
  phrase("director", "{head} was directed by {tail}", "{head} was not directed by {tail}");
  phrase("producer", "{head} was produced by {tail}", "{head} was not produced by {tail}");
  phrase("creator", "{head} was created by {tail}", "{head} was not created by {tail}");
  phrase("editor", "{head} was edited by {tail}", "{head} was not edited by {tail}");
  phrase("writer", "{head} was written by {tail}", "{head} was not written by {tail}");
  phrase("starring", "{head} starred {tail}", "{head} did not star {tail}");
  phrase("owner", "{head} is owned by {tail}", "{head} is not owned by {tail}");
  phrase("owningCompany", "{head} is owned by {tail}", "{head} is not owned by {tail}");
  phrase("parentCompany", "{head} has the parent company {tail}",
         "{head} does not have the parent company {tail}");
  phrase("almaMater", "{head} graduated from {tail}", "{head} did not graduate from {tail}");
  phrase("university", "{head} attended {tail}", "{head} did not attend {tail}");
  phrase("college", "{head} attended {tail}", "{head} did not attend {tail}");
  phrase("award", "{head} received {tail}", "{head} did not receive {tail}");
  phrase("religion", "{head} follows {tail}", "{head} does not follow {tail}");
  phrase("president", "{tail} was a president of {head}", "{tail} was not a president of {head}");
  phrase("vicePresident", "{tail} was a vice president of {head}",
         "{tail} was not a vice president of {head}");
  phrase("primeMinister", "{tail} was a prime minister of {head}",
         "{tail} was not a prime minister of {head}");
  return c;
}

// ---- rendering helpers -----------------------------------------------------

// "parentCompany" -> "parent company".
inline std::string relation_words(std::string_view relation) {
  return join(split_identifier(relation), " ");
}

inline std::string title_case(std::string words) {
  bool start = true;
  for (char& c : words) {
    if (start && std::isalpha(static_cast<unsigned char>(c))) {
      c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    start = c == ' ';
  }
  return words;
}

// Local part of a type name or IRI, as lower-case words: ".../SportsTeam" -> "sports team".
inline std::string type_words(std::string_view type_name) {
  const auto cut = type_name.find_last_of("/#:");
  if (cut != std::string_view::npos) type_name.remove_prefix(cut + 1);
  return relation_words(type_name);
}

inline std::string_view indefinite_article(std::string_view word) {
  if (word.empty()) return "a";
  const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(word.front())));
  return (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u') ? "an" : "a";
}

inline std::string with_article(std::string_view words) {
  return std::string(indefinite_article(words)) + " " + std::string(words);
}

// Replaces every "{key}" with its value, then resolves "a(an) word".
inline std::string fill_template(std::string_view tmpl,
                                 const std::vector<std::pair<std::string, std::string>>& values) {
  std::string out(tmpl);
  for (const auto& [key, value] : values) {
    const std::string slot = "{" + key + "}";
    for (std::size_t pos = out.find(slot); pos != std::string::npos;
         pos = out.find(slot, pos + value.size())) {
      out.replace(pos, slot.size(), value);
    }
  }
  constexpr std::string_view kArticle = "a(an) ";
  for (std::size_t pos = out.find(kArticle); pos != std::string::npos; pos = out.find(kArticle, pos)) {
    const std::string_view rest = std::string_view(out).substr(pos + kArticle.size());
    const std::string article(indefinite_article(rest));
    out.replace(pos, kArticle.size() - 1, article);
    pos += article.size();
  }
  return out;
}

// Placeholders present in a template, e.g. {"head", "relation"}.
inline std::vector<std::string> template_placeholders(std::string_view tmpl) {
  std::vector<std::string> out;
  for (std::size_t pos = tmpl.find('{'); pos != std::string_view::npos; pos = tmpl.find('{', pos + 1)) {
    const auto end = tmpl.find('}', pos);
    if (end == std::string_view::npos) break;
    out.emplace_back(tmpl.substr(pos + 1, end - pos - 1));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Declarative clause "{head} <phrase> {tail}" without final punctuation.
inline std::string render_clause(const TemplateCatalog& catalog, std::string_view head,
                                 std::string_view relation, std::string_view tail, bool negated) {
  const std::vector<std::pair<std::string, std::string>> values{
      {"head", std::string(head)}, {"tail", std::string(tail)}, {"relation", relation_words(relation)}};
  if (auto it = catalog.phrases.find(std::string(relation)); it != catalog.phrases.end()) {
    return fill_template(negated ? it->second.negative : it->second.positive, values);
  }
  return fill_template(negated ? "{head} does not have {tail} as its {relation}"
                               : "{head} has {tail} as its {relation}",
                       values);
}

// Claim text used inside a wrapper: trailing period removed.
inline std::string embedded_claim(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.back() == '.') text.remove_suffix(1);
  return std::string(text);
}

// ---- JSON asset ------------------------------------------------------------

inline nlohmann::ordered_json catalog_to_json(const TemplateCatalog& c) {
  using nlohmann::ordered_json;
  auto existence = [](const std::vector<ExistenceTemplate>& list) {
    ordered_json out = ordered_json::array();
    for (const auto& t : list) {
      out.push_back({{"relations", t.relations}, {"positive", t.positive}, {"negative", t.negative}});
    }
    return out;
  };
  auto structural = [](const std::vector<StructuralTemplate>& list) {
    ordered_json out = ordered_json::array();
    for (const auto& t : list) out.push_back({{"relations", t.relations}, {"question", t.question}});
    return out;
  };
  ordered_json groups = ordered_json::array();
  for (const auto& g : c.substitution_groups) {
    groups.push_back({{"head_type", g.head_type}, {"tail_type", g.tail_type}, {"sets", g.sets}});
  }
  ordered_json phrases = ordered_json::object();
  for (const auto& [rel, p] : c.phrases) {
    phrases[rel] = {{"positive", p.positive}, {"negative", p.negative}};
  }
  ordered_json j;
  j["existence_head_relation"] = existence(c.head_existence);
  j["existence_tail_relation"] = existence(c.tail_existence);
  j["factive"] = c.factive;
  j["non_factive"] = c.non_factive;
  j["structural_one_hop"] = structural(c.structural_one_hop);
  j["structural_existence_head_relation"] = structural(c.structural_head_existence);
  j["structural_existence_tail_relation"] = c.structural_tail_existence;
  j["substitution_groups"] = std::move(groups);
  j["relation_phrases"] = std::move(phrases);
  return j;
}

inline TemplateCatalog catalog_from_json(const nlohmann::json& j) {
  auto existence = [](const nlohmann::json& list) {
    std::vector<ExistenceTemplate> out;
    for (const auto& t : list) {
      out.push_back({t.at("relations").get<std::vector<std::string>>(),
                     t.at("positive").get<std::string>(), t.at("negative").get<std::string>()});
    }
    return out;
  };
  auto structural = [](const nlohmann::json& list) {
    std::vector<StructuralTemplate> out;
    for (const auto& t : list) {
      out.push_back({t.at("relations").get<std::vector<std::string>>(), t.at("question").get<std::string>()});
    }
    return out;
  };
  TemplateCatalog c;
  c.head_existence = existence(j.at("existence_head_relation"));
  c.tail_existence = existence(j.at("existence_tail_relation"));
  c.factive = j.at("factive").get<std::vector<std::string>>();
  c.non_factive = j.at("non_factive").get<std::vector<std::string>>();
  c.structural_one_hop = structural(j.at("structural_one_hop"));
  c.structural_head_existence = structural(j.at("structural_existence_head_relation"));
  c.structural_tail_existence = j.at("structural_existence_tail_relation").get<std::vector<std::string>>();
  for (const auto& g : j.at("substitution_groups")) {
    c.substitution_groups.push_back({g.at("head_type").get<std::string>(), g.at("tail_type").get<std::string>(),
                                     g.at("sets").get<std::vector<std::vector<std::string>>>()});
  }
  if (j.contains("relation_phrases")) {
    for (const auto& [rel, p] : j.at("relation_phrases").items()) {
      c.phrases[rel] = {p.at("positive").get<std::string>(), p.at("negative").get<std::string>()};
    }
  }
  return c;
}

inline TemplateCatalog load_catalog_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return catalog_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(path + ": " + e.what());
  }
}

}  // namespace kgfact
