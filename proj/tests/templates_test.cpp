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
#include "kgfact/templates.hpp"

namespace kgfact {
namespace {

// Transcribed independently of default_catalog().
const std::vector<std::string> kHeadRelations{
    "successor", "spouse",      "children", "parentCompany", "capital",  "garrison",
    "nickname",  "mascot",      "youthclubs", "predecessor", "child",    "precededBy",
    "religion",  "awards",      "award",    "college",       "university"};
const std::vector<std::string> kTailRelations{"president", "primeMinister", "vicepresident", "primeminister",
                                              "vicePresident"};
const std::vector<std::string> kFactive{
    "I forgot that {claim}.",      "I realized that {claim}.",   "I wasn’t aware that {claim}.",
    "I didn’t know that {claim}.", "I remembered that {claim}.", "I explained that {claim}.",
    "I emphasized that {claim}.",  "I understand that {claim}.",
};
const std::vector<std::string> kNonFactive{"I imagined that {claim}.", "I wish that {claim}.", "If only {claim}."};

std::set<std::string> all_relations(const std::vector<ExistenceTemplate>& families) {
  std::set<std::string> out;
  for (const auto& f : families) out.insert(f.relations.begin(), f.relations.end());
  return out;
}

TEST(Templates, ExistenceRelationCounts) {
  const auto c = default_catalog();
  EXPECT_EQ(c.existence_relation_count(ExistenceSide::kHead), 17u);
  EXPECT_EQ(c.existence_relation_count(ExistenceSide::kTail), 5u);
  EXPECT_EQ(all_relations(c.head_existence), std::set<std::string>(kHeadRelations.begin(), kHeadRelations.end()));
  EXPECT_EQ(all_relations(c.tail_existence), std::set<std::string>(kTailRelations.begin(), kTailRelations.end()));
}

TEST(Templates, ExistenceTemplatesHavePositiveAndNegativeForms) {
  const auto c = default_catalog();
  ASSERT_EQ(c.head_existence.size(), 2u);
  EXPECT_EQ(c.head_existence[0].positive, "{head} had a(an) {relation}.");
  EXPECT_EQ(c.head_existence[0].negative, "{head} did not have a(an) {relation}.");
  EXPECT_EQ(c.head_existence[1].positive, "{head} attended {relation}.");
  EXPECT_EQ(c.head_existence[1].negative, "{head} did not attend {relation}.");
  ASSERT_EQ(c.tail_existence.size(), 1u);
  EXPECT_EQ(c.tail_existence[0].positive, "{tail} was a {relation}.");
  EXPECT_EQ(c.tail_existence[0].negative, "{tail} was not a {relation}.");
}

TEST(Templates, ExistenceSamplesRender) {
  const auto c = default_catalog();
  const auto spouse = c.existence_family("spouse");
  ASSERT_TRUE(spouse);
  EXPECT_EQ(spouse->side, ExistenceSide::kHead);
  EXPECT_EQ(fill_template(spouse->family->positive, {{"head", "Obama"}, {"relation", relation_words("spouse")}}),
            "Obama had a spouse.");
  EXPECT_EQ(fill_template(spouse->family->negative,
                          {{"head", "Apple"}, {"relation", relation_words("parentCompany")}}),
            "Apple did not have a parent company.");
  EXPECT_EQ(fill_template(spouse->family->positive, {{"head", "Obama"}, {"relation", "award"}}),
            "Obama had an award.");
  const auto uni = c.existence_family("university");
  EXPECT_EQ(fill_template(uni->family->positive, {{"head", "Obama"}, {"relation", "university"}}),
            "Obama attended university.");
  const auto vp = c.existence_family("vicePresident");
  ASSERT_TRUE(vp);
  EXPECT_EQ(vp->side, ExistenceSide::kTail);
  EXPECT_EQ(fill_template(vp->family->negative, {{"tail", "Obama"}, {"relation", relation_words("vicePresident")}}),
            "Obama was not a vice president.");
  EXPECT_FALSE(c.existence_family("location"));
}

TEST(Templates, PresuppositionTemplates) {
  const auto c = default_catalog();
  EXPECT_EQ(c.factive, kFactive);
  EXPECT_EQ(c.non_factive, kNonFactive);
  EXPECT_EQ(fill_template(c.factive[4], {{"claim", embedded_claim("Obama was president.")}}),
            "I remembered that Obama was president.");
  EXPECT_EQ(fill_template(c.non_factive[2], {{"claim", "Obama was president"}}), "If only Obama was president.");
}

TEST(Templates, SubstitutionGroups) {
  const auto c = default_catalog();
  ASSERT_EQ(c.substitution_groups.size(), 4u);
  const std::vector<std::size_t> set_counts{7, 2, 13, 3};
  for (std::size_t g = 0; g < 4; ++g) EXPECT_EQ(c.substitution_groups[g].sets.size(), set_counts[g]) << g;
  EXPECT_EQ(c.substitution_groups[1].sets[0], (std::vector<std::string>{"currentteam", "currentclub", "team"}));
  EXPECT_EQ(c.substitution_groups[2].sets[0],
            (std::vector<std::string>{"chairperson", "chairman", "leader", "leaderName"}));
  EXPECT_EQ(c.substitution_groups[3].sets[0], (std::vector<std::string>{"owningCompany", "parentCompany", "owner"}));
  EXPECT_EQ(c.substitution_groups[0].head_type, "person");
  EXPECT_EQ(c.substitution_groups[3].tail_type, "non-person");
  // Groups partition their relations: no relation appears twice.
  std::set<std::string> seen;
  std::size_t total = 0;
  for (const auto& g : c.substitution_groups) {
    for (const auto& s : g.sets) {
      for (const auto& r : s) {
        seen.insert(r);
        ++total;
      }
    }
  }
  EXPECT_EQ(seen.size(), total);
  const auto pos = c.substitution_position("precededBy");
  ASSERT_TRUE(pos);
  EXPECT_EQ(pos->group, 0u);
  EXPECT_EQ(pos->set, 3u);
}

TEST(Templates, PlaceholdersMatchSlotTypes) {
  const auto c = default_catalog();
  using P = std::vector<std::string>;
  for (const auto& t : c.head_existence) {
    EXPECT_EQ(template_placeholders(t.positive), (P{"head", "relation"}));
    EXPECT_EQ(template_placeholders(t.negative), (P{"head", "relation"}));
  }
  for (const auto& t : c.tail_existence) {
    EXPECT_EQ(template_placeholders(t.positive), (P{"relation", "tail"}));
    EXPECT_EQ(template_placeholders(t.negative), (P{"relation", "tail"}));
  }
  for (const auto& t : c.factive) EXPECT_EQ(template_placeholders(t), P{"claim"});
  for (const auto& t : c.non_factive) EXPECT_EQ(template_placeholders(t), P{"claim"});
  for (const auto& t : c.structural_one_hop) {
    const auto ph = template_placeholders(t.question);
    EXPECT_TRUE(ph == (P{"head", "tail"}) || ph == (P{"head", "relation", "tail"})) << t.question;
  }
  for (const auto& t : c.structural_head_existence) {
    EXPECT_EQ(template_placeholders(t.question), (P{"head", "relation"}));
  }
  for (const auto& t : c.structural_tail_existence) EXPECT_EQ(template_placeholders(t), (P{"Relation", "tail"}));
  for (const auto& [rel, phrase] : c.phrases) {
    EXPECT_EQ(template_placeholders(phrase.positive), (P{"head", "tail"})) << rel;
    EXPECT_EQ(template_placeholders(phrase.negative), (P{"head", "tail"})) << rel;
  }
}

TEST(Templates, StructualQuestions) {
  const auto c = default_catalog();
  const auto* leader = c.structural_for("leader", c.structural_one_hop);
  ASSERT_NE(leader, nullptr);
  EXPECT_EQ(fill_template(leader->question, {{"head", "Alderney"}, {"tail", "Elizabeth II"}, {"relation", "leader"}}),
            "When was Elizabeth II a leader of Alderney?");
  const auto* builder = c.structural_for("shipBuilder", c.structural_one_hop);
  ASSERT_NE(builder, nullptr);
  EXPECT_EQ(fill_template(builder->question, {{"head", "A-Rosa Luna"}, {"tail", "Germany"}}),
            "When was A-Rosa Luna built by Germany?");
  EXPECT_EQ(fill_template(c.structural_tail_existence[1],
                          {{"tail", "Biden"}, {"Relation", title_case(relation_words("vicePresident"))}}),
            "Where was Biden Vice President?");
  EXPECT_EQ(c.structural_for("location", c.structural_one_hop), nullptr);
}

TEST(Templates, Helpers) {
  EXPECT_EQ(relation_words("parentCompany"), "parent company");
  EXPECT_EQ(type_words("http://dbpedia.org/ontology/SportsTeam"), "sports team");
  EXPECT_EQ(with_article("organisation"), "an organisation");
  EXPECT_EQ(with_article("company"), "a company");
  EXPECT_EQ(embedded_claim("  Obama was president. "), "Obama was president");
  EXPECT_EQ(render_clause(default_catalog(), "AIDAstella", "shipBuilder", "Meyer Werft", false),
            "AIDAstella was built by Meyer Werft");
  EXPECT_EQ(render_clause(default_catalog(), "X", "fooBar", "Y", true), "X does not have Y as its foo bar");
}

TEST(Templates, CatalogJsonRoundTripAndAsset) {
  const auto c = default_catalog();
  EXPECT_EQ(catalog_from_json(nlohmann::json::parse(catalog_to_json(c).dump())), c);
  EXPECT_EQ(load_catalog_file(std::string(KGFACT_SOURCE_DIR) + "/data/catalog.json"), c);
  EXPECT_THROW(load_catalog_file("/nonexistent/catalog.json"), Error);
}

}  // namespace
}  // namespace kgfact
