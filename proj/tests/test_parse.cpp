#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "edkit/parse.hpp"
#include "edkit/reformulate.hpp"
#include "generators.hpp"

using namespace edkit;

namespace {

std::multiset<IssueKind> kinds(const ParsedPrediction& p) {
  std::multiset<IssueKind> out;
  for (const auto& d : p.diagnostics) out.insert(d.kind);
  return out;
}

PredictedItem ed(const std::string& t, const std::string& l) { return {t, l}; }

}  // namespace

TEST(Parse, CalaisGeneration) {
  const auto p = parse_generation(
      "detained->movement.transportperson | clashes->conflict.attack", TaskKind::ED, "d");
  EXPECT_TRUE(p.clean());
  EXPECT_FALSE(p.is_none);
  EXPECT_EQ(p.items, (std::vector<PredictedItem>{ed("detained", "movement.transportperson"),
                                                 ed("clashes", "conflict.attack")}));
}

TEST(Parse, None) {
  for (TaskKind t : kAllTasks) {
    const auto p = parse_generation("NONE", t, "n");
    EXPECT_TRUE(p.is_none);
    EXPECT_TRUE(p.items.empty());
    EXPECT_TRUE(p.clean());
  }
  EXPECT_TRUE(parse_generation("  NONE ", TaskKind::ED, "n").is_none);
  EXPECT_FALSE(parse_generation("none", TaskKind::EI, "n").is_none);
}

TEST(Parse, MalformedFixture) {
  const auto p = parse_generation("died->life.die | died->life.die | broken", TaskKind::ED, "m");
  EXPECT_EQ(p.items, (std::vector<PredictedItem>{ed("died", "life.die")}));
  EXPECT_EQ(kinds(p), (std::multiset<IssueKind>{IssueKind::duplicate_item,
                                                IssueKind::missing_arrow}));
}

TEST(Parse, NoneMixedWithItems) {
  const auto p = parse_generation("NONE | died->life.die", TaskKind::ED, "m");
  EXPECT_FALSE(p.is_none);
  EXPECT_EQ(p.items.size(), 1u);
  EXPECT_EQ(kinds(p), (std::multiset<IssueKind>{IssueKind::none_mixed_with_items}));

  const auto q = parse_generation("NONE | NONE", TaskKind::EC, "m");
  EXPECT_TRUE(q.is_none);
  EXPECT_EQ(kinds(q), (std::multiset<IssueKind>{IssueKind::duplicate_item}));
}

TEST(Parse, EmptyItems) {
  const auto p = parse_generation(" | died->life.die || ->x | y->", TaskKind::ED, "e");
  EXPECT_EQ(p.items.size(), 1u);
  EXPECT_EQ(kinds(p), (std::multiset<IssueKind>{IssueKind::empty_item, IssueKind::empty_item,
                                                IssueKind::empty_item, IssueKind::empty_item}));
  const auto q = parse_generation("", TaskKind::EI, "e");
  EXPECT_TRUE(q.items.empty());
  EXPECT_FALSE(q.is_none);
  EXPECT_EQ(kinds(q), (std::multiset<IssueKind>{IssueKind::empty_item}));
}

TEST(Parse, SplitsOnFirstArrow) {
  const auto p = parse_generation("a->b->c", TaskKind::ED, "x");
  EXPECT_EQ(p.items, (std::vector<PredictedItem>{ed("a", "b->c")}));
}

TEST(Parse, ArrowInEiOrEc) {
  for (TaskKind t : {TaskKind::EI, TaskKind::EC}) {
    const auto p = parse_generation("died->life.die | died", t, "x");
    EXPECT_EQ(p.items.size(), 1u);
    EXPECT_EQ(kinds(p), (std::multiset<IssueKind>{IssueKind::arrow_in_ei_or_ec}));
  }
  EXPECT_EQ(*parse_generation("died", TaskKind::EI, "x").items[0].trigger, "died");
  EXPECT_FALSE(parse_generation("died", TaskKind::EI, "x").items[0].type);
  EXPECT_EQ(*parse_generation("life.die", TaskKind::EC, "x").items[0].type, "life.die");
  EXPECT_FALSE(parse_generation("life.die", TaskKind::EC, "x").items[0].trigger);
}

TEST(Parse, WhitespaceAndCase) {
  const auto p = parse_generation("  took place  ->  Process_Start |Took Place->x", TaskKind::ED, "w");
  EXPECT_EQ(p.items, (std::vector<PredictedItem>{ed("took place", "Process_Start"),
                                                 ed("Took Place", "x")}));
}

TEST(Parse, FragmentsAreSubstrings) {
  const std::string raw = "a->b | a->b | c | NONE | | x->";
  const auto p = parse_generation(raw, TaskKind::ED, "f");
  EXPECT_FALSE(p.diagnostics.empty());
  for (const auto& d : p.diagnostics) EXPECT_NE(raw.find(d.fragment), std::string::npos);
}

TEST(ParseProperty, RoundTripsEveryTarget) {
  gen::Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    const auto inst = gen::instance(rng, "i");
    std::set<std::pair<std::string, std::string>> gold;
    std::set<std::string> triggers, types;
    for (const auto& m : inst.mentions) {
      gold.emplace(m.trigger, m.label());
      triggers.insert(m.trigger);
      types.insert(m.label());
    }
    const auto p = parse_generation(make_ed_target(inst).text, TaskKind::ED, inst.id);
    ASSERT_TRUE(p.clean());
    EXPECT_EQ(p.is_none, gold.empty());
    std::set<std::pair<std::string, std::string>> got;
    for (const auto& it : p.items) got.emplace(*it.trigger, *it.type);
    EXPECT_EQ(got, gold);
    EXPECT_EQ(got.size(), p.items.size());

    const auto ei = parse_generation(make_ei_target(inst).text, TaskKind::EI, inst.id);
    ASSERT_TRUE(ei.clean());
    std::set<std::string> ei_got;
    for (const auto& it : ei.items) ei_got.insert(*it.trigger);
    EXPECT_EQ(ei_got, triggers);

    const auto ec = parse_generation(make_ec_target(inst).text, TaskKind::EC, inst.id);
    ASSERT_TRUE(ec.clean());
    std::set<std::string> ec_got;
    for (const auto& it : ec.items) ec_got.insert(*it.type);
    EXPECT_EQ(ec_got, types);
  }
}

TEST(ParseProperty, ItemsNeverExceedFields) {
  gen::Rng rng(21);
  const std::vector<std::string> atoms{"|", "->", "NONE", " ", "a", "b.c", "-", ">", "  "};
  for (int i = 0; i < 5000; ++i) {
    std::string raw;
    const auto n = gen::pick(rng, 12);
    for (std::size_t k = 0; k < n; ++k) raw += atoms[gen::pick(rng, atoms.size())];
    for (TaskKind t : kAllTasks) {
      const auto p = parse_generation(raw, t, "z");
      const auto fields = std::size_t(std::count(raw.begin(), raw.end(), '|')) + 1;
      EXPECT_LE(p.items.size(), fields);
      EXPECT_LE(p.items.size() + p.diagnostics.size() + (p.is_none ? 1 : 0), fields + 1);
    }
  }
}
