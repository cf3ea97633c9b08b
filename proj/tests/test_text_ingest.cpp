#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "edkit/ingest.hpp"
#include "edkit/text.hpp"
#include "generators.hpp"
#include "paths.hpp"

using namespace edkit;

namespace {

std::string record(const std::string& text, const std::string& mentions,
                   const std::string& id = "r1") {
  return "{\"id\":\"" + id + "\",\"text\":\"" + text +
         "\",\"split\":\"train\",\"granularity\":\"sentence\",\"mentions\":[" +
         mentions + "]}\n";
}

std::string error_of(const std::string& content) {
  std::istringstream in(content);
  try {
    Corpus("c", read_canonical(in, "corpus.jsonl"));
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Text, DecodeRejectsInvalidUtf8) {
  EXPECT_THROW(text::decode("bad \xff byte"), DataError);
  EXPECT_EQ(text::length("naïve 北京"), 8u);
}

TEST(Text, TrimAndWhitespace) {
  EXPECT_EQ(text::trim("  a b \t"), "a b");
  EXPECT_TRUE(text::has_whitespace("took place"));
  EXPECT_TRUE(text::has_whitespace("took\xC2\xA0place"));
  EXPECT_FALSE(text::has_whitespace("far-right"));
}

TEST(LoadCanonical, AcceptsMatchingSpan) {
  std::istringstream in(record("He died.",
      R"({"start":3,"end":7,"trigger":"died","type":"life","subtype":"die"})"));
  const auto rows = read_canonical(in, "x");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].mentions[0].label(), "life.die");
}

TEST(LoadCanonical, RejectsCaseMismatch) {
  const auto err = error_of(record("He Died.",
      R"({"start":3,"end":7,"trigger":"died","type":"life.die","subtype":null})"));
  EXPECT_NE(err.find("case mismatch"), std::string::npos) << err;
  EXPECT_NE(err.find("\"Died\""), std::string::npos) << err;
  EXPECT_NE(err.find("corpus.jsonl:1"), std::string::npos) << err;
}

TEST(LoadCanonical, RejectsOutOfBoundsSpan) {
  const auto err = error_of(record("He died.",
      R"({"start":3,"end":12,"trigger":"died.","type":"life","subtype":null})"));
  EXPECT_NE(err.find("out of bounds"), std::string::npos) << err;
}

TEST(LoadCanonical, NamesLineAndField) {
  const std::string good = record("He died.", "", "a");
  auto err = error_of(good + "\n" + R"({"id":"b","text":"x","split":"train","mentions":[]})" + "\n");
  EXPECT_NE(err.find("corpus.jsonl:3"), std::string::npos) << err;
  EXPECT_NE(err.find("granularity"), std::string::npos) << err;

  err = error_of(good + "{not json\n");
  EXPECT_NE(err.find("corpus.jsonl:2"), std::string::npos) << err;

  err = error_of(record("He died.", R"({"start":"3","end":7,"trigger":"died","type":"t"})"));
  EXPECT_NE(err.find("\"start\""), std::string::npos) << err;

  err = error_of(record("He died.", R"({"start":-1,"end":7,"trigger":"died","type":"t"})"));
  EXPECT_NE(err.find("\"start\""), std::string::npos) << err;

  err = error_of(record("He died.", R"({"start":3,"end":7,"trigger":"died","type":""})"));
  EXPECT_NE(err.find("empty event type"), std::string::npos) << err;
}

TEST(LoadCanonical, RejectsDuplicateIdsAndMentions) {
  EXPECT_NE(error_of(record("a", "", "same") + record("b", "", "same")).find("duplicate instance id"),
            std::string::npos);
  const std::string m = R"({"start":3,"end":7,"trigger":"died","type":"life","subtype":"die"})";
  EXPECT_NE(error_of(record("He died.", m + "," + m)).find("duplicate"), std::string::npos);
}

TEST(LoadCanonical, AcceptsMultiClassAndNestedSpans) {
  std::istringstream in(record("It took place.",
      R"({"start":3,"end":13,"trigger":"took place","type":"a","subtype":null},)"
      R"({"start":3,"end":13,"trigger":"took place","type":"b","subtype":null},)"
      R"({"start":8,"end":13,"trigger":"place","type":"c","subtype":null})"));
  const Corpus c("c", read_canonical(in, "x"));
  EXPECT_EQ(c.instances()[0].mentions.size(), 3u);
}

TEST(LoadCanonical, OffsetsAreScalarValues) {
  std::istringstream in(record("Zürich 爆発 ok",
      R"({"start":7,"end":9,"trigger":"爆発","type":"attack","subtype":null})"));
  EXPECT_NO_THROW(Corpus("c", read_canonical(in, "x")));
}

TEST(LoadCanonical, FileNameBecomesCorpusName) {
  const auto c = load_canonical(fixture("calais_example.jsonl"));
  EXPECT_EQ(c.name(), "calais_example");
  EXPECT_EQ(c.size(), 1u);
  EXPECT_THROW(load_canonical(fixture("does_not_exist.jsonl")), DataError);
}

TEST(Canonical, RoundTripIdentity) {
  gen::Rng rng(5);
  TempDir tmp;
  for (int round = 0; round < 20; ++round) {
    const Corpus c("corpus", gen::instances(rng, 50));
    write_canonical(c, tmp / "corpus.jsonl");
    EXPECT_EQ(load_canonical(tmp / "corpus.jsonl"), c);
  }
}

TEST(Canonical, WritesNullSubtypeAndRawUtf8) {
  Instance inst{"u", "Zürich burned.", {}, Split::dev, Granularity::window};
  inst.mentions.push_back(gen::mention("burned", 7, "fire"));
  std::ostringstream out;
  write_canonical(Corpus("c", {inst}), out);
  EXPECT_EQ(out.str(),
            "{\"id\":\"u\",\"text\":\"Zürich burned.\",\"split\":\"dev\","
            "\"granularity\":\"window\",\"mentions\":[{\"start\":7,\"end\":13,"
            "\"trigger\":\"burned\",\"type\":\"fire\",\"subtype\":null}]}\n");
}

TEST(FilterPositive, DropsNegatives) {
  gen::Rng rng(1);
  std::vector<Instance> rows;
  for (int i = 0; i < 3; ++i) {
    auto inst = gen::instance(rng, "i" + std::to_string(i));
    while (!inst.positive()) inst = gen::instance(rng, "i" + std::to_string(i));
    rows.push_back(inst);
  }
  rows[1].mentions.clear();
  const Corpus c("c", rows);
  const auto f = filter_positive(c);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f.instances()[0].id, "i0");
  EXPECT_EQ(f.instances()[1].id, "i2");
  EXPECT_EQ(filter_positive(f), f);
}

TEST(FilterPositive, AllNegativeGivesEmpty) {
  Corpus c("c", {{"a", "x", {}, Split::train, Granularity::sentence},
                 {"b", "y", {}, Split::test, Granularity::sentence}});
  EXPECT_TRUE(filter_positive(c).empty());
}

TEST(Corpus, TypeInventoryFromTrainOnly) {
  Instance a{"a", "He died.", {gen::mention("died", 3, "life.die")}, Split::train,
             Granularity::sentence};
  Instance b{"b", "They fought.", {gen::mention("fought", 5, "conflict.attack")},
             Split::test, Granularity::sentence};
  const Corpus c("c", {a, b});
  EXPECT_EQ(c.type_inventory(), (std::set<std::string>{"life.die"}));
}
