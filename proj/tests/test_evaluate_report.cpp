#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "edkit/evaluate.hpp"
#include "edkit/manifest.hpp"
#include "edkit/report.hpp"
#include "edkit/stats.hpp"
#include "generators.hpp"
#include "paths.hpp"

using namespace edkit;

namespace {

std::vector<RawPrediction> gold_predictions(const std::vector<Instance>& rows) {
  std::vector<RawPrediction> out;
  for (const auto& inst : rows)
    out.push_back({inst.id, TaskKind::ED, make_ed_target(inst).text});
  return out;
}

}  // namespace

TEST(Evaluate, RoundTrippedGoldScoresPerfectly) {
  gen::Rng rng(12);
  const auto rows = gen::instances(rng, 300);
  const auto parsed = parse_ed_predictions(rows, gold_predictions(rows));
  const auto result = evaluate(rows, parsed);
  EXPECT_EQ(result.reports.size(), 12u);
  for (const auto& r : result.reports) {
    ASSERT_TRUE(r.defined) << to_string(r.scheme);
    EXPECT_DOUBLE_EQ(r.scores.f1, 1.0) << to_string(r.scheme) << " " << to_string(r.subset);
    if (r.accuracy) EXPECT_DOUBLE_EQ(*r.accuracy, 1.0);
  }
  EXPECT_EQ(result.diagnostics.predictions_with_issues, 0u);
  EXPECT_EQ(result.diagnostics.hallucinations, 0u);
}

TEST(Evaluate, CountsDiagnostics) {
  const auto c = load_canonical(fixture("calais_example.jsonl"));
  const auto raw = read_predictions(fixture("calais_malformed.predictions.jsonl"));
  const auto result = evaluate(c.instances(), parse_ed_predictions(c.instances(), raw));
  const auto& d = result.diagnostics;
  EXPECT_EQ(d.predictions_with_issues, 1u);
  EXPECT_EQ(d.parse_issues.at("duplicate_item"), 1u);
  EXPECT_EQ(d.parse_issues.at("missing_arrow"), 1u);
  EXPECT_EQ(d.parse_issues.at("none_mixed_with_items"), 1u);
  EXPECT_EQ(d.parse_issues.at("empty_item"), 0u);
  const auto* ml = result.find(Scheme::multilabel, Subset::all);
  ASSERT_NE(ml, nullptr);
  EXPECT_EQ(ml->counts, (Counts{1, 0, 1}));
}

TEST(Evaluate, CountsHallucinationsAndAmbiguity) {
  Instance inst{"a", "He died and she died.", {gen::mention("died", 3, "life.die")},
                Split::test, Granularity::sentence};
  const auto result = evaluate({inst}, {parse_generation("died->life.die | flew->x", TaskKind::ED, "a")});
  EXPECT_EQ(result.diagnostics.hallucinations, 1u);
  EXPECT_EQ(result.diagnostics.ambiguous_instances, 1u);
}

TEST(Evaluate, MissingAndDuplicatePredictions) {
  gen::Rng rng(13);
  const auto rows = gen::instances(rng, 5);
  auto preds = gold_predictions(rows);
  preds.erase(preds.begin() + 2);
  try {
    parse_ed_predictions(rows, preds);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find(rows[2].id), std::string::npos) << e.what();
  }
  auto dup = gold_predictions(rows);
  dup.push_back(dup.front());
  EXPECT_THROW(parse_ed_predictions(rows, dup), DataError);
  auto other_tasks = gold_predictions(rows);
  other_tasks.push_back({rows[0].id, TaskKind::EI, "whatever"});
  EXPECT_NO_THROW(parse_ed_predictions(rows, other_tasks));
  EXPECT_THROW(evaluate(rows, {}), DataError);
}

TEST(Predictions, FileRoundTripAndErrors) {
  TempDir tmp;
  const std::vector<RawPrediction> preds{{"a", TaskKind::ED, "died->life.die"},
                                         {"b", TaskKind::EI, "Überfall | NONE"}};
  write_predictions(preds, tmp / "p.jsonl");
  const auto back = read_predictions(tmp / "p.jsonl");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].generation, "Überfall | NONE");
  EXPECT_EQ(back[1].task, TaskKind::EI);

  spit(tmp / "bad.jsonl", R"({"instance_id":"a","task":"XX","generation":""})" "\n");
  EXPECT_THROW(read_predictions(tmp / "bad.jsonl"), DataError);
  spit(tmp / "bad2.jsonl", R"({"instance_id":"a","task":"ED"})" "\n");
  EXPECT_THROW(read_predictions(tmp / "bad2.jsonl"), DataError);
}

TEST(Report, JsonLayout) {
  const auto c = load_canonical(fixture("calais_example.jsonl"));
  const auto raw = read_predictions(fixture("calais_single_task.predictions.jsonl"));
  const auto result = evaluate(c.instances(), parse_ed_predictions(c.instances(), raw));
  const auto j = to_json(result, compute_stats(c));
  const auto& ml = j.at("schemes").at("multilabel").at("all");
  EXPECT_EQ(ml.at("tp"), 1);
  EXPECT_EQ(ml.at("fn"), 1);
  EXPECT_EQ(ml.at("fp"), 0);
  EXPECT_DOUBLE_EQ(ml.at("f1").get<double>(), 2.0 / 3.0);
  EXPECT_TRUE(ml.at("per_type").contains("conflict.attack"));
  const auto& mwt = j.at("schemes").at("mwt_exact_match").at("pos");
  EXPECT_EQ(mwt.at("f1"), "N/A");
  EXPECT_EQ(mwt.at("accuracy"), "N/A");
  EXPECT_TRUE(j.at("schemes").at("token_micro").at("all").contains("relaxed_type_only"));
  EXPECT_EQ(j.at("diagnostics").at("instances"), 1);
  EXPECT_TRUE(j.at("stats").contains("neg_pct"));

  const auto table = render_table(result.reports);
  EXPECT_NE(table.find("multilabel"), std::string::npos);
  EXPECT_NE(table.find("66.67"), std::string::npos);
  EXPECT_NE(table.find("N/A"), std::string::npos);
}

TEST(Manifest, DigestAndRoundTrip) {
  TempDir tmp;
  spit(tmp / "abc.txt", "abc");
  EXPECT_EQ(sha256_file(tmp / "abc.txt"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  RunManifest m;
  m.command = "build";
  m.argv = {"build", "--in", "x"};
  m.config = {{"seed", 13}};
  m.add_input(tmp / "abc.txt");
  write_manifest(m, tmp / "out.jsonl");
  EXPECT_TRUE(std::filesystem::exists(tmp / "out.jsonl.manifest.json"));
  const auto back = read_manifest(tmp / "out.jsonl.manifest.json");
  EXPECT_EQ(back.command, "build");
  EXPECT_EQ(back.argv, m.argv);
  EXPECT_EQ(back.input_digests, m.input_digests);
  EXPECT_EQ(back.config.at("seed"), 13);
  EXPECT_EQ(back.tool_version, kToolVersion);
}
