#include <sys/wait.h>

#include <cstdlib>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "edkit/ingest.hpp"
#include "edkit/manifest.hpp"
#include "generators.hpp"
#include "paths.hpp"

namespace {

std::string quote(const std::string& s) { return "'" + s + "'"; }

/// Runs the CLI, returns its exit status; stdout and stderr go to `log`.
int cli(const std::string& args, const std::filesystem::path& log) {
  const std::string cmd = quote(EDKIT_CLI) + " " + args + " > " + quote(log.string()) + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string p(const std::filesystem::path& path) { return quote(path.string()); }

}  // namespace

TEST(Cli, ConvertWritesCanonicalFileAndManifest) {
  TempDir tmp;
  const auto out = tmp / "rams.jsonl";
  ASSERT_EQ(cli("convert --in " + p(fixture("rams_train.jsonlines")) +
                " --format rams --out " + p(out), tmp / "log"), 0) << slurp(tmp / "log");
  EXPECT_EQ(edkit::load_canonical(out).size(), 2u);
  const auto m = edkit::read_manifest(edkit::manifest_path_for(out));
  EXPECT_EQ(m.command, "convert");
  EXPECT_EQ(m.config.at("format"), "rams");
  EXPECT_EQ(m.input_digests.size(), 1u);
  EXPECT_EQ(m.output_digests.at(out.string()), edkit::sha256_file(out));
}

TEST(Cli, ConvertIsIdempotent) {
  TempDir tmp;
  for (const auto* name : {"a.jsonl", "b.jsonl"})
    ASSERT_EQ(cli("convert --in " + p(fixture("wikievents_test.jsonl")) +
                  " --format wikievents --out " + p(tmp / name), tmp / "log"), 0);
  EXPECT_EQ(slurp(tmp / "a.jsonl"), slurp(tmp / "b.jsonl"));
}

TEST(Cli, ConvertCorruptInputFails) {
  TempDir tmp;
  spit(tmp / "bad.jsonl", "{\"doc_key\": \"d\"\n");
  EXPECT_EQ(cli("convert --in " + p(tmp / "bad.jsonl") + " --format rams --out " +
                p(tmp / "o.jsonl"), tmp / "log"), 1);
  EXPECT_NE(slurp(tmp / "log").find("bad.jsonl:1"), std::string::npos) << slurp(tmp / "log");
}

TEST(Cli, UsageErrorsExitOne) {
  TempDir tmp;
  EXPECT_EQ(cli("", tmp / "log"), 1);
  EXPECT_EQ(cli("convert --in x", tmp / "log"), 1);
  EXPECT_EQ(cli("convert --in " + p(fixture("rams_train.jsonlines")) +
                " --format ace --out " + p(tmp / "o"), tmp / "log"), 1);
  EXPECT_EQ(cli("--version", tmp / "log"), 0);
}

TEST(Cli, StatsOnRamsFixture) {
  TempDir tmp;
  ASSERT_EQ(cli("convert --in " + p(fixture("rams_train.jsonlines")) + " --format rams --out " +
                p(tmp / "rams.jsonl"), tmp / "log"), 0);
  ASSERT_EQ(cli("stats --in " + p(tmp / "rams.jsonl") + " --out " + p(tmp / "stats.json"),
                tmp / "log"), 0) << slurp(tmp / "log");
  const auto j = nlohmann::json::parse(slurp(tmp / "stats.json"));
  EXPECT_DOUBLE_EQ(j.at("all").at("neg_pct").get<double>(), 0.0);
  EXPECT_TRUE(j.at("all").at("zs_count").is_null());
  EXPECT_TRUE(std::filesystem::exists(tmp / "stats.json.manifest.json"));
}

TEST(Cli, StatsOnEmptyCorpusFails) {
  TempDir tmp;
  spit(tmp / "empty.jsonl", "");
  EXPECT_EQ(cli("stats --in " + p(tmp / "empty.jsonl") + " --out " + p(tmp / "s.json"),
                tmp / "log"), 1);
}

TEST(Cli, BuildIsDeterministicAndRecordsFlags) {
  TempDir tmp;
  gen::Rng rng(6);
  edkit::write_canonical(edkit::Corpus("rams", gen::instances(rng, 60)), tmp / "c.jsonl");
  for (const auto* name : {"a.jsonl", "b.jsonl"})
    ASSERT_EQ(cli("build --in " + p(tmp / "c.jsonl") + " --out " + p(tmp / name) +
                  " --tasks EI,EC,ED --variant instr --seed 5 --positive-only", tmp / "log"), 0)
        << slurp(tmp / "log");
  EXPECT_EQ(slurp(tmp / "a.jsonl"), slurp(tmp / "b.jsonl"));
  const auto m = edkit::read_manifest(tmp / "a.jsonl.manifest.json");
  EXPECT_EQ(m.config.at("seed"), 5);
  EXPECT_EQ(m.config.at("positive_only"), true);
  EXPECT_EQ(m.config.at("variant"), "instr");
  EXPECT_EQ(m.config.at("templates"), "builtin:c");
}

TEST(Cli, BuildWithTemplateFile) {
  TempDir tmp;
  gen::Rng rng(8);
  edkit::write_canonical(edkit::Corpus("c", gen::instances(rng, 10)), tmp / "c.jsonl");
  ASSERT_EQ(cli("templates --out " + p(tmp / "t.jsonl") + " --corpus maven", tmp / "log"), 0);
  ASSERT_EQ(cli("build --in " + p(tmp / "c.jsonl") + " --out " + p(tmp / "o.jsonl") +
                " --variant instr --templates " + p(tmp / "t.jsonl"), tmp / "log"), 0)
      << slurp(tmp / "log");
  EXPECT_EQ(cli("build --in " + p(tmp / "c.jsonl") + " --out " + p(tmp / "o.jsonl") +
                " --tasks EI,XX", tmp / "log"), 1);
}

TEST(Cli, EvaluateCalaisSingleTask) {
  TempDir tmp;
  ASSERT_EQ(cli("evaluate --in " + p(fixture("calais_example.jsonl")) + " --predictions " +
                p(fixture("calais_single_task.predictions.jsonl")) + " --out " +
                p(tmp / "r.json") + " --schemes multilabel --subset all", tmp / "log"), 0)
      << slurp(tmp / "log");
  const auto j = nlohmann::json::parse(slurp(tmp / "r.json"));
  const auto& ml = j.at("schemes").at("multilabel").at("all");
  EXPECT_EQ(ml.at("tp"), 1);
  EXPECT_EQ(ml.at("fn"), 1);
  EXPECT_EQ(ml.at("fp"), 0);
  EXPECT_FALSE(j.at("schemes").contains("token_micro"));
}

TEST(Cli, EvaluateMalformedGenerationsStillSucceeds) {
  TempDir tmp;
  ASSERT_EQ(cli("evaluate --in " + p(fixture("calais_example.jsonl")) + " --predictions " +
                p(fixture("calais_malformed.predictions.jsonl")) + " --out " +
                p(tmp / "r.json"), tmp / "log"), 0);
  const auto j = nlohmann::json::parse(slurp(tmp / "r.json"));
  EXPECT_EQ(j.at("diagnostics").at("parse_issues").at("missing_arrow"), 1);
}

TEST(Cli, EvaluateMissingIdsFails) {
  TempDir tmp;
  spit(tmp / "p.jsonl", R"({"instance_id":"other","task":"ED","generation":"NONE"})" "\n");
  EXPECT_EQ(cli("evaluate --in " + p(fixture("calais_example.jsonl")) + " --predictions " +
                p(tmp / "p.jsonl") + " --out " + p(tmp / "r.json"), tmp / "log"), 1);
  EXPECT_NE(slurp(tmp / "log").find("wikievents-calais"), std::string::npos);
}

TEST(Cli, ReplayReproducesOutputs) {
  TempDir tmp;
  gen::Rng rng(9);
  edkit::write_canonical(edkit::Corpus("c", gen::instances(rng, 30)), tmp / "c.jsonl");
  ASSERT_EQ(cli("build --in " + p(tmp / "c.jsonl") + " --out " + p(tmp / "o.jsonl") +
                " --seed 77", tmp / "log"), 0);
  EXPECT_EQ(cli("replay --manifest " + p(tmp / "o.jsonl.manifest.json"), tmp / "log"), 0)
      << slurp(tmp / "log");
  EXPECT_NE(slurp(tmp / "log").find("identical"), std::string::npos);

  spit(tmp / "c.jsonl", slurp(tmp / "c.jsonl") + "\n");
  EXPECT_EQ(cli("replay --manifest " + p(tmp / "o.jsonl.manifest.json"), tmp / "log"), 1);
}

TEST(Cli, CommandsDoNotModifyInputs) {
  TempDir tmp;
  const auto before = edkit::sha256_file(fixture("calais_example.jsonl"));
  cli("evaluate --in " + p(fixture("calais_example.jsonl")) + " --predictions " +
      p(fixture("calais_single_task.predictions.jsonl")) + " --out " + p(tmp / "r.json"),
      tmp / "log");
  cli("build --in " + p(fixture("calais_example.jsonl")) + " --out " + p(tmp / "b.jsonl"),
      tmp / "log");
  EXPECT_EQ(edkit::sha256_file(fixture("calais_example.jsonl")), before);
}
