// edkit: command-line front end.
//
//   edkit convert   --in PATH --format FMT --out FILE
//   edkit stats     --in FILE [--out FILE]
//   edkit build     --in FILE --out FILE [--tasks EI,EC,ED] [--variant tags|instr]
//                   [--templates FILE] [--positive-only] [--seed N]
//   edkit evaluate  --in FILE --predictions FILE --out FILE [--schemes LIST]
//                   [--subset all|pos|both]
//   edkit templates --out FILE [--corpus NAME]
//   edkit replay    --manifest FILE
//
// Exit status: 0 success, 1 data or usage error, 2 internal error.
// EDM3_LOG sets log verbosity (spdlog level syntax, e.g. "debug").

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/cfg/helpers.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "edkit/edkit.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitInternal = 2;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto t = edkit::text::trim(item);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("edkit");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("EDM3_LOG"); env && *env)
    spdlog::cfg::helpers::load_levels(env);
}

struct ConvertOpts {
  std::string in, format, out, split;
  std::size_t type_levels = 2;
  bool keep_type_case = false;
};

struct StatsOpts {
  std::string in, out = "stats.json";
};

struct BuildOpts {
  std::string in, out, tasks = "EI,EC,ED", variant = "tags", templates, order = "annotation";
  bool positive_only = false, no_shuffle = false, eval_all_tasks = false;
  std::uint64_t seed = 13;
};

struct EvaluateOpts {
  std::string in, predictions, out, schemes = "all", subset = "both", split = "test",
                                    occurrence = "all";
};

struct TemplatesOpts {
  std::string out, corpus = "default";
};

struct ReplayOpts {
  std::string manifest;
};

int run(const std::vector<std::string>& args);

int cmd_convert(const ConvertOpts& o, const std::vector<std::string>& args) {
  edkit::AdaptOptions opt;
  opt.type_levels = o.type_levels;
  opt.lowercase_types = !o.keep_type_case;
  if (!o.split.empty()) opt.split = edkit::parse_split(o.split);
  edkit::AdaptStats stats;
  const auto corpus = edkit::adapt(o.in, o.format, opt, &stats);
  edkit::write_canonical(corpus, fs::path(o.out));
  spdlog::info("converted {} documents into {} instances", stats.documents,
               stats.instances);
  if (stats.duplicates_removed)
    spdlog::warn("removed {} duplicate annotations", stats.duplicates_removed);
  if (stats.trigger_text_mismatches)
    spdlog::warn("{} native trigger strings differ from their text slice; the slice was kept",
                 stats.trigger_text_mismatches);
  if (stats.discontinuous_skipped)
    spdlog::warn("skipped {} discontinuous trigger spans", stats.discontinuous_skipped);

  edkit::RunManifest m;
  m.command = "convert";
  m.argv = args;
  m.config = {{"in", o.in}, {"format", o.format}, {"out", o.out},
              {"split", o.split.empty() ? "inferred" : o.split},
              {"type_levels", o.type_levels}, {"keep_type_case", o.keep_type_case}};
  if (fs::is_regular_file(o.in)) m.add_input(o.in);
  m.add_output(o.out);
  edkit::write_manifest(m, o.out);
  std::cout << "wrote " << corpus.size() << " instances to " << o.out << '\n';
  return kExitOk;
}

int cmd_stats(const StatsOpts& o, const std::vector<std::string>& args) {
  const auto corpus = edkit::load_canonical(o.in);
  if (corpus.empty()) throw edkit::DataError("corpus " + o.in + " is empty");
  nlohmann::ordered_json j;
  const auto all = edkit::compute_stats(corpus);
  for (const auto& w : all.warnings) spdlog::warn("{}", w);
  j["all"] = edkit::to_json(all);
  for (edkit::Split s : {edkit::Split::train, edkit::Split::dev, edkit::Split::test})
    if (!corpus.split(s).empty())
      j[std::string(edkit::to_string(s))] = edkit::to_json(edkit::compute_stats(corpus, s));
  {
    auto os = edkit::detail::open_out(o.out);
    os << j.dump(2) << '\n';
  }
  std::cout << j.dump(2) << '\n';

  edkit::RunManifest m;
  m.command = "stats";
  m.argv = args;
  m.config = {{"in", o.in}, {"out", o.out}};
  m.add_input(o.in);
  m.add_output(o.out);
  edkit::write_manifest(m, o.out);
  return kExitOk;
}

int cmd_build(const BuildOpts& o, const std::vector<std::string>& args) {
  const auto corpus = edkit::load_canonical(o.in);
  edkit::BuildConfig cfg;
  cfg.tasks.clear();
  for (const auto& t : split_list(o.tasks)) cfg.tasks.push_back(edkit::parse_task(t));
  cfg.variant = edkit::parse_variant(o.variant);
  cfg.positive_only = o.positive_only;
  cfg.seed = o.seed;
  cfg.shuffle = !o.no_shuffle;
  cfg.eval_all_tasks = o.eval_all_tasks;
  if (o.order == "annotation")
    cfg.order = edkit::ItemOrder::annotation;
  else if (o.order == "offset")
    cfg.order = edkit::ItemOrder::offset;
  else
    throw edkit::UsageError("unknown --order \"" + o.order + "\"");

  const auto templates = o.templates.empty() ? edkit::default_templates(corpus.name())
                                             : edkit::load_templates(o.templates);
  const auto result = edkit::build_with_report(corpus, cfg, templates);
  edkit::write_examples(result.examples, fs::path(o.out));
  for (const auto& id : result.over_length)
    spdlog::warn("instance {} exceeds the configured input length", id);

  edkit::RunManifest m;
  m.command = "build";
  m.argv = args;
  m.config = {{"in", o.in},
              {"out", o.out},
              {"tasks", o.tasks},
              {"variant", o.variant},
              {"templates", o.templates.empty() ? "builtin:" + corpus.name() : o.templates},
              {"positive_only", o.positive_only},
              {"seed", o.seed},
              {"shuffle", !o.no_shuffle},
              {"eval_all_tasks", o.eval_all_tasks},
              {"order", o.order},
              {"max_words_sentence", cfg.max_words_sentence},
              {"max_words_window", cfg.max_words_window},
              {"over_length_instances", result.over_length}};
  m.add_input(o.in);
  if (!o.templates.empty()) m.add_input(o.templates);
  m.add_output(o.out);
  edkit::write_manifest(m, o.out);
  std::cout << "wrote " << result.examples.size() << " examples to " << o.out << '\n';
  return kExitOk;
}

int cmd_evaluate(const EvaluateOpts& o, const std::vector<std::string>& args) {
  const auto corpus = edkit::load_canonical(o.in);
  std::vector<edkit::Instance> instances;
  if (o.split == "all") {
    instances = corpus.instances();
  } else {
    instances = corpus.split(edkit::parse_split(o.split));
  }
  if (instances.empty())
    throw edkit::DataError("no instances in split \"" + o.split + "\" of " + o.in);

  edkit::EvaluationOptions opt;
  if (o.schemes != "all") {
    opt.schemes.clear();
    for (const auto& s : split_list(o.schemes)) opt.schemes.push_back(edkit::parse_scheme(s));
  }
  if (o.subset == "all")
    opt.subsets = {edkit::Subset::all};
  else if (o.subset == "pos")
    opt.subsets = {edkit::Subset::pos};
  else if (o.subset != "both")
    throw edkit::UsageError("unknown --subset \"" + o.subset + "\"");
  if (o.occurrence == "first")
    opt.occurrence = edkit::OccurrencePolicy::first;
  else if (o.occurrence != "all")
    throw edkit::UsageError("unknown --occurrence \"" + o.occurrence + "\"");

  const auto raw = edkit::read_predictions(o.predictions);
  const auto parsed = edkit::parse_ed_predictions(instances, raw);
  const auto result = edkit::evaluate(instances, parsed, opt);
  const auto stats = edkit::compute_stats(instances, corpus.split(edkit::Split::train),
                                          corpus.split(edkit::Split::test));
  {
    auto os = edkit::detail::open_out(o.out);
    os << edkit::to_json(result, stats).dump(2) << '\n';
  }
  std::cout << edkit::render_table(result.reports);
  const auto& d = result.diagnostics;
  std::cout << "instances " << d.instances << ", predictions with parse issues "
            << d.predictions_with_issues << ", hallucinated triggers "
            << d.hallucinations << ", multi-occurrence instances "
            << d.ambiguous_instances << '\n';

  edkit::RunManifest m;
  m.command = "evaluate";
  m.argv = args;
  m.config = {{"in", o.in},           {"predictions", o.predictions},
              {"out", o.out},         {"schemes", o.schemes},
              {"subset", o.subset},   {"split", o.split},
              {"occurrence", o.occurrence}};
  m.add_input(o.in);
  m.add_input(o.predictions);
  m.add_output(o.out);
  edkit::write_manifest(m, o.out);
  return kExitOk;
}

int cmd_templates(const TemplatesOpts& o, const std::vector<std::string>& args) {
  edkit::write_templates(edkit::default_templates(o.corpus), o.out);
  edkit::RunManifest m;
  m.command = "templates";
  m.argv = args;
  m.config = {{"out", o.out}, {"corpus", o.corpus}};
  m.add_output(o.out);
  edkit::write_manifest(m, o.out);
  return kExitOk;
}

int cmd_replay(const ReplayOpts& o) {
  const auto m = edkit::read_manifest(o.manifest);
  for (const auto& [path, digest] : m.input_digests) {
    if (!fs::exists(path) || edkit::sha256_file(path) != digest)
      throw edkit::DataError("input " + path + " changed since the recorded run");
  }
  const int rc = run(m.argv);
  if (rc != kExitOk) return rc;
  bool same = true;
  for (const auto& [path, digest] : m.output_digests) {
    const bool match = fs::exists(path) && edkit::sha256_file(path) == digest;
    std::cout << (match ? "identical " : "DIFFERENT ") << path << '\n';
    same = same && match;
  }
  return same ? kExitOk : kExitData;
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"Event detection as text generation: corpus conversion, "
               "multi-task corpus building and evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", edkit::kToolVersion);

  ConvertOpts conv;
  auto* convert = app.add_subcommand("convert", "Convert a native dataset to canonical JSON Lines");
  convert->add_option("--in", conv.in, "Native input file or directory")->required();
  convert->add_option("--format", conv.format, "rams | wikievents | maven | mlee-standoff")->required();
  convert->add_option("--out", conv.out, "Canonical output file")->required();
  convert->add_option("--split", conv.split, "Force the split tag (default: inferred from file names, else train)");
  convert->add_option("--type-levels", conv.type_levels, "Label levels kept (0 = all)")->capture_default_str();
  convert->add_flag("--keep-type-case", conv.keep_type_case, "Do not lower-case event types");

  StatsOpts st;
  auto* stats = app.add_subcommand("stats", "Dataset statistics for a canonical corpus");
  stats->add_option("--in", st.in, "Canonical corpus")->required();
  stats->add_option("--out", st.out, "Statistics JSON")->capture_default_str();

  BuildOpts bo;
  auto* build = app.add_subcommand("build", "Build a text-to-text task corpus");
  build->add_option("--in", bo.in, "Canonical corpus")->required();
  build->add_option("--out", bo.out, "TaskExample JSON Lines output")->required();
  build->add_option("--tasks", bo.tasks, "Comma list of EI, EC, ED")->capture_default_str();
  build->add_option("--variant", bo.variant, "tags | instr")->capture_default_str();
  build->add_option("--templates", bo.templates, "Template file (default: built-in templates)");
  build->add_flag("--positive-only", bo.positive_only, "Drop negative train instances");
  build->add_option("--seed", bo.seed, "Shuffle seed")->capture_default_str();
  build->add_flag("--no-shuffle", bo.no_shuffle, "Keep corpus order");
  build->add_flag("--eval-all-tasks", bo.eval_all_tasks, "Emit EI/EC examples for dev/test too");
  build->add_option("--order", bo.order, "Target item order: annotation | offset")->capture_default_str();

  EvaluateOpts eo;
  auto* evaluate = app.add_subcommand("evaluate", "Score generated predictions");
  evaluate->add_option("--in", eo.in, "Canonical corpus")->required();
  evaluate->add_option("--predictions", eo.predictions, "Predictions JSON Lines")->required();
  evaluate->add_option("--out", eo.out, "Report JSON")->required();
  evaluate->add_option("--schemes", eo.schemes,
                       "Comma list of token_micro, token_macro, token_weighted, "
                       "multilabel, mwt_exact_match, mct_accuracy, or all")
      ->capture_default_str();
  evaluate->add_option("--subset", eo.subset, "all | pos | both")->capture_default_str();
  evaluate->add_option("--split", eo.split, "train | dev | test | all")->capture_default_str();
  evaluate->add_option("--occurrence", eo.occurrence,
                       "Label all | first occurrence(s) of a predicted trigger")
      ->capture_default_str();

  TemplatesOpts to;
  auto* templates = app.add_subcommand("templates", "Write the built-in prompt templates");
  templates->add_option("--out", to.out, "Template file")->required();
  templates->add_option("--corpus", to.corpus, "Corpus whose label style the examples use")
      ->capture_default_str();

  ReplayOpts ro;
  auto* replay = app.add_subcommand("replay", "Re-run a recorded command and compare outputs");
  replay->add_option("--manifest", ro.manifest, "Manifest written by a previous run")->required();

  std::vector<const char*> argv{"edkit"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitData;
  }

  if (*convert) return cmd_convert(conv, args);
  if (*stats) return cmd_stats(st, args);
  if (*build) return cmd_build(bo, args);
  if (*evaluate) return cmd_evaluate(eo, args);
  if (*templates) return cmd_templates(to, args);
  if (*replay) return cmd_replay(ro);
  return kExitData;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  try {
    return run(std::vector<std::string>(argv + 1, argv + argc));
  } catch (const edkit::DataError& e) {
    spdlog::error("{}", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    spdlog::critical("internal error: {}", e.what());
    return kExitInternal;
  }
}
