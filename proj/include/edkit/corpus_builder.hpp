#pragma once

// Expansion of a corpus into text-to-text training/evaluation pairs.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "edkit/align.hpp"
#include "edkit/corpus.hpp"
#include "edkit/ingest.hpp"
#include "edkit/prompt.hpp"
#include "edkit/reformulate.hpp"

namespace edkit {

struct TaskExample {
  std::string instance_id;
  TaskKind task = TaskKind::ED;
  std::string source;
  std::string target;
  Split split = Split::train;
  bool operator==(const TaskExample&) const = default;
};

struct BuildConfig {
  std::vector<TaskKind> tasks{TaskKind::EI, TaskKind::EC, TaskKind::ED};
  PromptVariant variant = PromptVariant::tags;
  bool positive_only = false;  // applies to the train split
  std::uint64_t seed = 13;
  bool shuffle = true;
  bool eval_all_tasks = false;  // emit every configured task for dev/test too
  ItemOrder order = ItemOrder::annotation;
  std::size_t max_words_sentence = 512;
  std::size_t max_words_window = 1024;
};

struct BuildOutput {
  std::vector<TaskExample> examples;
  // Sources whose word count exceeds the configured model length. The kit
  // never truncates; the model runner's tokenizer does.
  std::vector<std::string> over_length;
};

namespace detail {

/// Fisher-Yates over mt19937_64 with rejection sampling, so the permutation
/// for a seed is identical on every standard library.
template <typename T>
void seeded_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::uint64_t bound = i;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r;
    do {
      r = rng();
    } while (r >= limit);
    std::swap(v[i - 1], v[r % bound]);
  }
}

}  // namespace detail

inline BuildOutput build_with_report(const Corpus& corpus,
                                     const BuildConfig& config,
                                     const TemplateSet& templates) {
  if (config.tasks.empty()) throw UsageError("build: no tasks configured");
  std::vector<TaskKind> tasks;
  for (TaskKind t : config.tasks)
    if (std::find(tasks.begin(), tasks.end(), t) == tasks.end()) tasks.push_back(t);
  for (TaskKind t : tasks)
    if (!templates.count(t))
      throw UsageError("build: no template for task " + std::string(to_string(t)));
  std::vector<TaskKind> eval_tasks =
      config.eval_all_tasks ? tasks : std::vector<TaskKind>{TaskKind::ED};
  const bool has_eval = std::any_of(
      corpus.instances().begin(), corpus.instances().end(),
      [](const Instance& i) { return i.split != Split::train; });
  if (has_eval)
    for (TaskKind t : eval_tasks)
      if (!templates.count(t))
        throw UsageError("build: no template for task " + std::string(to_string(t)));

  BuildOutput out;
  std::vector<TaskExample> by_split[3];
  for (const auto& inst : corpus.instances()) {
    const bool train = inst.split == Split::train;
    if (train && config.positive_only && !inst.positive()) continue;
    const std::size_t limit = inst.granularity == Granularity::sentence
                                  ? config.max_words_sentence
                                  : config.max_words_window;
    bool flagged = false;
    for (TaskKind t : train ? tasks : eval_tasks) {
      TaskExample ex;
      ex.instance_id = inst.id;
      ex.task = t;
      ex.source = render_input(inst.text, t, config.variant, templates.at(t));
      ex.target = make_target(inst, t, config.order).text;
      ex.split = inst.split;
      if (!flagged && tokenize(ex.source).size() > limit) {
        out.over_length.push_back(inst.id);
        flagged = true;
      }
      by_split[static_cast<int>(inst.split)].push_back(std::move(ex));
    }
  }

  std::mt19937_64 rng(config.seed);
  for (auto& group : by_split) {
    if (config.shuffle) detail::seeded_shuffle(group, rng);
    out.examples.insert(out.examples.end(), group.begin(), group.end());
  }
  return out;
}

inline std::vector<TaskExample> build(const Corpus& corpus,
                                      const BuildConfig& config,
                                      const TemplateSet& templates) {
  return build_with_report(corpus, config, templates).examples;
}

inline nlohmann::ordered_json to_json(const TaskExample& ex) {
  nlohmann::ordered_json j;
  j["instance_id"] = ex.instance_id;
  j["task"] = to_string(ex.task);
  j["source"] = ex.source;
  j["target"] = ex.target;
  j["split"] = to_string(ex.split);
  return j;
}

inline void write_examples(const std::vector<TaskExample>& examples,
                           std::ostream& out) {
  for (const auto& ex : examples) out << detail::dump_line(to_json(ex)) << '\n';
}

inline void write_examples(const std::vector<TaskExample>& examples,
                           const std::filesystem::path& path) {
  auto out = detail::open_out(path);
  write_examples(examples, out);
  out.flush();
  if (!out) throw DataError("write failed: " + path.string());
}

inline std::vector<TaskExample> read_examples(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  std::vector<TaskExample> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    try {
      const auto j = nlohmann::json::parse(line);
      TaskExample ex;
      ex.instance_id = detail::require_string(j, "instance_id", where);
      ex.task = parse_task(detail::require_string(j, "task", where));
      ex.source = detail::require_string(j, "source", where);
      ex.target = detail::require_string(j, "target", where);
      ex.split = parse_split(detail::require_string(j, "split", where));
      out.push_back(std::move(ex));
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(where + ": malformed JSON: " + e.what());
    }
  }
  return out;
}

}  // namespace edkit
