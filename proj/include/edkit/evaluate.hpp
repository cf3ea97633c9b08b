#pragma once

// End-to-end scoring of raw generations against a set of gold instances:
// parse -> project -> every requested scheme x subset.
//
// Predictions file, one object per line (written by the model runner):
//   {"instance_id": str, "task": "EI"|"EC"|"ED", "generation": str}

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "edkit/align.hpp"
#include "edkit/corpus.hpp"
#include "edkit/error.hpp"
#include "edkit/eval.hpp"
#include "edkit/ingest.hpp"
#include "edkit/parse.hpp"

namespace edkit {

struct RawPrediction {
  std::string instance_id;
  TaskKind task = TaskKind::ED;
  std::string generation;
};

inline std::vector<RawPrediction> read_predictions(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  std::vector<RawPrediction> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(where + ": malformed JSON: " + e.what());
    }
    if (!j.is_object()) throw DataError(where + ": record is not a JSON object");
    RawPrediction p;
    p.instance_id = detail::require_string(j, "instance_id", where);
    try {
      p.task = parse_task(detail::require_string(j, "task", where));
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
    p.generation = detail::require_string(j, "generation", where);
    out.push_back(std::move(p));
  }
  return out;
}

inline void write_predictions(const std::vector<RawPrediction>& preds,
                              const std::filesystem::path& path) {
  auto out = detail::open_out(path);
  for (const auto& p : preds) {
    nlohmann::ordered_json j;
    j["instance_id"] = p.instance_id;
    j["task"] = to_string(p.task);
    j["generation"] = p.generation;
    out << detail::dump_line(j) << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

struct EvalDiagnostics {
  std::size_t instances = 0;
  std::size_t positive_instances = 0;
  std::size_t predictions_with_issues = 0;
  std::map<std::string, std::size_t> parse_issues;  // by IssueKind name
  std::size_t hallucinations = 0;
  std::size_t ambiguous_instances = 0;
};

struct EvaluationOptions {
  std::vector<Scheme> schemes{std::begin(kAllSchemes), std::end(kAllSchemes)};
  std::vector<Subset> subsets{Subset::all, Subset::pos};
  OccurrencePolicy occurrence = OccurrencePolicy::all;
};

struct EvaluationResult {
  std::vector<MetricsReport> reports;
  EvalDiagnostics diagnostics;

  const MetricsReport* find(Scheme s, Subset sub) const {
    for (const auto& r : reports)
      if (r.scheme == s && r.subset == sub) return &r;
    return nullptr;
  }
};

/// Selects the ED predictions for `instances` and parses them. Throws
/// DataError listing ids without a prediction, or with more than one.
inline std::vector<ParsedPrediction> parse_ed_predictions(
    const std::vector<Instance>& instances, const std::vector<RawPrediction>& raw) {
  std::unordered_map<std::string, const RawPrediction*> by_id;
  std::vector<std::string> duplicates;
  for (const auto& p : raw) {
    if (p.task != TaskKind::ED) continue;
    if (!by_id.emplace(p.instance_id, &p).second) duplicates.push_back(p.instance_id);
  }
  if (!duplicates.empty())
    throw DataError("more than one ED prediction for instance \"" +
                    duplicates.front() + "\"");
  std::vector<std::string> missing;
  std::vector<ParsedPrediction> out;
  out.reserve(instances.size());
  for (const auto& inst : instances) {
    auto it = by_id.find(inst.id);
    if (it == by_id.end()) {
      missing.push_back(inst.id);
      continue;
    }
    out.push_back(parse_generation(it->second->generation, TaskKind::ED, inst.id));
  }
  if (!missing.empty()) {
    std::string msg = std::to_string(missing.size()) +
                      " instance(s) have no ED prediction:";
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i)
      msg += " \"" + missing[i] + "\"";
    if (missing.size() > 20) msg += " ...";
    throw DataError(msg);
  }
  return out;
}

inline EvaluationResult evaluate(const std::vector<Instance>& instances,
                                 const std::vector<ParsedPrediction>& predictions,
                                 const EvaluationOptions& options = {}) {
  EvaluationResult result;
  const auto index = detail::index_predictions(predictions);
  for (const auto& inst : instances)
    if (!detail::find_prediction(index, inst.id))
      throw DataError("no prediction for instance \"" + inst.id + "\"");

  auto& diag = result.diagnostics;
  for (const auto& kind : kAllIssueKinds) diag.parse_issues[std::string(to_string(kind))] = 0;
  diag.instances = instances.size();

  std::vector<TokenLabeling> gold_tokens, pred_tokens;
  std::vector<bool> positive;
  for (const auto& inst : instances) {
    const auto& pred = *detail::find_prediction(index, inst.id);
    if (inst.positive()) ++diag.positive_instances;
    if (!pred.clean()) ++diag.predictions_with_issues;
    for (const auto& issue : pred.diagnostics)
      ++diag.parse_issues[std::string(to_string(issue.kind))];
    auto proj = project(pred, inst.text, options.occurrence);
    diag.hallucinations += proj.hallucinations;
    diag.ambiguous_instances += proj.ambiguous;
    gold_tokens.push_back(gold_labeling(inst));
    pred_tokens.push_back(std::move(proj.labeling));
    positive.push_back(inst.positive());
  }

  const EvalSet all_set{instances, predictions};
  const auto [pos_set, _] = split_pos(all_set);

  for (Subset subset : options.subsets) {
    const EvalSet& set = subset == Subset::all ? all_set : pos_set;
    std::vector<TokenLabeling> g, p;
    for (std::size_t i = 0; i < instances.size(); ++i) {
      if (subset == Subset::pos && !positive[i]) continue;
      g.push_back(gold_tokens[i]);
      p.push_back(pred_tokens[i]);
    }
    for (Scheme scheme : options.schemes) {
      MetricsReport r;
      switch (scheme) {
        case Scheme::token_micro: r = eval_token_level(g, p, Averaging::micro); break;
        case Scheme::token_macro: r = eval_token_level(g, p, Averaging::macro); break;
        case Scheme::token_weighted: r = eval_token_level(g, p, Averaging::weighted); break;
        case Scheme::multilabel: r = eval_multilabel(set.instances, set.predictions); break;
        case Scheme::mwt_exact_match: r = eval_mwt(set.instances, set.predictions); break;
        case Scheme::mct_accuracy: r = eval_mct(set.instances, set.predictions); break;
      }
      r.subset = subset;
      result.reports.push_back(std::move(r));
    }
  }
  return result;
}

}  // namespace edkit
