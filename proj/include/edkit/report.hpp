#pragma once

#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "edkit/corpus_builder.hpp"
#include "edkit/eval.hpp"
#include "edkit/evaluate.hpp"
#include "edkit/stats.hpp"

namespace edkit {

inline nlohmann::ordered_json to_json(const Counts& c) {
  return {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}};
}

inline nlohmann::ordered_json to_json(const Prf& p) {
  return {{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}};
}

inline nlohmann::ordered_json to_json(const MetricsReport& r) {
  nlohmann::ordered_json j;
  j["scheme"] = to_string(r.scheme);
  j["subset"] = to_string(r.subset);
  j["instances"] = r.instances;
  j["defined"] = r.defined;
  j["tp"] = r.counts.tp;
  j["fp"] = r.counts.fp;
  j["fn"] = r.counts.fn;
  if (r.defined) {
    j["precision"] = r.scores.precision;
    j["recall"] = r.scores.recall;
    j["f1"] = r.scores.f1;
  } else {
    for (const char* k : {"precision", "recall", "f1"}) j[k] = "N/A";
  }
  if (r.scheme == Scheme::mwt_exact_match || r.scheme == Scheme::mct_accuracy)
    j["accuracy"] = r.accuracy ? nlohmann::ordered_json(*r.accuracy)
                                : nlohmann::ordered_json("N/A");
  if (r.relaxed) j["relaxed_type_only"] = to_json(*r.relaxed);
  if (!r.per_type.empty()) {
    nlohmann::ordered_json pt = nlohmann::ordered_json::object();
    for (const auto& [label, ts] : r.per_type) {
      auto e = to_json(ts.counts);
      const auto scores = to_json(ts.scores);
      for (const auto& [k, v] : scores.items()) e[k] = v;
      pt[label] = std::move(e);
    }
    j["per_type"] = std::move(pt);
  }
  return j;
}

inline nlohmann::ordered_json to_json(const DatasetStats& s) {
  nlohmann::ordered_json j;
  j["rows"] = s.rows;
  j["rows_per_split"] = s.rows_per_split;
  j["negative_rows"] = s.negative_rows;
  j["neg_pct"] = s.neg_pct;
  j["mentions"] = s.mentions;
  j["distinct_types"] = s.distinct_types;
  j["events_per_row_avg"] = s.events_per_row_avg;
  j["events_per_row_max"] = s.events_per_row_max;
  j["types_per_row_avg"] = s.types_per_row_avg;
  j["types_per_row_max"] = s.types_per_row_max;
  j["zs_count"] = s.zs_count ? nlohmann::ordered_json(*s.zs_count) : nlohmann::ordered_json(nullptr);
  j["zs_types"] = s.zs_types;
  j["mwt_mentions"] = s.mwt_mentions;
  j["mwt_pct_instances"] = s.mwt_pct_instances;
  j["mwt_pct_rows"] = s.mwt_pct_rows;
  j["mct_mentions"] = s.mct_mentions;
  j["mct_pct_instances"] = s.mct_pct_instances;
  j["mct_pct_rows"] = s.mct_pct_rows;
  j["warnings"] = s.warnings;
  return j;
}

inline nlohmann::ordered_json to_json(const EvalDiagnostics& d) {
  nlohmann::ordered_json j;
  j["instances"] = d.instances;
  j["positive_instances"] = d.positive_instances;
  j["predictions_with_issues"] = d.predictions_with_issues;
  j["parse_issues"] = d.parse_issues;
  j["hallucinations"] = d.hallucinations;
  j["ambiguous_instances"] = d.ambiguous_instances;
  return j;
}

inline nlohmann::ordered_json to_json(const EvaluationResult& result,
                                      const DatasetStats& stats) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json schemes = nlohmann::ordered_json::object();
  for (const auto& r : result.reports)
    schemes[std::string(to_string(r.scheme))][std::string(to_string(r.subset))] =
        to_json(r);
  j["schemes"] = std::move(schemes);
  j["diagnostics"] = to_json(result.diagnostics);
  j["stats"] = to_json(stats);
  return j;
}

/// Aligned plain-text summary, one row per scheme x subset.
inline std::string render_table(const std::vector<MetricsReport>& reports) {
  std::ostringstream os;
  auto cell = [&](bool defined, double v) {
    std::ostringstream c;
    if (defined)
      c << std::fixed << std::setprecision(2) << 100.0 * v;
    else
      c << "N/A";
    return c.str();
  };
  os << std::left << std::setw(17) << "scheme" << std::setw(7) << "subset"
     << std::right << std::setw(9) << "P" << std::setw(9) << "R" << std::setw(9)
     << "F1" << std::setw(9) << "Acc" << std::setw(8) << "TP" << std::setw(8)
     << "FP" << std::setw(8) << "FN" << '\n';
  for (const auto& r : reports) {
    os << std::left << std::setw(17) << to_string(r.scheme) << std::setw(7)
       << to_string(r.subset) << std::right << std::setw(9)
       << cell(r.defined, r.scores.precision) << std::setw(9)
       << cell(r.defined, r.scores.recall) << std::setw(9)
       << cell(r.defined, r.scores.f1) << std::setw(9)
       << (r.accuracy ? cell(true, *r.accuracy)
           : (r.scheme == Scheme::mwt_exact_match || r.scheme == Scheme::mct_accuracy)
               ? std::string("N/A")
               : std::string("-"))
       << std::setw(8) << r.counts.tp << std::setw(8) << r.counts.fp
       << std::setw(8) << r.counts.fn << '\n';
  }
  return os.str();
}

}  // namespace edkit
