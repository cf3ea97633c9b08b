#pragma once

// Scoring schemes:
//   token_micro / token_macro / token_weighted  token-level labels
//   multilabel       instance-level sets of (trigger, type) pairs, NONE is a label
//   mwt_exact_match  exact-match accuracy over gold multi-word triggers
//   mct_accuracy     mean per-trigger type recall over multi-class triggers
//
// Zero denominators give 0 for P, R and F1. A scheme with nothing to score
// at all (no instances, no multi-word triggers, ...) is reported with
// defined == false and rendered as N/A.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "edkit/align.hpp"
#include "edkit/corpus.hpp"
#include "edkit/error.hpp"
#include "edkit/parse.hpp"

namespace edkit {

enum class Scheme {
  token_micro,
  token_macro,
  token_weighted,
  multilabel,
  mwt_exact_match,
  mct_accuracy,
};

inline constexpr Scheme kAllSchemes[] = {
    Scheme::token_micro, Scheme::token_macro,     Scheme::token_weighted,
    Scheme::multilabel,  Scheme::mwt_exact_match, Scheme::mct_accuracy};

inline std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::token_micro: return "token_micro";
    case Scheme::token_macro: return "token_macro";
    case Scheme::token_weighted: return "token_weighted";
    case Scheme::multilabel: return "multilabel";
    case Scheme::mwt_exact_match: return "mwt_exact_match";
    case Scheme::mct_accuracy: return "mct_accuracy";
  }
  return "token_micro";
}

inline Scheme parse_scheme(std::string_view s) {
  for (Scheme sc : kAllSchemes)
    if (to_string(sc) == s) return sc;
  throw UsageError("unknown scheme \"" + std::string(s) + "\"");
}

enum class Subset { all, pos };

inline std::string_view to_string(Subset s) {
  return s == Subset::all ? "all" : "pos";
}

enum class Averaging { micro, macro, weighted };

struct Counts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  Counts& operator+=(const Counts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  std::size_t support() const { return tp + fn; }
  bool operator==(const Counts&) const = default;
};

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

inline double safe_ratio(double num, double den) { return den > 0 ? num / den : 0.0; }

inline Prf prf(const Counts& c) {
  Prf out;
  out.precision = safe_ratio(c.tp, double(c.tp + c.fp));
  out.recall = safe_ratio(c.tp, double(c.tp + c.fn));
  out.f1 = safe_ratio(2.0 * out.precision * out.recall, out.precision + out.recall);
  return out;
}

struct TypeScore {
  Counts counts;
  Prf scores;
};

struct MetricsReport {
  Scheme scheme = Scheme::token_micro;
  Subset subset = Subset::all;
  std::size_t instances = 0;
  Counts counts;
  Prf scores;
  std::optional<double> accuracy;  // mwt / mct only
  bool defined = true;
  std::map<std::string, TypeScore> per_type;
  std::optional<Prf> relaxed;  // top-level type only, diagnostics
};

/// Top-level part of a two-level label ("conflict.attack" -> "conflict").
inline std::string coarse_label(const std::string& label) {
  return label.substr(0, label.find('.'));
}

namespace detail {

using TypeCounts = std::map<std::string, Counts>;

/// TP per label in both sets, FN per gold-only label, FP per
/// predicted-only label.
inline void count_sets(const LabelSet& gold, const LabelSet& pred,
                       TypeCounts& out) {
  for (const auto& g : gold) {
    if (std::binary_search(pred.begin(), pred.end(), g))
      ++out[g].tp;
    else
      ++out[g].fn;
  }
  for (const auto& p : pred)
    if (!std::binary_search(gold.begin(), gold.end(), p)) ++out[p].fp;
}

inline Counts total(const TypeCounts& tc) {
  Counts c;
  for (const auto& [_, v] : tc) c += v;
  return c;
}

inline LabelSet coarsen(const LabelSet& set) {
  LabelSet out;
  for (const auto& l : set) add_label(out, coarse_label(l));
  return out;
}

inline void fill_per_type(MetricsReport& r, const TypeCounts& tc) {
  for (const auto& [label, c] : tc) r.per_type[label] = {c, prf(c)};
}

inline Prf averaged(const TypeCounts& tc, Averaging avg, bool& defined) {
  if (avg == Averaging::micro) {
    const auto c = total(tc);
    defined = c.tp + c.fp + c.fn > 0;
    return prf(c);
  }
  Prf acc;
  double weight_sum = 0.0;
  for (const auto& [_, c] : tc) {
    if (c.support() == 0) continue;
    const double w = avg == Averaging::macro ? 1.0 : double(c.support());
    const Prf p = prf(c);
    acc.precision += w * p.precision;
    acc.recall += w * p.recall;
    acc.f1 += w * p.f1;
    weight_sum += w;
  }
  defined = weight_sum > 0;
  if (!defined) return {};
  acc.precision /= weight_sum;
  acc.recall /= weight_sum;
  acc.f1 /= weight_sum;
  return acc;
}

inline const ParsedPrediction* find_prediction(
    const std::unordered_map<std::string, const ParsedPrediction*>& index,
    const std::string& id) {
  auto it = index.find(id);
  return it == index.end() ? nullptr : it->second;
}

inline std::unordered_map<std::string, const ParsedPrediction*> index_predictions(
    const std::vector<ParsedPrediction>& preds) {
  std::unordered_map<std::string, const ParsedPrediction*> out;
  for (const auto& p : preds) out.emplace(p.instance_id, &p);
  return out;
}

/// Predicted trigger -> set of predicted types for that trigger.
inline std::map<std::string, std::set<std::string>> predicted_senses(
    const ParsedPrediction* pred) {
  std::map<std::string, std::set<std::string>> out;
  if (!pred) return out;
  for (const auto& item : pred->items)
    if (item.trigger) {
      auto& senses = out[*item.trigger];
      if (item.type) senses.insert(*item.type);
    }
  return out;
}

}  // namespace detail

inline MetricsReport eval_token_level(const std::vector<TokenLabeling>& gold,
                                      const std::vector<TokenLabeling>& pred,
                                      Averaging averaging) {
  if (gold.size() != pred.size()) {
    throw DataError("token-level evaluation: " + std::to_string(gold.size()) +
                    " gold labelings vs " + std::to_string(pred.size()) +
                    " predicted");
  }
  detail::TypeCounts tc, coarse;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto& g = gold[i];
    const auto& p = pred[i];
    if (g.instance_id != p.instance_id) {
      throw DataError("token-level evaluation: instance id mismatch at position " +
                      std::to_string(i) + " (\"" + g.instance_id + "\" vs \"" +
                      p.instance_id + "\")");
    }
    if (g.labels.size() != p.labels.size()) {
      throw DataError("token-level evaluation: instance \"" + g.instance_id +
                      "\" has " + std::to_string(g.labels.size()) +
                      " gold tokens vs " + std::to_string(p.labels.size()) +
                      " predicted");
    }
    for (std::size_t k = 0; k < g.labels.size(); ++k) {
      detail::count_sets(g.labels[k], p.labels[k], tc);
      detail::count_sets(detail::coarsen(g.labels[k]),
                         detail::coarsen(p.labels[k]), coarse);
    }
  }

  MetricsReport r;
  r.scheme = averaging == Averaging::micro   ? Scheme::token_micro
             : averaging == Averaging::macro ? Scheme::token_macro
                                             : Scheme::token_weighted;
  r.instances = gold.size();
  r.counts = detail::total(tc);
  bool defined = false;
  r.scores = detail::averaged(tc, averaging, defined);
  r.defined = defined && !gold.empty();
  bool coarse_defined = false;
  r.relaxed = detail::averaged(coarse, averaging, coarse_defined);
  detail::fill_per_type(r, tc);
  return r;
}

/// Instance-level gold label set: (trigger, rendered type) pairs, or
/// {NONE} for a negative instance.
inline std::set<std::pair<std::string, std::string>> gold_pairs(const Instance& inst) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& m : inst.mentions) out.emplace(m.trigger, m.label());
  if (out.empty()) out.emplace("", std::string(kNoneLabel));
  return out;
}

inline std::set<std::pair<std::string, std::string>> predicted_pairs(
    const ParsedPrediction& pred) {
  std::set<std::pair<std::string, std::string>> out;
  if (pred.is_none) {
    out.emplace("", std::string(kNoneLabel));
    return out;
  }
  for (const auto& item : pred.items)
    if (item.trigger && item.type) out.emplace(*item.trigger, *item.type);
  return out;
}

inline MetricsReport eval_multilabel(const std::vector<Instance>& gold,
                                     const std::vector<ParsedPrediction>& preds) {
  const auto index = detail::index_predictions(preds);
  detail::TypeCounts tc, coarse;
  for (const auto& inst : gold) {
    const auto* pred = detail::find_prediction(index, inst.id);
    if (!pred)
      throw DataError("multilabel evaluation: no prediction for instance \"" +
                      inst.id + "\"");
    const auto g = gold_pairs(inst);
    const auto p = predicted_pairs(*pred);
    for (const auto& pair : g) {
      const bool hit = p.count(pair) > 0;
      hit ? ++tc[pair.second].tp : ++tc[pair.second].fn;
    }
    for (const auto& pair : p)
      if (!g.count(pair)) ++tc[pair.second].fp;

    // Relaxed: trigger must match, type compared at the top level only.
    std::set<std::pair<std::string, std::string>> gc, pc;
    for (const auto& [t, l] : g) gc.emplace(t, coarse_label(l));
    for (const auto& [t, l] : p) pc.emplace(t, coarse_label(l));
    for (const auto& pair : gc) pc.count(pair) ? ++coarse[pair.second].tp
                                               : ++coarse[pair.second].fn;
    for (const auto& pair : pc)
      if (!gc.count(pair)) ++coarse[pair.second].fp;
  }
  MetricsReport r;
  r.scheme = Scheme::multilabel;
  r.instances = gold.size();
  r.counts = detail::total(tc);
  r.scores = prf(r.counts);
  r.defined = !gold.empty();
  r.relaxed = prf(detail::total(coarse));
  detail::fill_per_type(r, tc);
  return r;
}

inline bool is_multi_word(std::string_view trigger) {
  return text::has_whitespace(trigger);
}

/// Each distinct multi-word trigger string of an instance counts once.
inline MetricsReport eval_mwt(const std::vector<Instance>& gold,
                              const std::vector<ParsedPrediction>& preds) {
  const auto index = detail::index_predictions(preds);
  MetricsReport r;
  r.scheme = Scheme::mwt_exact_match;
  r.instances = gold.size();
  for (const auto& inst : gold) {
    std::set<std::string> mwts;
    for (const auto& m : inst.mentions)
      if (is_multi_word(m.trigger)) mwts.insert(m.trigger);
    if (mwts.empty()) continue;
    const auto senses = detail::predicted_senses(detail::find_prediction(index, inst.id));
    for (const auto& t : mwts) senses.count(t) ? ++r.counts.tp : ++r.counts.fn;
  }
  r.scores = prf(r.counts);
  const auto denom = r.counts.tp + r.counts.fn;
  r.defined = denom > 0;
  if (r.defined) r.accuracy = double(r.counts.tp) / double(denom);
  return r;
}

/// A multi-class trigger is one trigger string carrying k >= 2 distinct
/// types within an instance; it scores |predicted types ∩ gold types| / k.
inline MetricsReport eval_mct(const std::vector<Instance>& gold,
                              const std::vector<ParsedPrediction>& preds) {
  const auto index = detail::index_predictions(preds);
  MetricsReport r;
  r.scheme = Scheme::mct_accuracy;
  r.instances = gold.size();
  double sum = 0.0;
  std::size_t triggers = 0;
  for (const auto& inst : gold) {
    std::map<std::string, std::set<std::string>> senses;
    for (const auto& m : inst.mentions) senses[m.trigger].insert(m.label());
    const auto predicted =
        detail::predicted_senses(detail::find_prediction(index, inst.id));
    for (const auto& [trigger, types] : senses) {
      if (types.size() < 2) continue;
      std::size_t hit = 0;
      if (auto it = predicted.find(trigger); it != predicted.end())
        for (const auto& t : types) hit += it->second.count(t);
      sum += double(hit) / double(types.size());
      ++triggers;
      r.counts.tp += hit;
      r.counts.fn += types.size() - hit;
    }
  }
  r.scores = prf(r.counts);
  r.defined = triggers > 0;
  if (r.defined) r.accuracy = sum / double(triggers);
  return r;
}

/// Instances paired with their ED predictions.
struct EvalSet {
  std::vector<Instance> instances;
  std::vector<ParsedPrediction> predictions;
};

/// Returns (pos, all): pos keeps only instances with at least one gold
/// mention, together with their predictions.
inline std::pair<EvalSet, EvalSet> split_pos(const EvalSet& all) {
  EvalSet pos;
  const auto index = detail::index_predictions(all.predictions);
  for (const auto& inst : all.instances) {
    if (!inst.positive()) continue;
    pos.instances.push_back(inst);
    if (const auto* p = detail::find_prediction(index, inst.id))
      pos.predictions.push_back(*p);
  }
  return {std::move(pos), all};
}

}  // namespace edkit
