#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "edkit/corpus.hpp"
#include "edkit/text.hpp"

namespace edkit {

/// Corpus statistics. Row-level figures are taken over every instance in
/// scope, negatives included. "Instances" percentages are over mentions.
struct DatasetStats {
  std::size_t rows = 0;
  std::size_t negative_rows = 0;
  std::size_t mentions = 0;
  double neg_pct = 0.0;

  double events_per_row_avg = 0.0;
  std::size_t events_per_row_max = 0;
  double types_per_row_avg = 0.0;
  std::size_t types_per_row_max = 0;

  std::size_t distinct_types = 0;
  std::map<std::string, std::size_t> rows_per_split;

  // Test-split types never seen in train; empty when either split is missing.
  std::optional<std::size_t> zs_count;
  std::vector<std::string> zs_types;

  std::size_t mwt_mentions = 0;  // mentions whose trigger has internal whitespace
  double mwt_pct_instances = 0.0;
  double mwt_pct_rows = 0.0;
  std::size_t mct_mentions = 0;  // mentions of a trigger with >= 2 types in its row
  double mct_pct_instances = 0.0;
  double mct_pct_rows = 0.0;

  std::vector<std::string> warnings;
};

namespace detail {

inline double pct(std::size_t num, std::size_t den) {
  return den ? 100.0 * double(num) / double(den) : 0.0;
}

}  // namespace detail

inline DatasetStats compute_stats(const std::vector<Instance>& rows,
                                  const std::vector<Instance>& train,
                                  const std::vector<Instance>& test) {
  DatasetStats s;
  s.rows = rows.size();
  std::set<std::string> all_types;
  std::size_t type_sum = 0, mwt_rows = 0, mct_rows = 0;

  for (const auto& inst : rows) {
    ++s.rows_per_split[std::string(to_string(inst.split))];
    if (!inst.positive()) ++s.negative_rows;
    s.mentions += inst.mentions.size();
    s.events_per_row_max = std::max(s.events_per_row_max, inst.mentions.size());

    std::set<std::string> row_types;
    std::map<std::string, std::set<std::string>> senses;
    bool has_mwt = false;
    for (const auto& m : inst.mentions) {
      row_types.insert(m.label());
      senses[m.trigger].insert(m.label());
      if (text::has_whitespace(m.trigger)) {
        ++s.mwt_mentions;
        has_mwt = true;
      }
    }
    bool has_mct = false;
    for (const auto& m : inst.mentions) {
      if (senses[m.trigger].size() >= 2) {
        ++s.mct_mentions;
        has_mct = true;
      }
    }
    mwt_rows += has_mwt;
    mct_rows += has_mct;
    type_sum += row_types.size();
    s.types_per_row_max = std::max(s.types_per_row_max, row_types.size());
    all_types.insert(row_types.begin(), row_types.end());
  }

  s.distinct_types = all_types.size();
  s.neg_pct = detail::pct(s.negative_rows, s.rows);
  s.events_per_row_avg = s.rows ? double(s.mentions) / double(s.rows) : 0.0;
  s.types_per_row_avg = s.rows ? double(type_sum) / double(s.rows) : 0.0;
  s.mwt_pct_instances = detail::pct(s.mwt_mentions, s.mentions);
  s.mwt_pct_rows = detail::pct(mwt_rows, s.rows);
  s.mct_pct_instances = detail::pct(s.mct_mentions, s.mentions);
  s.mct_pct_rows = detail::pct(mct_rows, s.rows);

  if (train.empty()) s.warnings.push_back("no train split: zero-shot count unavailable");
  if (test.empty()) s.warnings.push_back("no test split: zero-shot count unavailable");
  if (!train.empty() && !test.empty()) {
    const auto seen = train_type_inventory(train);
    std::set<std::string> unseen;
    for (const auto& inst : test)
      for (const auto& m : inst.mentions)
        if (!seen.count(m.label())) unseen.insert(m.label());
    s.zs_types.assign(unseen.begin(), unseen.end());
    s.zs_count = unseen.size();
  }
  return s;
}

/// Statistics over every instance of the corpus.
inline DatasetStats compute_stats(const Corpus& corpus) {
  return compute_stats(corpus.instances(), corpus.split(Split::train),
                       corpus.split(Split::test));
}

/// Statistics restricted to one split; the zero-shot count still compares
/// the corpus' test split against its train split.
inline DatasetStats compute_stats(const Corpus& corpus, Split split) {
  return compute_stats(corpus.split(split), corpus.split(Split::train),
                       corpus.split(Split::test));
}

}  // namespace edkit
