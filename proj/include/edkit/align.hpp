#pragma once

// Projection of trigger strings onto token-level labels.

#include <algorithm>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "edkit/corpus.hpp"
#include "edkit/parse.hpp"
#include "edkit/text.hpp"

namespace edkit {

struct Token {
  std::string text;
  std::size_t start = 0;
  std::size_t end = 0;
  bool operator==(const Token&) const = default;
};

namespace detail {

inline std::vector<Token> tokenize(const std::u32string& cps) {
  std::vector<Token> out;
  auto emit = [&](std::size_t b, std::size_t e) {
    out.push_back({text::slice(cps, b, e), b, e});
  };
  std::size_t i = 0;
  while (i < cps.size()) {
    if (text::is_space(cps[i])) {
      ++i;
      continue;
    }
    std::size_t chunk_end = i;
    while (chunk_end < cps.size() && !text::is_space(cps[chunk_end])) ++chunk_end;

    std::size_t b = i;
    std::size_t e = chunk_end;
    while (b < e && text::is_punct(cps[b])) {
      emit(b, b + 1);
      ++b;
    }
    std::size_t trail = e;
    while (trail > b && text::is_punct(cps[trail - 1])) --trail;
    if (b < trail) emit(b, trail);
    for (std::size_t p = trail; p < e; ++p) emit(p, p + 1);
    i = chunk_end;
  }
  return out;
}

}  // namespace detail

/// Whitespace tokenization with leading and trailing punctuation split off
/// one character at a time. Word-internal punctuation ("anti-migrant") stays.
inline std::vector<Token> tokenize(std::string_view utf8) {
  return detail::tokenize(text::decode(utf8));
}

/// Sorted set of labels carried by one token; empty means "O".
using LabelSet = std::vector<std::string>;

inline constexpr std::string_view kOutsideLabel = "O";

inline void add_label(LabelSet& set, const std::string& label) {
  auto it = std::lower_bound(set.begin(), set.end(), label);
  if (it == set.end() || *it != label) set.insert(it, label);
}

struct TokenLabeling {
  std::string instance_id;
  std::vector<Token> tokens;
  std::vector<LabelSet> labels;  // 1:1 with tokens

  /// Lexicographically first label per token, "O" when unlabeled.
  std::vector<std::string> single_label_view() const {
    std::vector<std::string> out;
    out.reserve(labels.size());
    for (const auto& set : labels)
      out.push_back(set.empty() ? std::string(kOutsideLabel) : set.front());
    return out;
  }

  bool operator==(const TokenLabeling&) const = default;
};

enum class OccurrencePolicy { all, first };

struct Projection {
  TokenLabeling labeling;
  std::size_t hallucinations = 0;  // predicted triggers with no match
  bool ambiguous = false;          // some trigger matched more than once
};

/// Token-boundary aligned, case-exact occurrences of `needle` in `hay`, as
/// half-open scalar-value spans.
inline std::vector<std::pair<std::size_t, std::size_t>> find_trigger_spans(
    const std::u32string& hay, const std::u32string& needle,
    const std::vector<Token>& tokens) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (needle.empty()) return out;
  std::set<std::size_t> starts, ends;
  for (const auto& t : tokens) {
    starts.insert(t.start);
    ends.insert(t.end);
  }
  for (auto pos = hay.find(needle); pos != std::u32string::npos;
       pos = hay.find(needle, pos + 1)) {
    const auto end = pos + needle.size();
    if (starts.count(pos) && ends.count(end)) out.emplace_back(pos, end);
  }
  return out;
}

inline Projection project(const ParsedPrediction& prediction,
                          std::string_view text,
                          OccurrencePolicy policy = OccurrencePolicy::all) {
  if (prediction.task != TaskKind::ED)
    throw std::invalid_argument("project requires an ED prediction");
  const auto cps = text::decode(text);
  Projection out;
  out.labeling.instance_id = prediction.instance_id;
  out.labeling.tokens = detail::tokenize(cps);
  out.labeling.labels.assign(out.labeling.tokens.size(), {});
  const auto& tokens = out.labeling.tokens;

  for (const auto& item : prediction.items) {
    if (!item.trigger || !item.type) continue;
    auto spans = find_trigger_spans(cps, text::decode(*item.trigger), tokens);
    if (spans.empty()) {
      ++out.hallucinations;
      continue;
    }
    if (spans.size() > 1) out.ambiguous = true;
    if (policy == OccurrencePolicy::first) spans.resize(1);
    for (const auto& [b, e] : spans)
      for (std::size_t k = 0; k < tokens.size(); ++k)
        if (tokens[k].start >= b && tokens[k].end <= e)
          add_label(out.labeling.labels[k], *item.type);
  }
  return out;
}

/// Gold labels straight from mention offsets: every token overlapping a
/// mention span carries its label.
inline TokenLabeling gold_labeling(const Instance& inst) {
  TokenLabeling out;
  out.instance_id = inst.id;
  out.tokens = tokenize(inst.text);
  out.labels.assign(out.tokens.size(), {});
  for (const auto& m : inst.mentions)
    for (std::size_t k = 0; k < out.tokens.size(); ++k)
      if (out.tokens[k].start < m.end && out.tokens[k].end > m.start)
        add_label(out.labels[k], m.label());
  return out;
}

}  // namespace edkit
