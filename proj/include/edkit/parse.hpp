#pragma once

// Generated string -> structured prediction. Never throws on malformed
// generations; every problem becomes a ParseIssue and the offending field is
// skipped.

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "edkit/reformulate.hpp"
#include "edkit/text.hpp"

namespace edkit {

enum class IssueKind {
  missing_arrow,
  empty_item,
  duplicate_item,
  none_mixed_with_items,
  arrow_in_ei_or_ec,
};

inline constexpr IssueKind kAllIssueKinds[] = {
    IssueKind::missing_arrow, IssueKind::empty_item, IssueKind::duplicate_item,
    IssueKind::none_mixed_with_items, IssueKind::arrow_in_ei_or_ec};

inline std::string_view to_string(IssueKind k) {
  switch (k) {
    case IssueKind::missing_arrow: return "missing_arrow";
    case IssueKind::empty_item: return "empty_item";
    case IssueKind::duplicate_item: return "duplicate_item";
    case IssueKind::none_mixed_with_items: return "none_mixed_with_items";
    case IssueKind::arrow_in_ei_or_ec: return "arrow_in_ei_or_ec";
  }
  return "empty_item";
}

struct ParseIssue {
  IssueKind kind;
  std::string fragment;  // substring of the raw generation
  bool operator==(const ParseIssue&) const = default;
};

/// ED items carry both fields, EI only the trigger, EC only the type.
struct PredictedItem {
  std::optional<std::string> trigger;
  std::optional<std::string> type;
  bool operator==(const PredictedItem&) const = default;
};

struct ParsedPrediction {
  std::string instance_id;
  TaskKind task = TaskKind::ED;
  std::vector<PredictedItem> items;
  bool is_none = false;
  std::vector<ParseIssue> diagnostics;

  bool clean() const { return diagnostics.empty(); }
};

inline ParsedPrediction parse_generation(std::string_view raw, TaskKind task,
                                         std::string instance_id) {
  ParsedPrediction out;
  out.instance_id = std::move(instance_id);
  out.task = task;

  std::vector<std::string_view> fields;
  for (std::size_t pos = 0;;) {
    const auto bar = raw.find('|', pos);
    fields.push_back(raw.substr(pos, bar == std::string_view::npos
                                         ? std::string_view::npos
                                         : bar - pos));
    if (bar == std::string_view::npos) break;
    pos = bar + 1;
  }

  auto issue = [&](IssueKind k, std::string_view frag) {
    out.diagnostics.push_back({k, std::string(frag)});
  };

  std::vector<std::string_view> none_fields;
  for (std::string_view field : fields) {
    const std::string_view item = text::trim(field);
    if (item.empty()) {
      issue(IssueKind::empty_item, field);
      continue;
    }
    if (item == kNoneLabel) {
      if (!none_fields.empty()) issue(IssueKind::duplicate_item, item);
      none_fields.push_back(item);
      continue;
    }

    PredictedItem parsed;
    const auto arrow = item.find(kArrow);
    if (task == TaskKind::ED) {
      if (arrow == std::string_view::npos) {
        issue(IssueKind::missing_arrow, item);
        continue;
      }
      const auto trig = text::trim(item.substr(0, arrow));
      const auto type = text::trim(item.substr(arrow + kArrow.size()));
      if (trig.empty() || type.empty()) {
        issue(IssueKind::empty_item, item);
        continue;
      }
      parsed.trigger = std::string(trig);
      parsed.type = std::string(type);
    } else {
      if (arrow != std::string_view::npos) {
        issue(IssueKind::arrow_in_ei_or_ec, item);
        continue;
      }
      (task == TaskKind::EI ? parsed.trigger : parsed.type) = std::string(item);
    }

    if (std::find(out.items.begin(), out.items.end(), parsed) != out.items.end()) {
      issue(IssueKind::duplicate_item, item);
      continue;
    }
    out.items.push_back(std::move(parsed));
  }

  if (!none_fields.empty()) {
    if (out.items.empty()) {
      out.is_none = true;
    } else {
      issue(IssueKind::none_mixed_with_items, none_fields.front());
    }
  }
  return out;
}

}  // namespace edkit
