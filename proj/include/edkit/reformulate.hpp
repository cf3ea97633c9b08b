#pragma once

// Gold annotations -> delimited target strings.
//
//   EI:  "t1 | t2 | ..."            unique trigger strings
//   EC:  "e1 | e2 | ..."            unique rendered type labels
//   ED:  "t1->e1 | t2->e2 | ..."    unique (trigger, type) pairs
//
// An instance without mentions renders as "NONE" for every task.

#include <algorithm>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "edkit/corpus.hpp"
#include "edkit/error.hpp"
#include "edkit/text.hpp"

namespace edkit {

enum class TaskKind { EI, EC, ED };

inline constexpr TaskKind kAllTasks[] = {TaskKind::EI, TaskKind::EC, TaskKind::ED};

inline std::string_view to_string(TaskKind t) {
  switch (t) {
    case TaskKind::EI: return "EI";
    case TaskKind::EC: return "EC";
    case TaskKind::ED: return "ED";
  }
  return "ED";
}

inline TaskKind parse_task(std::string_view s) {
  if (s == "EI") return TaskKind::EI;
  if (s == "EC") return TaskKind::EC;
  if (s == "ED") return TaskKind::ED;
  throw DataError("unknown task \"" + std::string(s) + "\" (expected EI, EC or ED)");
}

inline constexpr std::string_view kNoneLabel = "NONE";
inline constexpr std::string_view kItemSeparator = " | ";
inline constexpr std::string_view kArrow = "->";

struct TargetString {
  TaskKind task = TaskKind::ED;
  std::string text;
  bool operator==(const TargetString&) const = default;
};

/// Item order within a target. Annotation order follows the instance's
/// mention list; offset order sorts mentions by start offset first (stable).
enum class ItemOrder { annotation, offset };

namespace detail {

inline void check_field(const Instance& inst, std::string_view what,
                        const std::string& value) {
  auto fail = [&](std::string_view why) {
    throw GrammarError("instance \"" + inst.id + "\": " + std::string(what) +
                       " \"" + value + "\" " + std::string(why));
  };
  if (value.empty()) fail("is empty");
  if (value.find('|') != std::string::npos) fail("contains the item delimiter '|'");
  if (value.find(kArrow) != std::string::npos) fail("contains the delimiter \"->\"");
  if (text::trim(value) != value) fail("has leading or trailing whitespace");
  if (value == kNoneLabel) fail("collides with the NONE label");
}

inline std::vector<const EventMention*> ordered_mentions(const Instance& inst,
                                                         ItemOrder order) {
  std::vector<const EventMention*> out;
  out.reserve(inst.mentions.size());
  for (const auto& m : inst.mentions) out.push_back(&m);
  if (order == ItemOrder::offset) {
    std::stable_sort(out.begin(), out.end(),
                     [](const EventMention* a, const EventMention* b) {
                       return a->start < b->start;
                     });
  }
  return out;
}

inline std::string join_items(const std::vector<std::string>& items) {
  if (items.empty()) return std::string(kNoneLabel);
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += kItemSeparator;
    out += items[i];
  }
  return out;
}

inline void push_unique(std::vector<std::string>& items, std::string item) {
  if (std::find(items.begin(), items.end(), item) == items.end())
    items.push_back(std::move(item));
}

}  // namespace detail

/// Throws GrammarError when a trigger or type of `inst` cannot be expressed
/// in the target grammar without ambiguity.
inline void check_renderable(const Instance& inst) {
  for (const auto& m : inst.mentions) {
    detail::check_field(inst, "trigger", m.trigger);
    detail::check_field(inst, "event type", m.label());
  }
}

inline TargetString make_ei_target(const Instance& inst,
                                   ItemOrder order = ItemOrder::annotation) {
  check_renderable(inst);
  std::vector<std::string> items;
  for (const auto* m : detail::ordered_mentions(inst, order))
    detail::push_unique(items, m->trigger);
  return {TaskKind::EI, detail::join_items(items)};
}

inline TargetString make_ec_target(const Instance& inst,
                                   ItemOrder order = ItemOrder::annotation) {
  check_renderable(inst);
  std::vector<std::string> items;
  for (const auto* m : detail::ordered_mentions(inst, order))
    detail::push_unique(items, m->label());
  return {TaskKind::EC, detail::join_items(items)};
}

inline TargetString make_ed_target(const Instance& inst,
                                   ItemOrder order = ItemOrder::annotation) {
  check_renderable(inst);
  // Group by trigger (first appearance), then by type in annotation order,
  // so every sense of a multi-class trigger sits next to the others.
  std::vector<std::string> triggers;
  std::map<std::string, std::vector<std::string>> types;
  for (const auto* m : detail::ordered_mentions(inst, order)) {
    detail::push_unique(triggers, m->trigger);
    detail::push_unique(types[m->trigger], m->label());
  }
  std::vector<std::string> items;
  for (const auto& t : triggers)
    for (const auto& label : types[t])
      items.push_back(t + std::string(kArrow) + label);
  return {TaskKind::ED, detail::join_items(items)};
}

inline TargetString make_target(const Instance& inst, TaskKind task,
                                ItemOrder order = ItemOrder::annotation) {
  switch (task) {
    case TaskKind::EI: return make_ei_target(inst, order);
    case TaskKind::EC: return make_ec_target(inst, order);
    case TaskKind::ED: return make_ed_target(inst, order);
  }
  return make_ed_target(inst, order);
}

inline std::map<TaskKind, TargetString> targets_for(
    const Instance& inst, ItemOrder order = ItemOrder::annotation) {
  std::map<TaskKind, TargetString> out;
  for (TaskKind t : kAllTasks) out.emplace(t, make_target(inst, t, order));
  return out;
}

}  // namespace edkit
