#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_set>
#include <utility>
#include <vector>

#include "edkit/error.hpp"
#include "edkit/text.hpp"

namespace edkit {

enum class Split { train, dev, test };
enum class Granularity { sentence, window };

inline std::string_view to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::dev: return "dev";
    case Split::test: return "test";
  }
  return "train";
}

inline std::string_view to_string(Granularity g) {
  return g == Granularity::sentence ? "sentence" : "window";
}

inline Split parse_split(std::string_view s) {
  if (s == "train") return Split::train;
  if (s == "dev") return Split::dev;
  if (s == "test") return Split::test;
  throw DataError("unknown split \"" + std::string(s) +
                  "\" (expected train, dev or test)");
}

inline Granularity parse_granularity(std::string_view s) {
  if (s == "sentence") return Granularity::sentence;
  if (s == "window") return Granularity::window;
  throw DataError("unknown granularity \"" + std::string(s) +
                  "\" (expected sentence or window)");
}

/// One annotated trigger occurrence. Offsets are scalar-value offsets into
/// the owning Instance's text, half-open.
struct EventMention {
  std::string trigger;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string type;
  std::optional<std::string> subtype;

  /// "type.subtype" when a subtype is present, else the bare type.
  std::string label() const {
    return subtype ? type + "." + *subtype : type;
  }

  bool same_annotation(const EventMention& o) const {
    return std::tie(start, end, type, subtype) ==
           std::tie(o.start, o.end, o.type, o.subtype);
  }

  bool operator==(const EventMention&) const = default;
};

struct Instance {
  std::string id;
  std::string text;
  std::vector<EventMention> mentions;
  Split split = Split::train;
  Granularity granularity = Granularity::sentence;

  bool positive() const { return !mentions.empty(); }
  bool operator==(const Instance&) const = default;
};

/// Checks every Instance invariant; throws DataError describing the first
/// violation.
inline void validate(const Instance& inst) {
  const auto cps = text::decode(inst.text);
  for (std::size_t i = 0; i < inst.mentions.size(); ++i) {
    const auto& m = inst.mentions[i];
    const std::string where =
        "instance \"" + inst.id + "\" mention " + std::to_string(i);
    if (m.type.empty()) throw DataError(where + ": empty event type");
    if (m.subtype && m.subtype->empty())
      throw DataError(where + ": empty event subtype (use null)");
    if (m.start >= m.end || m.end > cps.size()) {
      throw DataError(where + ": span [" + std::to_string(m.start) + "," +
                      std::to_string(m.end) + ") out of bounds for text of " +
                      std::to_string(cps.size()) + " characters");
    }
    const std::string slice = text::slice(cps, m.start, m.end);
    if (slice != m.trigger) {
      const bool case_only = text::iequals_ascii(slice, m.trigger);
      throw DataError(where + ": trigger \"" + m.trigger +
                      "\" does not match text slice [" +
                      std::to_string(m.start) + "," + std::to_string(m.end) +
                      ") \"" + slice + "\"" +
                      (case_only ? " (case mismatch)" : ""));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (inst.mentions[j].same_annotation(m))
        throw DataError(where + ": duplicate of mention " + std::to_string(j));
    }
  }
}

/// Rendered labels seen in the train split.
inline std::set<std::string> train_type_inventory(
    const std::vector<Instance>& instances) {
  std::set<std::string> out;
  for (const auto& inst : instances)
    if (inst.split == Split::train)
      for (const auto& m : inst.mentions) out.insert(m.label());
  return out;
}

/// Immutable, validated collection of instances.
class Corpus {
 public:
  Corpus() = default;

  Corpus(std::string name, std::vector<Instance> instances)
      : name_(std::move(name)), instances_(std::move(instances)) {
    std::unordered_set<std::string_view> ids;
    for (const auto& inst : instances_) {
      if (inst.id.empty()) throw DataError("instance with empty id");
      if (!ids.insert(inst.id).second)
        throw DataError("duplicate instance id \"" + inst.id + "\"");
      validate(inst);
    }
    type_inventory_ = train_type_inventory(instances_);
  }

  const std::string& name() const { return name_; }
  const std::vector<Instance>& instances() const { return instances_; }
  const std::set<std::string>& type_inventory() const { return type_inventory_; }
  std::size_t size() const { return instances_.size(); }
  bool empty() const { return instances_.empty(); }

  std::vector<Instance> split(Split s) const {
    std::vector<Instance> out;
    for (const auto& inst : instances_)
      if (inst.split == s) out.push_back(inst);
    return out;
  }

  bool operator==(const Corpus& o) const {
    return name_ == o.name_ && instances_ == o.instances_;
  }

 private:
  std::string name_;
  std::vector<Instance> instances_;
  std::set<std::string> type_inventory_;
};

/// Instances with at least one mention, ids and order preserved.
inline Corpus filter_positive(const Corpus& corpus) {
  std::vector<Instance> kept;
  for (const auto& inst : corpus.instances())
    if (inst.positive()) kept.push_back(inst);
  return Corpus(corpus.name(), std::move(kept));
}

}  // namespace edkit
