#pragma once

// Model inputs for the two prompt variants.
//
//   tags:   "<tag>: <text>"
//   instr:  "Definition: <definition>\n"
//           "Input: <example input>\nOutput: <example output>\n"   (per example)
//           "Input: <text>\nOutput:"
//
// Template files hold one JSON object per task:
//   {"task": "EI"|"EC"|"ED", "tag": str, "definition": str,
//    "examples": [{"input": str, "output": str}]}

#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "edkit/error.hpp"
#include "edkit/ingest.hpp"
#include "edkit/parse.hpp"
#include "edkit/reformulate.hpp"

namespace edkit {

enum class PromptVariant { tags, instr };

inline std::string_view to_string(PromptVariant v) {
  return v == PromptVariant::tags ? "tags" : "instr";
}

inline PromptVariant parse_variant(std::string_view s) {
  if (s == "tags") return PromptVariant::tags;
  if (s == "instr") return PromptVariant::instr;
  throw UsageError("unknown prompt variant \"" + std::string(s) +
                   "\" (expected tags or instr)");
}

struct PromptExample {
  std::string input;
  std::string output;
  bool operator==(const PromptExample&) const = default;
};

struct PromptTemplate {
  TaskKind task = TaskKind::ED;
  std::string tag;
  std::string definition;
  std::vector<PromptExample> examples;
  bool operator==(const PromptTemplate&) const = default;
};

using TemplateSet = std::map<TaskKind, PromptTemplate>;

inline std::string render_input(std::string_view instance_text, TaskKind task,
                                PromptVariant variant,
                                const PromptTemplate& tmpl) {
  if (tmpl.task != task) {
    throw UsageError("template for task " + std::string(to_string(tmpl.task)) +
                     " used to render a " + std::string(to_string(task)) +
                     " input");
  }
  std::string out;
  if (variant == PromptVariant::tags) {
    out.append(tmpl.tag).append(": ").append(instance_text);
    return out;
  }
  out.append("Definition: ").append(tmpl.definition).append("\n");
  for (const auto& ex : tmpl.examples) {
    out.append("Input: ").append(ex.input).append("\n");
    out.append("Output: ").append(ex.output).append("\n");
  }
  out.append("Input: ").append(instance_text).append("\nOutput:");
  return out;
}

/// Every example output must parse cleanly under the template's task.
inline void validate_template(const PromptTemplate& tmpl) {
  if (tmpl.tag.empty())
    throw DataError("template " + std::string(to_string(tmpl.task)) + ": empty tag");
  for (std::size_t i = 0; i < tmpl.examples.size(); ++i) {
    const auto parsed =
        parse_generation(tmpl.examples[i].output, tmpl.task, "template-example");
    if (!parsed.clean()) {
      throw DataError("template " + std::string(to_string(tmpl.task)) +
                      " example " + std::to_string(i) + ": output \"" +
                      tmpl.examples[i].output + "\" is not a valid target (" +
                      std::string(to_string(parsed.diagnostics.front().kind)) + ")");
    }
  }
}

namespace detail {

struct ExampleSpec {
  std::string input;
  std::vector<std::pair<std::string, std::string>> events;  // trigger, type
};

inline PromptTemplate make_template(TaskKind task,
                                    const std::vector<ExampleSpec>& specs) {
  PromptTemplate t;
  t.task = task;
  t.tag = std::string(to_string(task));
  switch (task) {
    case TaskKind::EI:
      t.definition =
          "Identify every event trigger in the input. An event trigger is the "
          "word or phrase that most clearly expresses that an event happened. "
          "List the triggers separated by \" | \". If the input mentions no "
          "event, answer NONE.";
      break;
    case TaskKind::EC:
      t.definition =
          "List the types of all events that occur in the input, separated by "
          "\" | \". If the input mentions no event, answer NONE.";
      break;
    case TaskKind::ED:
      t.definition =
          "Detect the events in the input: identify each event trigger, the "
          "word or phrase that most clearly expresses an event, and classify "
          "it with its event type. Write each event as trigger->type and "
          "separate events with \" | \". If the input mentions no event, "
          "answer NONE.";
      break;
  }
  for (const auto& spec : specs) {
    Instance inst;
    inst.id = "example";
    inst.text = spec.input;
    const auto cps = text::decode(spec.input);
    for (const auto& [trigger, type] : spec.events) {
      const auto pos = cps.find(text::decode(trigger));
      EventMention m;
      m.trigger = trigger;
      m.start = pos;
      m.end = pos + text::decode(trigger).size();
      const auto dot = type.find('.');
      m.type = type.substr(0, dot);
      if (dot != std::string::npos) m.subtype = type.substr(dot + 1);
      inst.mentions.push_back(std::move(m));
    }
    t.examples.push_back({spec.input, make_target(inst, task).text});
  }
  return t;
}

}  // namespace detail

/// Shipped templates: one general-domain and one biomedical example per
/// task. The general example uses the label inventory style of the named
/// corpus (two-level types by default, flat types for maven and mlee).
inline TemplateSet default_templates(std::string_view corpus_name) {
  const std::string name = text::ascii_lower(std::string(corpus_name));
  detail::ExampleSpec general;
  general.input = "Two soldiers were killed when rebels attacked the convoy near the border.";
  if (name == "maven") {
    general.events = {{"killed", "killing"}, {"attacked", "attack"}};
  } else if (name == "mlee") {
    general.input = "Three people died after the flood destroyed the old bridge.";
    general.events = {{"died", "death"}, {"destroyed", "breakdown"}};
  } else {
    general.events = {{"killed", "life.die"}, {"attacked", "conflict.attack"}};
  }
  detail::ExampleSpec biomedical;
  biomedical.input =
      "VEGF induced angiogenesis and endothelial cell proliferation in the "
      "grafted tissue.";
  biomedical.events = {{"induced", "positive_regulation"},
                       {"angiogenesis", "blood_vessel_development"},
                       {"proliferation", "cell_proliferation"}};

  TemplateSet out;
  for (TaskKind task : kAllTasks)
    out.emplace(task, detail::make_template(task, {general, biomedical}));
  return out;
}

inline nlohmann::ordered_json to_json(const PromptTemplate& t) {
  nlohmann::ordered_json j;
  j["task"] = to_string(t.task);
  j["tag"] = t.tag;
  j["definition"] = t.definition;
  j["examples"] = nlohmann::ordered_json::array();
  for (const auto& ex : t.examples)
    j["examples"].push_back({{"input", ex.input}, {"output", ex.output}});
  return j;
}

inline PromptTemplate template_from_json(const nlohmann::json& j,
                                         const std::string& where) {
  if (!j.is_object()) throw DataError(where + ": template is not a JSON object");
  PromptTemplate t;
  try {
    t.task = parse_task(detail::require_string(j, "task", where));
  } catch (const DataError& e) {
    throw DataError(where + ": " + e.what());
  }
  t.tag = detail::require_string(j, "tag", where);
  t.definition = detail::require_string(j, "definition", where);
  const auto& exs = detail::require(j, "examples", nlohmann::json::value_t::array, where);
  for (std::size_t i = 0; i < exs.size(); ++i) {
    const std::string ewhere = where + ": examples[" + std::to_string(i) + "]";
    if (!exs[i].is_object()) throw DataError(ewhere + ": not a JSON object");
    t.examples.push_back({detail::require_string(exs[i], "input", ewhere),
                          detail::require_string(exs[i], "output", ewhere)});
  }
  try {
    validate_template(t);
  } catch (const DataError& e) {
    throw DataError(where + ": " + e.what());
  }
  return t;
}

/// Reads a template file: JSON Lines (one object per task) or a single JSON
/// array of such objects.
inline TemplateSet load_templates(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  const std::string content((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
  std::vector<std::pair<nlohmann::json, std::string>> records;
  const auto first = content.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && content[first] == '[') {
    nlohmann::json arr;
    try {
      arr = nlohmann::json::parse(content);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(path.string() + ": malformed JSON: " + e.what());
    }
    for (std::size_t i = 0; i < arr.size(); ++i)
      records.emplace_back(arr[i], path.string() + "[" + std::to_string(i) + "]");
  } else {
    std::istringstream lines(content);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(lines, line)) {
      ++lineno;
      if (text::trim(line).empty()) continue;
      const std::string where = path.string() + ":" + std::to_string(lineno);
      try {
        records.emplace_back(nlohmann::json::parse(line), where);
      } catch (const nlohmann::json::parse_error& e) {
        throw DataError(where + ": malformed JSON: " + e.what());
      }
    }
  }
  TemplateSet out;
  for (const auto& [j, where] : records) {
    auto t = template_from_json(j, where);
    const auto task = t.task;
    if (!out.emplace(task, std::move(t)).second) {
      throw DataError(where + ": second template for task " +
                      std::string(to_string(task)));
    }
  }
  return out;
}

inline void write_templates(const TemplateSet& templates,
                            const std::filesystem::path& path) {
  auto out = detail::open_out(path);
  for (const auto& [_, t] : templates) out << detail::dump_line(to_json(t)) << '\n';
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace edkit
