#pragma once

// Canonical JSON Lines corpus format, one Instance per line:
//   {"id": str, "text": str, "split": "train"|"dev"|"test",
//    "granularity": "sentence"|"window",
//    "mentions": [{"start": int, "end": int, "trigger": str,
//                  "type": str, "subtype": str|null}]}

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "edkit/corpus.hpp"
#include "edkit/error.hpp"

namespace edkit {

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& obj,
                                     const std::string& field,
                                     nlohmann::json::value_t kind,
                                     const std::string& where) {
  auto it = obj.find(field);
  if (it == obj.end()) throw DataError(where + ": missing field \"" + field + "\"");
  const bool ok =
      kind == nlohmann::json::value_t::number_unsigned
          ? it->is_number_integer() && it->get<long long>() >= 0
          : it->type() == kind;
  if (!ok) {
    throw DataError(where + ": field \"" + field + "\" has wrong type (got " +
                    it->type_name() + ")");
  }
  return *it;
}

inline std::string require_string(const nlohmann::json& obj,
                                  const std::string& field,
                                  const std::string& where) {
  return require(obj, field, nlohmann::json::value_t::string, where)
      .get<std::string>();
}

inline std::size_t require_offset(const nlohmann::json& obj,
                                  const std::string& field,
                                  const std::string& where) {
  return require(obj, field, nlohmann::json::value_t::number_unsigned, where)
      .get<std::size_t>();
}

inline std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string() + " for reading");
  return in;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  return out;
}

inline std::string dump_line(const nlohmann::ordered_json& j) {
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict);
}

}  // namespace detail

inline Instance instance_from_json(const nlohmann::json& rec,
                                   const std::string& where) {
  if (!rec.is_object()) throw DataError(where + ": record is not a JSON object");
  Instance inst;
  inst.id = detail::require_string(rec, "id", where);
  inst.text = detail::require_string(rec, "text", where);
  try {
    inst.split = parse_split(detail::require_string(rec, "split", where));
    inst.granularity =
        parse_granularity(detail::require_string(rec, "granularity", where));
  } catch (const DataError& e) {
    throw DataError(where + ": " + e.what());
  }
  const auto& mentions =
      detail::require(rec, "mentions", nlohmann::json::value_t::array, where);
  for (std::size_t i = 0; i < mentions.size(); ++i) {
    const std::string mwhere = where + ": mentions[" + std::to_string(i) + "]";
    const auto& m = mentions[i];
    if (!m.is_object()) throw DataError(mwhere + ": not a JSON object");
    EventMention em;
    em.start = detail::require_offset(m, "start", mwhere);
    em.end = detail::require_offset(m, "end", mwhere);
    em.trigger = detail::require_string(m, "trigger", mwhere);
    em.type = detail::require_string(m, "type", mwhere);
    if (auto it = m.find("subtype"); it != m.end() && !it->is_null()) {
      if (!it->is_string())
        throw DataError(mwhere + ": field \"subtype\" must be a string or null");
      em.subtype = it->get<std::string>();
    }
    inst.mentions.push_back(std::move(em));
  }
  try {
    validate(inst);
  } catch (const DataError& e) {
    throw DataError(where + ": " + e.what());
  }
  return inst;
}

inline nlohmann::ordered_json to_json(const Instance& inst) {
  nlohmann::ordered_json j;
  j["id"] = inst.id;
  j["text"] = inst.text;
  j["split"] = to_string(inst.split);
  j["granularity"] = to_string(inst.granularity);
  j["mentions"] = nlohmann::ordered_json::array();
  for (const auto& m : inst.mentions) {
    nlohmann::ordered_json jm;
    jm["start"] = m.start;
    jm["end"] = m.end;
    jm["trigger"] = m.trigger;
    jm["type"] = m.type;
    jm["subtype"] = m.subtype ? nlohmann::ordered_json(*m.subtype) : nlohmann::ordered_json(nullptr);
    j["mentions"].push_back(std::move(jm));
  }
  return j;
}

/// Reads canonical records from a stream; `source` names it in errors.
inline std::vector<Instance> read_canonical(std::istream& in,
                                            const std::string& source) {
  std::vector<Instance> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(where + ": malformed JSON: " + e.what());
    }
    out.push_back(instance_from_json(rec, where));
  }
  return out;
}

inline Corpus load_canonical(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  auto instances = read_canonical(in, path.string());
  try {
    return Corpus(path.stem().string(), std::move(instances));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

inline void write_canonical(const Corpus& corpus, std::ostream& out) {
  for (const auto& inst : corpus.instances())
    out << detail::dump_line(to_json(inst)) << '\n';
}

inline void write_canonical(const Corpus& corpus,
                            const std::filesystem::path& path) {
  auto out = detail::open_out(path);
  write_canonical(corpus, out);
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace edkit
