#pragma once

// Native dataset layouts -> canonical instances.
//
//   rams          JSON Lines, one 5-sentence window per line: "doc_key",
//                 "sentences" (token lists), "evt_triggers" [[first, last,
//                 [[type, score], ...]], ...] with inclusive document-level
//                 token indices. One window instance per record.
//   wikievents    JSON Lines documents: "doc_id", "sentences"
//                 [[[token, start, end], ...], sentence_text], "event_mentions"
//                 with document-level token spans (end exclusive) and
//                 "sent_idx". One sentence instance per sentence.
//   maven         JSON Lines documents: "id", "content" [{"sentence",
//                 "tokens"}], "events" [{"type", "mention" [{"trigger_word",
//                 "sent_id", "offset": [first, end)}]}]. One sentence instance
//                 per sentence.
//   mlee-standoff a directory of <doc>.txt / <doc>.a2 pairs (.a1 entity files
//                 are ignored). Triggers are the .a2 text-bound annotations
//                 referenced as the trigger of an event line.
//
// Sentence boundaries come from the native files where they exist. MLEE has
// none; its abstracts are segmented at line breaks and at [.!?] followed by
// whitespace and an upper-case letter, digit or opening bracket, never inside
// a trigger span.
//
// Splits come from AdaptOptions::split, else from the file or directory name
// (train / dev / devel / valid / test), else default to train.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "edkit/corpus.hpp"
#include "edkit/error.hpp"
#include "edkit/ingest.hpp"
#include "edkit/text.hpp"

namespace edkit {

enum class NativeFormat { rams, wikievents, maven, mlee_standoff };

inline NativeFormat parse_format(std::string_view s) {
  if (s == "rams") return NativeFormat::rams;
  if (s == "wikievents") return NativeFormat::wikievents;
  if (s == "maven") return NativeFormat::maven;
  if (s == "mlee-standoff" || s == "mlee") return NativeFormat::mlee_standoff;
  throw UsageError("unknown format \"" + std::string(s) +
                   "\" (expected rams, wikievents, maven or mlee-standoff)");
}

inline std::string_view to_string(NativeFormat f) {
  switch (f) {
    case NativeFormat::rams: return "rams";
    case NativeFormat::wikievents: return "wikievents";
    case NativeFormat::maven: return "maven";
    case NativeFormat::mlee_standoff: return "mlee-standoff";
  }
  return "rams";
}

struct AdaptOptions {
  std::optional<Split> split;
  // Native labels are cut to this many dot-separated levels; the first level
  // becomes the type and the rest the subtype. 0 keeps every level.
  std::size_t type_levels = 2;
  bool lowercase_types = true;
};

struct AdaptStats {
  std::size_t files = 0;
  std::size_t documents = 0;
  std::size_t instances = 0;
  std::size_t duplicates_removed = 0;
  std::size_t trigger_text_mismatches = 0;  // native trigger text != text slice
  std::size_t discontinuous_skipped = 0;
};

namespace detail {

inline std::pair<std::string, std::optional<std::string>> normalize_type(
    std::string raw, const AdaptOptions& opt) {
  if (opt.lowercase_types) raw = text::ascii_lower(std::move(raw));
  std::vector<std::string> parts;
  std::size_t pos = 0;
  for (;;) {
    const auto dot = raw.find('.', pos);
    parts.push_back(raw.substr(pos, dot == std::string::npos ? std::string::npos
                                                             : dot - pos));
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  if (opt.type_levels > 0 && parts.size() > opt.type_levels)
    parts.resize(opt.type_levels);
  std::optional<std::string> subtype;
  for (std::size_t i = 1; i < parts.size(); ++i)
    subtype = subtype ? *subtype + "." + parts[i] : parts[i];
  if (subtype && subtype->empty()) subtype.reset();
  return {parts.front(), subtype};
}

inline std::optional<Split> split_from_name(const std::filesystem::path& p) {
  for (auto it = p.begin(); it != p.end(); ++it) {
    const auto part = text::ascii_lower(it->string());
    if (part.find("train") != std::string::npos) return Split::train;
    if (part.find("dev") != std::string::npos ||
        part.find("valid") != std::string::npos)
      return Split::dev;
    if (part.find("test") != std::string::npos) return Split::test;
  }
  return std::nullopt;
}

/// Files to read for a JSON Lines format: the path itself, or every
/// .json/.jsonl/.jsonlines file in the directory, sorted by name.
inline std::vector<std::filesystem::path> json_inputs(
    const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  if (!fs::exists(path)) throw DataError("input not found: " + path.string());
  if (!fs::is_directory(path)) return {path};
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(path)) {
    const auto ext = e.path().extension().string();
    if (e.is_regular_file() &&
        (ext == ".json" || ext == ".jsonl" || ext == ".jsonlines"))
      out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw DataError("no JSON Lines files in " + path.string());
  return out;
}

inline std::string excerpt(std::string_view s) {
  return std::string(s.substr(0, 120)) + (s.size() > 120 ? "..." : "");
}

/// Locates each token in `text` left to right; returns scalar-value spans.
inline std::vector<std::pair<std::size_t, std::size_t>> align_tokens(
    const std::u32string& cps, const std::vector<std::string>& tokens,
    const std::string& where) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t cursor = 0;
  for (const auto& tok : tokens) {
    const auto needle = text::decode(tok);
    const auto pos = cps.find(needle, cursor);
    if (needle.empty() || pos == std::u32string::npos) {
      throw DataError(where + ": token \"" + tok +
                      "\" not found in sentence text after offset " +
                      std::to_string(cursor));
    }
    out.emplace_back(pos, pos + needle.size());
    cursor = pos + needle.size();
  }
  return out;
}

struct DraftMention {
  std::size_t start;
  std::size_t end;
  std::string native_trigger;  // empty when the native file has none
  std::string raw_type;
};

inline Instance finish_instance(std::string id, std::string sentence,
                                const std::vector<DraftMention>& drafts,
                                Split split, Granularity gran,
                                const AdaptOptions& opt, AdaptStats& stats) {
  Instance inst;
  inst.id = std::move(id);
  inst.text = std::move(sentence);
  inst.split = split;
  inst.granularity = gran;
  const auto cps = text::decode(inst.text);
  for (const auto& d : drafts) {
    if (d.start >= d.end || d.end > cps.size()) {
      throw DataError("instance \"" + inst.id + "\": trigger span [" +
                      std::to_string(d.start) + "," + std::to_string(d.end) +
                      ") outside text of length " + std::to_string(cps.size()));
    }
    EventMention m;
    m.start = d.start;
    m.end = d.end;
    m.trigger = text::slice(cps, d.start, d.end);
    if (!d.native_trigger.empty() && d.native_trigger != m.trigger)
      ++stats.trigger_text_mismatches;
    auto [type, subtype] = normalize_type(d.raw_type, opt);
    if (type.empty())
      throw DataError("instance \"" + inst.id + "\": empty event type in \"" +
                      d.raw_type + "\"");
    m.type = std::move(type);
    m.subtype = std::move(subtype);
    const bool dup = std::any_of(
        inst.mentions.begin(), inst.mentions.end(),
        [&](const EventMention& o) { return o.same_annotation(m); });
    if (dup) {
      ++stats.duplicates_removed;
      continue;
    }
    inst.mentions.push_back(std::move(m));
  }
  validate(inst);
  ++stats.instances;
  return inst;
}

inline const nlohmann::json& array_of(const nlohmann::json& j, std::string_view what,
                                     const std::string& where) {
  if (!j.is_array())
    throw DataError(where + ": \"" + std::string(what) + "\" must be an array, got " +
                    j.type_name());
  return j;
}

template <typename PerRecord>
void for_each_json_line(const std::filesystem::path& file, PerRecord&& fn) {
  auto in = open_in(file);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    const std::string where = file.string() + ":" + std::to_string(lineno);
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(where + ": unparseable record (" + e.what() + "): " +
                      excerpt(line));
    }
    try {
      fn(rec, where);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(where + ": unexpected record structure (" + e.what() +
                      "): " + excerpt(line));
    }
  }
}

inline void adapt_rams_record(const nlohmann::json& rec, const std::string& where,
                              Split split, const AdaptOptions& opt,
                              AdaptStats& stats, std::vector<Instance>& out) {
  const std::string doc = rec.at("doc_key").get<std::string>();
  std::vector<std::string> tokens;
  for (const auto& sent : array_of(rec.at("sentences"), "sentences", where))
    for (const auto& tok : array_of(sent, "sentences[i]", where))
      tokens.push_back(tok.get<std::string>());

  std::string text;
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) {
      text += ' ';
      ++offset;
    }
    const auto len = text::length(tokens[i]);
    spans.emplace_back(offset, offset + len);
    text += tokens[i];
    offset += len;
  }

  std::vector<DraftMention> drafts;
  const auto triggers = rec.value("evt_triggers", nlohmann::json::array());
  for (const auto& trig : array_of(triggers, "evt_triggers", where)) {
    array_of(trig, "evt_triggers[i]", where);
    const auto first = trig.at(0).get<std::size_t>();
    const auto last = trig.at(1).get<std::size_t>();
    if (first > last || last >= tokens.size())
      throw DataError(where + ": trigger token span [" + std::to_string(first) +
                      "," + std::to_string(last) + "] outside document of " +
                      std::to_string(tokens.size()) + " tokens");
    for (const auto& typed : array_of(trig.at(2), "evt_triggers[i][2]", where)) {
      const auto& label = typed.is_array() ? typed.at(0) : typed;
      drafts.push_back({spans[first].first, spans[last].second, "",
                        label.get<std::string>()});
    }
  }
  ++stats.documents;
  out.push_back(finish_instance(doc, std::move(text), drafts, split,
                                Granularity::window, opt, stats));
}

inline void adapt_wikievents_record(const nlohmann::json& rec,
                                    const std::string& where, Split split,
                                    const AdaptOptions& opt, AdaptStats& stats,
                                    std::vector<Instance>& out) {
  const std::string doc = rec.at("doc_id").get<std::string>();
  const auto& sentences = array_of(rec.at("sentences"), "sentences", where);

  struct Sent {
    std::string text;
    std::size_t first_token;
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    std::vector<DraftMention> drafts;
  };
  std::vector<Sent> sents;
  std::size_t token_base = 0;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    const auto& entry = sentences[s];
    Sent sent;
    sent.text = entry.at(1).get<std::string>();
    sent.first_token = token_base;
    std::vector<std::string> toks;
    for (const auto& t : array_of(entry.at(0), "sentences[i][0]", where))
      toks.push_back(t.at(0).get<std::string>());
    sent.spans = align_tokens(text::decode(sent.text), toks,
                              where + ": sentence " + std::to_string(s));
    token_base += toks.size();
    sents.push_back(std::move(sent));
  }

  const auto mentions = rec.value("event_mentions", nlohmann::json::array());
  for (const auto& ev : array_of(mentions, "event_mentions", where)) {
    const auto& trig = ev.at("trigger");
    const auto sidx = trig.at("sent_idx").get<std::size_t>();
    if (sidx >= sents.size())
      throw DataError(where + ": event sent_idx " + std::to_string(sidx) +
                      " out of range");
    auto& sent = sents[sidx];
    const auto start = trig.at("start").get<std::size_t>();
    const auto end = trig.at("end").get<std::size_t>();
    if (start < sent.first_token || end <= start ||
        end - sent.first_token > sent.spans.size())
      throw DataError(where + ": trigger tokens [" + std::to_string(start) + "," +
                      std::to_string(end) + ") not inside sentence " +
                      std::to_string(sidx));
    sent.drafts.push_back({sent.spans[start - sent.first_token].first,
                           sent.spans[end - 1 - sent.first_token].second,
                           trig.value("text", std::string()),
                           ev.at("event_type").get<std::string>()});
  }

  ++stats.documents;
  for (std::size_t s = 0; s < sents.size(); ++s) {
    out.push_back(finish_instance(doc + "#" + std::to_string(s),
                                  std::move(sents[s].text), sents[s].drafts, split,
                                  Granularity::sentence, opt, stats));
  }
}

inline void adapt_maven_record(const nlohmann::json& rec, const std::string& where,
                               Split split, const AdaptOptions& opt,
                               AdaptStats& stats, std::vector<Instance>& out) {
  const std::string doc = rec.at("id").get<std::string>();
  const auto& content = array_of(rec.at("content"), "content", where);
  std::vector<std::string> texts;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> spans;
  for (std::size_t s = 0; s < content.size(); ++s) {
    texts.push_back(content[s].at("sentence").get<std::string>());
    std::vector<std::string> toks;
    for (const auto& t : array_of(content[s].at("tokens"), "tokens", where))
      toks.push_back(t.get<std::string>());
    spans.push_back(align_tokens(text::decode(texts.back()), toks,
                                 where + ": sentence " + std::to_string(s)));
  }
  std::vector<std::vector<DraftMention>> drafts(texts.size());
  const auto events = rec.value("events", nlohmann::json::array());
  for (const auto& ev : array_of(events, "events", where)) {
    const std::string type = ev.at("type").get<std::string>();
    for (const auto& m : array_of(ev.at("mention"), "mention", where)) {
      const auto sid = m.at("sent_id").get<std::size_t>();
      const auto first = m.at("offset").at(0).get<std::size_t>();
      const auto end = m.at("offset").at(1).get<std::size_t>();
      if (sid >= texts.size() || first >= end || end > spans[sid].size())
        throw DataError(where + ": mention \"" +
                        m.value("trigger_word", std::string()) +
                        "\" has an out-of-range sentence or token offset");
      drafts[sid].push_back({spans[sid][first].first, spans[sid][end - 1].second,
                             m.value("trigger_word", std::string()), type});
    }
  }
  ++stats.documents;
  for (std::size_t s = 0; s < texts.size(); ++s) {
    out.push_back(finish_instance(doc + "#" + std::to_string(s),
                                  std::move(texts[s]), drafts[s], split,
                                  Granularity::sentence, opt, stats));
  }
}

inline std::string read_file(const std::filesystem::path& p) {
  auto in = open_in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Sentence spans over `cps`, never cutting through a protected span.
inline std::vector<std::pair<std::size_t, std::size_t>> segment_sentences(
    const std::u32string& cps,
    const std::vector<std::pair<std::size_t, std::size_t>>& protect) {
  auto inside = [&](std::size_t cut) {
    return std::any_of(protect.begin(), protect.end(), [&](const auto& p) {
      return p.first < cut && cut < p.second;
    });
  };
  auto is_opener = [](char32_t c) {
    return (c >= U'A' && c <= U'Z') || (c >= U'0' && c <= U'9') || c == U'(' ||
           c == U'[' || c == U'"' || (c >= 0xC0 && c <= 0xDE);
  };
  std::vector<std::size_t> cuts;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    std::size_t cut = std::u32string::npos;
    if (cps[i] == U'\n' || cps[i] == U'\r') {
      cut = i;
    } else if ((cps[i] == U'.' || cps[i] == U'!' || cps[i] == U'?') &&
               i + 1 < cps.size() && text::is_space(cps[i + 1])) {
      std::size_t j = i + 1;
      while (j < cps.size() && text::is_space(cps[j]) && cps[j] != U'\n') ++j;
      if (j < cps.size() && is_opener(cps[j])) cut = i + 1;
    }
    if (cut != std::u32string::npos && !inside(cut)) cuts.push_back(cut);
  }
  cuts.push_back(cps.size());

  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t begin = 0;
  for (std::size_t cut : cuts) {
    std::size_t b = begin, e = std::max(cut, begin);
    while (b < e && text::is_space(cps[b])) ++b;
    while (e > b && text::is_space(cps[e - 1])) --e;
    if (b < e) out.emplace_back(b, e);
    begin = cut;
  }
  return out;
}

inline void adapt_mlee_document(const std::filesystem::path& txt, Split split,
                                const AdaptOptions& opt, AdaptStats& stats,
                                std::vector<Instance>& out) {
  const std::string content = read_file(txt);
  const auto cps = text::decode(content);
  auto a2 = txt;
  a2.replace_extension(".a2");

  struct TextBound {
    std::size_t start, end;
    std::string text;
  };
  std::map<std::string, TextBound> bounds;
  std::vector<std::pair<std::string, std::string>> event_triggers;  // type, T-id
  if (std::filesystem::exists(a2)) {
    std::istringstream lines(read_file(a2));
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(lines, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const std::string where = a2.string() + ":" + std::to_string(lineno);
      const auto tab1 = line.find('\t');
      if (tab1 == std::string::npos)
        throw DataError(where + ": malformed standoff line: " + excerpt(line));
      const std::string id = line.substr(0, tab1);
      const auto tab2 = line.find('\t', tab1 + 1);
      const std::string body = line.substr(
          tab1 + 1, tab2 == std::string::npos ? std::string::npos : tab2 - tab1 - 1);
      if (id[0] == 'T') {
        std::istringstream bs(body);
        std::string type, offsets;
        bs >> type;
        std::getline(bs, offsets);
        if (offsets.find(';') != std::string::npos) {
          ++stats.discontinuous_skipped;
          continue;
        }
        std::istringstream os(offsets);
        long long s = -1, e = -1;
        if (!(os >> s >> e) || s < 0 || e <= s)
          throw DataError(where + ": bad text-bound offsets: " + excerpt(line));
        bounds[id] = {std::size_t(s), std::size_t(e),
                      tab2 == std::string::npos ? "" : line.substr(tab2 + 1)};
      } else if (id[0] == 'E') {
        const auto space = body.find(' ');
        const std::string head = body.substr(0, space);
        const auto colon = head.find(':');
        if (colon == std::string::npos)
          throw DataError(where + ": event without trigger: " + excerpt(line));
        event_triggers.emplace_back(head.substr(0, colon), head.substr(colon + 1));
      }
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> trigger_spans;
  std::vector<DraftMention> drafts;
  for (const auto& [type, tid] : event_triggers) {
    auto it = bounds.find(tid);
    if (it == bounds.end()) continue;  // discontinuous or defined in .a1
    if (it->second.end > cps.size())
      throw DataError(a2.string() + ": trigger " + tid + " ends beyond " +
                      txt.string());
    drafts.push_back({it->second.start, it->second.end, it->second.text, type});
    trigger_spans.emplace_back(it->second.start, it->second.end);
  }

  ++stats.documents;
  const std::string stem = txt.stem().string();
  const auto sentences = segment_sentences(cps, trigger_spans);
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    const auto [b, e] = sentences[s];
    std::vector<DraftMention> local;
    for (const auto& d : drafts)
      if (d.start >= b && d.end <= e)
        local.push_back({d.start - b, d.end - b, d.native_trigger, d.raw_type});
    out.push_back(finish_instance(stem + "#" + std::to_string(s),
                                  text::slice(cps, b, e), local, split,
                                  Granularity::sentence, opt, stats));
  }
}

}  // namespace detail

inline Corpus adapt(const std::filesystem::path& path, NativeFormat format,
                    const AdaptOptions& opt = {}, AdaptStats* stats_out = nullptr) {
  namespace fs = std::filesystem;
  AdaptStats stats;
  std::vector<Instance> instances;
  auto split_for = [&](const fs::path& p) {
    if (opt.split) return *opt.split;
    const auto rel = fs::is_directory(path) ? fs::relative(p, path) : p.filename();
    if (auto s = detail::split_from_name(rel)) return *s;
    if (auto s = detail::split_from_name(p.filename())) return *s;
    return Split::train;
  };

  if (format == NativeFormat::mlee_standoff) {
    if (!fs::exists(path)) throw DataError("input not found: " + path.string());
    std::vector<fs::path> txts;
    if (fs::is_directory(path)) {
      for (const auto& e : fs::recursive_directory_iterator(path))
        if (e.is_regular_file() && e.path().extension() == ".txt")
          txts.push_back(e.path());
    } else {
      txts.push_back(path);
    }
    std::sort(txts.begin(), txts.end());
    if (txts.empty()) throw DataError("no .txt documents under " + path.string());
    for (const auto& t : txts) {
      ++stats.files;
      detail::adapt_mlee_document(t, split_for(t), opt, stats, instances);
    }
  } else {
    for (const auto& file : detail::json_inputs(path)) {
      ++stats.files;
      const Split split = split_for(file);
      detail::for_each_json_line(file, [&](const nlohmann::json& rec,
                                           const std::string& where) {
        switch (format) {
          case NativeFormat::rams:
            detail::adapt_rams_record(rec, where, split, opt, stats, instances);
            break;
          case NativeFormat::wikievents:
            detail::adapt_wikievents_record(rec, where, split, opt, stats, instances);
            break;
          case NativeFormat::maven:
            detail::adapt_maven_record(rec, where, split, opt, stats, instances);
            break;
          case NativeFormat::mlee_standoff:
            break;
        }
      });
    }
  }
  if (stats_out) *stats_out = stats;
  std::string name(to_string(format));
  if (format == NativeFormat::mlee_standoff) name = "mlee";
  return Corpus(std::move(name), std::move(instances));
}

inline Corpus adapt(const std::filesystem::path& path, std::string_view format_name,
                    const AdaptOptions& opt = {}, AdaptStats* stats_out = nullptr) {
  return adapt(path, parse_format(format_name), opt, stats_out);
}

}  // namespace edkit
