#pragma once

// Retrieval-augmented few-shot prompt assembly for term/type extraction
// (Task A, methods m1/m2) and term typing (Task B), plus parsing and
// aggregation of the structured {"terms":[...],"types":[...]} replies.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ontolearn/corpus.hpp"
#include "ontolearn/error.hpp"
#include "ontolearn/text.hpp"

namespace ontolearn {

// Retrieval depth used for every few-shot prompt.
inline constexpr std::size_t kMaxDemonstrations = 3;

struct InstructionPair {
  std::string instruction;
  std::string output;

  friend bool operator==(const InstructionPair&, const InstructionPair&) = default;
};

struct TypingExemplar {
  std::string term;
  std::vector<std::string> types;  // sorted

  friend bool operator==(const TypingExemplar&, const TypingExemplar&) = default;
};

using Demonstration = std::variant<InstructionPair, TypingExemplar>;

enum class OutputSchema { terms_and_types, types_only };

struct Prompt {
  std::string system;
  std::vector<Demonstration> demonstrations;
  std::string query;
  OutputSchema schema = OutputSchema::terms_and_types;
};

struct ExtractionResult {
  std::vector<std::string> terms;
  std::vector<std::string> types;

  friend bool operator==(const ExtractionResult&, const ExtractionResult&) = default;
};

// Default wording; callers may replace either string.
struct PromptTemplates {
  std::string extraction_system =
      "You extract ontology terms and their types from a domain document. "
      "Answer with a JSON object {\"terms\": [...], \"types\": [...]} and nothing else.";
  std::string typing_system =
      "You assign ontological types to a term. "
      "Answer with a JSON object {\"types\": [...]} and nothing else.";
};

// Title, text, then the keyword line (omitted when there are no keywords).
inline std::string instruction_block(const Document& doc,
                                     const std::vector<std::string>& keywords) {
  std::string s = "TITLE: " + doc.title + "\nTEXT: " + doc.text;
  if (!keywords.empty()) s += "\nKEYWORDS: " + text::join(keywords, ", ");
  return s;
}

// {"terms":[...],"types":[...]} with both arrays sorted; keys always present.
inline std::string canonical_output(const std::set<std::string>& terms,
                                    const std::set<std::string>& types) {
  nlohmann::ordered_json j;
  j["terms"] = std::vector<std::string>(terms.begin(), terms.end());
  j["types"] = std::vector<std::string>(types.begin(), types.end());
  return j.dump();
}

inline InstructionPair build_instruction_pair(const Document& doc,
                                              const std::set<std::string>& terms,
                                              const std::set<std::string>& types,
                                              const std::vector<std::string>& keywords) {
  return {instruction_block(doc, keywords), canonical_output(terms, types)};
}

enum class DemoMethod {
  m1,  // doc -> types exemplars from the raw terms2docs file
  m2,  // doc -> terms and types, chained through the repaired index
};

struct BuiltPrompt {
  Prompt prompt;
  std::size_t skipped = 0;  // neighbours without usable supervision
};

// Precomputed per-training-document supervision used to render demos.
class TaskADemoSource {
 public:
  TaskADemoSource(const Corpus& train, const TermDocIndex& index,
                  std::size_t keyword_count = 20, PromptTemplates templates = {})
      : train_(train),
        tfidf_(train.documents()),
        keyword_count_(keyword_count),
        templates_(std::move(templates)) {
    for (const auto& [type, docs] : train.raw_type_to_docs) {
      for (const auto& d : docs) doc_types_m1_[d].insert(type);
    }
    for (const auto& t : build_supervision(train, index).tuples) {
      auto& sup = doc_sup_m2_[t.doc_id];
      sup.first.insert(t.term);
      sup.second.insert(t.types.begin(), t.types.end());
    }
  }

  const TfidfModel& tfidf() const { return tfidf_; }

  // Empty when the document has no supervision under `method`.
  std::optional<InstructionPair> demo_for(const Document& doc, DemoMethod method) const {
    static const std::set<std::string> kEmpty;
    if (method == DemoMethod::m1) {
      auto it = doc_types_m1_.find(doc.id);
      if (it == doc_types_m1_.end() || it->second.empty()) return std::nullopt;
      return build_instruction_pair(doc, kEmpty, it->second, keywords(doc));
    }
    auto it = doc_sup_m2_.find(doc.id);
    if (it == doc_sup_m2_.end() || it->second.first.empty()) return std::nullopt;
    return build_instruction_pair(doc, it->second.first, it->second.second, keywords(doc));
  }

  std::vector<std::string> keywords(const Document& doc) const {
    return tfidf_.keywords(doc.text, keyword_count_);
  }

  // `neighbors` are training doc ids in descending similarity; at most
  // kMaxDemonstrations are used.
  BuiltPrompt build(const Document& test_doc, const std::vector<std::string>& test_keywords,
                    const std::vector<std::string>& neighbors, DemoMethod method) const {
    BuiltPrompt out;
    out.prompt.system = templates_.extraction_system;
    out.prompt.schema = OutputSchema::terms_and_types;
    out.prompt.query = instruction_block(test_doc, test_keywords);
    const std::size_t n = std::min(neighbors.size(), kMaxDemonstrations);
    for (std::size_t i = 0; i < n; ++i) {
      const Document* doc = train_.find(neighbors[i]);
      if (!doc) throw DataError("neighbour " + neighbors[i] + " is not a training document");
      if (auto demo = demo_for(*doc, method)) {
        out.prompt.demonstrations.emplace_back(std::move(*demo));
      } else {
        ++out.skipped;
      }
    }
    return out;
  }

 private:
  const Corpus& train_;
  TfidfModel tfidf_;
  std::size_t keyword_count_;
  PromptTemplates templates_;
  std::unordered_map<std::string, std::set<std::string>> doc_types_m1_;
  std::unordered_map<std::string, std::pair<std::set<std::string>, std::set<std::string>>>
      doc_sup_m2_;
};

inline BuiltPrompt build_prompt_taskA(const Document& test_doc,
                                      const std::vector<std::string>& neighbors,
                                      DemoMethod method, const Corpus& train,
                                      const TermDocIndex& index,
                                      std::size_t keyword_count = 20) {
  TaskADemoSource src(train, index, keyword_count);
  // Keywords for the query document come from its own text against the
  // training document frequencies.
  return src.build(test_doc, src.keywords(test_doc), neighbors, method);
}

inline Prompt build_prompt_taskB(
    const std::string& term,
    const std::vector<std::pair<std::string, std::set<std::string>>>& neighbors,
    const PromptTemplates& templates = {}) {
  if (text::trim(term).empty()) throw DataError("query term is empty");
  Prompt p;
  p.system = templates.typing_system;
  p.schema = OutputSchema::types_only;
  p.query = term;
  const std::size_t n = std::min(neighbors.size(), kMaxDemonstrations);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [t, types] = neighbors[i];
    p.demonstrations.emplace_back(
        TypingExemplar{t, std::vector<std::string>(types.begin(), types.end())});
  }
  return p;
}

struct ChatMessage {
  std::string role;
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

inline std::string render_exemplar(const TypingExemplar& ex) {
  return "TERM: " + ex.term + " → TYPES: " + nlohmann::json(ex.types).dump();
}

// Extraction demos become user/assistant turns; typing exemplars are listed
// as lines ahead of the query term.
inline std::vector<ChatMessage> render_messages(const Prompt& p) {
  std::vector<ChatMessage> msgs{{"system", p.system}};
  std::string exemplar_lines;
  for (const auto& demo : p.demonstrations) {
    if (const auto* pair = std::get_if<InstructionPair>(&demo)) {
      msgs.push_back({"user", pair->instruction});
      msgs.push_back({"assistant", pair->output});
    } else {
      exemplar_lines += render_exemplar(std::get<TypingExemplar>(demo)) + "\n";
    }
  }
  if (p.schema == OutputSchema::types_only) {
    msgs.push_back({"user", exemplar_lines + "TERM: " + p.query});
  } else {
    msgs.push_back({"user", exemplar_lines + p.query});
  }
  return msgs;
}

inline nlohmann::ordered_json to_json(const Prompt& p) {
  nlohmann::ordered_json j;
  j["schema"] = p.schema == OutputSchema::types_only ? "types_only" : "terms_and_types";
  j["messages"] = nlohmann::ordered_json::array();
  for (const auto& m : render_messages(p)) {
    j["messages"].push_back({{"role", m.role}, {"content", m.content}});
  }
  return j;
}

class OutputParseError : public DataError {
 public:
  explicit OutputParseError(std::string raw)
      : DataError("no parseable JSON object in model output"), raw_(std::move(raw)) {}
  const std::string& raw() const { return raw_; }

 private:
  std::string raw_;
};

namespace detail {

// Index one past the '}' closing the object opened at `open`, or npos.
inline std::size_t match_brace(std::string_view s, std::size_t open) {
  int depth = 0;
  bool in_string = false, escaped = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (escaped) escaped = false;
      else if (c == '\\') escaped = true;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '{') ++depth;
    else if (c == '}' && --depth == 0) return i + 1;
  }
  return std::string_view::npos;
}

// Trim, drop empties, keep the first casing of each normalized value.
inline void append_dedup(std::vector<std::string>& dst, std::unordered_set<std::string>& seen,
                         const std::vector<std::string>& src) {
  for (const auto& v : src) {
    std::string t = text::trim(v);
    if (t.empty()) continue;
    if (seen.insert(text::normalize(t)).second) dst.push_back(std::move(t));
  }
}

inline std::vector<std::string> string_array(const nlohmann::json& obj, const char* key) {
  std::vector<std::string> out;
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_array()) return out;
  for (const auto& v : *it) {
    if (v.is_string()) out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace detail

inline ExtractionResult parse_structured_output(std::string_view raw,
                                                OutputSchema schema = OutputSchema::terms_and_types) {
  for (std::size_t open = raw.find('{'); open != std::string_view::npos;
       open = raw.find('{', open + 1)) {
    const std::size_t close = detail::match_brace(raw, open);
    if (close == std::string_view::npos) break;
    nlohmann::json j = nlohmann::json::parse(raw.substr(open, close - open), nullptr,
                                             /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) continue;
    ExtractionResult r;
    std::unordered_set<std::string> seen_terms, seen_types;
    if (schema == OutputSchema::terms_and_types) {
      detail::append_dedup(r.terms, seen_terms, detail::string_array(j, "terms"));
    }
    detail::append_dedup(r.types, seen_types, detail::string_array(j, "types"));
    return r;
  }
  throw OutputParseError(std::string(raw));
}

inline ExtractionResult aggregate_results(const std::vector<ExtractionResult>& results) {
  ExtractionResult out;
  std::unordered_set<std::string> seen_terms, seen_types;
  for (const auto& r : results) {
    detail::append_dedup(out.terms, seen_terms, r.terms);
    detail::append_dedup(out.types, seen_types, r.types);
  }
  return out;
}

}  // namespace ontolearn
