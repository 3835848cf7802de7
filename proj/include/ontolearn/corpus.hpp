#pragma once

// Challenge corpus loading, term-document index repair, term/type overlap
// statistics and TF-IDF keyword extraction.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ontolearn/error.hpp"
#include "ontolearn/text.hpp"

namespace ontolearn {

struct Document {
  std::string id;
  std::string title;
  std::string text;
};

struct Corpus {
  std::vector<std::string> terms;
  std::vector<std::string> types;
  std::map<std::string, std::set<std::string>> term_to_types;
  // The file shipped as terms2docs.json; its keys are types, not terms.
  std::map<std::string, std::set<std::string>> raw_type_to_docs;

  const std::vector<Document>& documents() const { return documents_; }

  const Document* find(const std::string& doc_id) const {
    auto it = doc_pos_.find(doc_id);
    return it == doc_pos_.end() ? nullptr : &documents_[it->second];
  }

  // Appends a document; throws DataError on a duplicate or empty id.
  void add_document(Document doc) {
    if (doc.id.empty()) throw DataError("document id must be non-empty");
    if (!doc_pos_.emplace(doc.id, documents_.size()).second) {
      throw DataError("duplicate document id " + doc.id);
    }
    documents_.push_back(std::move(doc));
  }

 private:
  std::vector<Document> documents_;
  std::unordered_map<std::string, std::size_t> doc_pos_;
};

// Any path may be empty except `documents`.
struct CorpusPaths {
  std::filesystem::path documents;
  std::filesystem::path terms;
  std::filesystem::path types;
  std::filesystem::path terms2types;
  std::filesystem::path terms2docs;
};

struct TermDocIndex {
  std::map<std::string, std::set<std::string>> term_to_docs;
};

struct SupervisionTuple {
  std::string doc_id;
  std::string term;
  std::set<std::string> types;

  friend bool operator==(const SupervisionTuple&, const SupervisionTuple&) = default;
};

struct Supervision {
  std::vector<SupervisionTuple> tuples;
  // (doc, term) pairs dropped because the term has no terms2types entry.
  std::size_t skipped = 0;
};

struct OverlapStats {
  std::size_t intersection_count = 0;
  double norm_by_terms = 0.0;
  double norm_by_types = 0.0;
};

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json parse_json_file(const std::filesystem::path& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

inline std::map<std::string, std::set<std::string>> parse_string_multimap(
    const nlohmann::json& j, const std::string& what) {
  if (!j.is_object()) throw DataError(what + ": expected a JSON object");
  std::map<std::string, std::set<std::string>> out;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_array()) {
      throw DataError(what + ": value for \"" + key + "\" is not an array");
    }
    auto& dst = out[key];
    for (const auto& v : value) {
      if (!v.is_string()) {
        throw DataError(what + ": non-string entry under \"" + key + "\"");
      }
      dst.insert(v.get<std::string>());
    }
  }
  return out;
}

}  // namespace detail

// One entry per line; trimmed, blank lines skipped, duplicates (under
// text::normalize) collapsed keeping the first occurrence.
inline std::vector<std::string> parse_lines(std::string_view content) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  std::size_t start = 0;
  while (start <= content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string line = text::trim(content.substr(start, end - start));
    if (!line.empty() && seen.insert(text::normalize(line)).second) {
      out.push_back(std::move(line));
    }
    start = end + 1;
  }
  return out;
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  return parse_lines(detail::read_file(path));
}

inline void write_lines(const std::filesystem::path& path,
                        const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& l : lines) out << l << '\n';
}

// documents.jsonl: one {"id","title","text"} object per line.
inline std::vector<Document> parse_documents_jsonl(std::string_view content) {
  std::vector<Document> docs;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    ++line_no;
    std::string_view line = content.substr(start, end - start);
    start = end + 1;
    if (text::trim(line).empty()) continue;

    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      throw DataError("malformed JSON at line " + std::to_string(line_no));
    }
    if (!j.is_object()) {
      throw DataError("expected a JSON object at line " + std::to_string(line_no));
    }
    Document d;
    for (auto [name, field] : {std::pair{"id", &d.id}, std::pair{"title", &d.title},
                               std::pair{"text", &d.text}}) {
      auto it = j.find(name);
      if (it == j.end()) {
        throw DataError(std::string("missing field ") + name + " at line " +
                        std::to_string(line_no));
      }
      if (!it->is_string()) {
        throw DataError(std::string("field ") + name + " is not a string at line " +
                        std::to_string(line_no));
      }
      *field = it->get<std::string>();
    }
    if (d.id.empty()) {
      throw DataError("empty id at line " + std::to_string(line_no));
    }
    docs.push_back(std::move(d));
  }
  return docs;
}

inline Corpus load_corpus(const CorpusPaths& paths) {
  if (paths.documents.empty()) throw ConfigError("documents path is required");
  Corpus c;
  {
    auto docs = parse_documents_jsonl(detail::read_file(paths.documents));
    for (auto& d : docs) {
      if (c.find(d.id)) {
        throw DataError("duplicate document id " + d.id + " in " +
                        paths.documents.string());
      }
      c.add_document(std::move(d));
    }
  }
  if (!paths.terms.empty()) c.terms = read_lines(paths.terms);
  if (!paths.types.empty()) c.types = read_lines(paths.types);
  if (!paths.terms2types.empty()) {
    c.term_to_types = detail::parse_string_multimap(
        detail::parse_json_file(paths.terms2types), paths.terms2types.string());
    if (!c.terms.empty()) {
      std::unordered_set<std::string> known;
      for (const auto& t : c.terms) known.insert(text::normalize(t));
      for (const auto& [term, _] : c.term_to_types) {
        if (!known.count(text::normalize(term))) {
          throw DataError("terms2types key \"" + term + "\" is not in the terms list");
        }
      }
    }
  }
  if (!paths.terms2docs.empty()) {
    c.raw_type_to_docs = detail::parse_string_multimap(
        detail::parse_json_file(paths.terms2docs), paths.terms2docs.string());
    for (const auto& [key, ids] : c.raw_type_to_docs) {
      for (const auto& id : ids) {
        if (!c.find(id)) {
          throw DataError("terms2docs entry \"" + key + "\" references unknown document " + id);
        }
      }
    }
  }
  return c;
}

// Rescans every document for every term: casefolded substring match bounded
// by non-word characters (or the string edge), title and text checked
// separately. Terms without a match are kept with an empty set.
inline TermDocIndex repair_term_doc_index(const Corpus& corpus) {
  TermDocIndex index;
  std::vector<std::string> folded_terms;
  folded_terms.reserve(corpus.terms.size());
  for (const auto& t : corpus.terms) {
    folded_terms.push_back(text::casefold(t));
    index.term_to_docs[t];
  }
  for (const auto& doc : corpus.documents()) {
    const std::string title = text::casefold(doc.title);
    const std::string body = text::casefold(doc.text);
    for (std::size_t i = 0; i < folded_terms.size(); ++i) {
      if (text::contains_bounded(title, folded_terms[i]) ||
          text::contains_bounded(body, folded_terms[i])) {
        index.term_to_docs[corpus.terms[i]].insert(doc.id);
      }
    }
  }
  return index;
}

// Looks a term up in term_to_types under text::normalize.
class TypeLookup {
 public:
  explicit TypeLookup(const Corpus& corpus) {
    for (const auto& [term, types] : corpus.term_to_types) {
      auto& dst = by_key_[text::normalize(term)];
      dst.insert(types.begin(), types.end());
    }
  }

  const std::set<std::string>* find(const std::string& term) const {
    auto it = by_key_.find(text::normalize(term));
    return it == by_key_.end() ? nullptr : &it->second;
  }

 private:
  std::unordered_map<std::string, std::set<std::string>> by_key_;
};

inline Supervision build_supervision(const Corpus& corpus, const TermDocIndex& index) {
  const TypeLookup lookup(corpus);
  Supervision out;
  for (const auto& [term, docs] : index.term_to_docs) {
    const auto* types = lookup.find(term);
    if (!types) {
      out.skipped += docs.size();
      continue;
    }
    for (const auto& doc_id : docs) out.tuples.push_back({doc_id, term, *types});
  }
  std::sort(out.tuples.begin(), out.tuples.end(),
            [](const SupervisionTuple& a, const SupervisionTuple& b) {
              return std::tie(a.doc_id, a.term) < std::tie(b.doc_id, b.term);
            });
  return out;
}

inline OverlapStats term_type_overlap(const Corpus& corpus) {
  std::set<std::string> terms, types;
  for (const auto& t : corpus.terms) terms.insert(text::normalize(t));
  for (const auto& t : corpus.types) types.insert(text::normalize(t));
  if (terms.empty() || types.empty()) throw DataError("empty set");
  OverlapStats s;
  for (const auto& t : terms) s.intersection_count += types.count(t);
  s.norm_by_terms = static_cast<double>(s.intersection_count) / terms.size();
  s.norm_by_types = static_cast<double>(s.intersection_count) / types.size();
  return s;
}

// tf = raw count in the document, idf = ln((1 + N) / (1 + df)) + 1.
class TfidfModel {
 public:
  explicit TfidfModel(const std::vector<Document>& docs, std::size_t min_token_length = 2)
      : min_token_length_(min_token_length), num_docs_(docs.size()) {
    for (const auto& d : docs) {
      auto tokens = text::tokenize(d.text, min_token_length_);
      std::sort(tokens.begin(), tokens.end());
      tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
      for (auto& t : tokens) ++df_[t];
    }
  }

  double idf(const std::string& token) const {
    auto it = df_.find(token);
    const double df = it == df_.end() ? 0.0 : static_cast<double>(it->second);
    return std::log((1.0 + num_docs_) / (1.0 + df)) + 1.0;
  }

  // (token, score) sorted by score descending, then token ascending.
  std::vector<std::pair<std::string, double>> scores(std::string_view text) const {
    std::map<std::string, std::size_t> tf;
    for (auto& t : text::tokenize(text, min_token_length_)) ++tf[t];
    std::vector<std::pair<std::string, double>> out;
    out.reserve(tf.size());
    for (const auto& [tok, count] : tf) out.emplace_back(tok, count * idf(tok));
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      return a.second > b.second;
    });
    return out;
  }

  std::vector<std::string> keywords(std::string_view text, std::size_t k = 20) const {
    if (k == 0) throw ConfigError("k must be >= 1");
    auto ranked = scores(text);
    if (ranked.size() > k) ranked.resize(k);
    std::vector<std::string> out;
    out.reserve(ranked.size());
    for (auto& [tok, _] : ranked) out.push_back(std::move(tok));
    return out;
  }

 private:
  std::size_t min_token_length_;
  std::size_t num_docs_;
  std::unordered_map<std::string, std::size_t> df_;
};

inline std::vector<std::string> tfidf_keywords(const Corpus& corpus,
                                               const std::string& doc_id,
                                               std::size_t k = 20,
                                               std::size_t min_token_length = 2) {
  const Document* doc = corpus.find(doc_id);
  if (!doc) throw DataError("unknown document id " + doc_id);
  return TfidfModel(corpus.documents(), min_token_length).keywords(doc->text, k);
}

}  // namespace ontolearn
