#pragma once

// Config-driven runs: one JSON config selects a task, its input files and a
// parameter block. Every successful run writes its artifacts plus
// manifest.json into the output directory.
//
// Config shape:
//   {"task": "prompt-a", "seed": 0, "out": "run1", "endpoint": "...",
//    "paths": {"train_documents": "...", ...}, "params": {...}}
//
// Relative paths resolve against the config file's directory.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ontolearn/completion.hpp"
#include "ontolearn/corpus.hpp"
#include "ontolearn/embed_fetch.hpp"
#include "ontolearn/embedstore.hpp"
#include "ontolearn/error.hpp"
#include "ontolearn/eval.hpp"
#include "ontolearn/fewshot.hpp"
#include "ontolearn/taxo.hpp"
#include "ontolearn/zeroshot.hpp"

namespace ontolearn::pipeline {

inline constexpr std::string_view kVersion = "0.1.0";

enum class Task {
  repair,
  tfidf,
  embed_fetch,
  knn,
  prompt_a,
  prompt_b,
  zeroshot,
  ensemble,
  distmult,
  taxo_train,
  taxo_grid,
  taxo_predict,
  eval
};

inline const std::vector<std::pair<std::string, Task>>& task_names() {
  static const std::vector<std::pair<std::string, Task>> names = {
      {"repair", Task::repair},         {"tfidf", Task::tfidf},
      {"embed-fetch", Task::embed_fetch}, {"knn", Task::knn},
      {"prompt-a", Task::prompt_a},     {"prompt-b", Task::prompt_b},
      {"zeroshot", Task::zeroshot},     {"ensemble", Task::ensemble},
      {"distmult", Task::distmult},     {"taxo-train", Task::taxo_train},
      {"taxo-grid", Task::taxo_grid},   {"taxo-predict", Task::taxo_predict},
      {"eval", Task::eval}};
  return names;
}

inline Task task_from_string(const std::string& s) {
  for (const auto& [name, t] : task_names()) {
    if (name == s) return t;
  }
  throw ConfigError("task: unknown task \"" + s + "\"");
}

inline std::string to_string(Task t) {
  for (const auto& [name, v] : task_names()) {
    if (v == t) return name;
  }
  return "?";
}

struct RunConfig {
  Task task = Task::repair;
  std::uint64_t seed = 0;
  std::filesystem::path out = "out";
  std::string endpoint;
  std::string api_key;  // never echoed
  bool mock_llm = false;
  // Resolved input paths keyed by config field ("paths.x" or "params.members[i].x").
  std::map<std::string, std::filesystem::path> paths;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  nlohmann::ordered_json echo;  // effective config as recorded in the manifest

  bool has(const std::string& key) const { return paths.count("paths." + key) > 0; }

  const std::filesystem::path& path(const std::string& key) const {
    auto it = paths.find("paths." + key);
    if (it == paths.end()) throw ConfigError("paths." + key + " is required for task " + to_string(task));
    return it->second;
  }
};

// Command-line values that win over the config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> endpoint;
  std::optional<std::string> api_key;
  std::optional<std::filesystem::path> out;
  bool mock_llm = false;
};

namespace detail {

inline std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

inline void require_file(const std::string& field, const std::filesystem::path& p) {
  if (!std::filesystem::exists(p)) throw ConfigError(field + ": file not found: " + p.string());
}

template <typename Json>
std::string string_field(const Json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) return {};
  if (!j.at(key).is_string()) throw ConfigError(where + key + " must be a string");
  return j.at(key).template get<std::string>();
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::ordered_json& j, const std::filesystem::path& base_dir,
                              const Overrides& ov = {}) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  c.echo = j;
  c.echo.erase("api_key");
  if (!j.contains("task") || !j.at("task").is_string()) throw ConfigError("task: missing or not a string");
  c.task = task_from_string(j.at("task").get<std::string>());

  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("seed must be a non-negative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (ov.seed) c.seed = *ov.seed;
  c.echo["seed"] = c.seed;

  if (auto o = detail::string_field(j, "out", ""); !o.empty()) c.out = detail::resolve(base_dir, o);
  if (ov.out) {
    c.out = *ov.out;
    c.echo["out"] = ov.out->string();
  }
  c.endpoint = detail::string_field(j, "endpoint", "");
  if (ov.endpoint) c.endpoint = *ov.endpoint;
  c.api_key = detail::string_field(j, "api_key", "");
  if (ov.api_key) c.api_key = *ov.api_key;
  c.mock_llm = j.value("mock_llm", false) || ov.mock_llm;
  if (c.mock_llm) c.echo["mock_llm"] = true;
  if (!c.endpoint.empty()) c.echo["endpoint"] = c.endpoint;

  if (j.contains("paths")) {
    if (!j.at("paths").is_object()) throw ConfigError("paths must be an object");
    for (const auto& [key, v] : j.at("paths").items()) {
      if (!v.is_string()) throw ConfigError("paths." + key + " must be a string");
      const auto p = detail::resolve(base_dir, v.get<std::string>());
      detail::require_file("paths." + key, p);
      c.paths["paths." + key] = p;
    }
  }
  if (j.contains("params")) {
    if (!j.at("params").is_object()) throw ConfigError("params must be an object");
    c.params = j.at("params");
  }
  if (c.task == Task::ensemble && c.params.contains("members")) {
    const auto& members = c.params.at("members");
    if (!members.is_array()) throw ConfigError("params.members must be an array");
    for (std::size_t i = 0; i < members.size(); ++i) {
      const std::string where = "params.members[" + std::to_string(i) + "].";
      if (!members[i].is_object()) throw ConfigError(where.substr(0, where.size() - 1) + " must be an object");
      for (const char* key : {"term_store", "type_store"}) {
        const auto v = detail::string_field(members[i], key, where);
        if (v.empty()) throw ConfigError(where + key + " is required");
        const auto p = detail::resolve(base_dir, v);
        detail::require_file(where + key, p);
        c.paths[where + key] = p;
      }
    }
  }
  return c;
}

inline RunConfig load_config(const std::filesystem::path& path, const Overrides& ov = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("--config: cannot open " + path.string());
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("malformed config " + path.string() + ": " + e.what());
  }
  return parse_config(j, path.parent_path(), ov);
}

// ---------------------------------------------------------------------------
// Small utilities

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

inline std::string file_hash(const std::filesystem::path& p) {
  return hex64(fnv1a64(ontolearn::detail::read_file(p)));
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Collects artifacts written during a run, in write order.
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path root) : root_(std::move(root)) {
    std::error_code ec;
    std::filesystem::create_directories(root_, ec);
    if (ec) throw ConfigError("out: cannot create " + root_.string() + ": " + ec.message());
  }

  std::filesystem::path path(const std::string& name) {
    if (std::find(names_.begin(), names_.end(), name) == names_.end()) names_.push_back(name);
    return root_ / name;
  }

  void write_text(const std::string& name, const std::string& content) {
    std::ofstream out(path(name), std::ios::binary);
    if (!out) throw DataError("cannot write " + (root_ / name).string());
    out << content;
  }

  void write_json(const std::string& name, const nlohmann::ordered_json& j) {
    write_text(name, j.dump(2) + "\n");
  }

  void write_lines(const std::string& name, const std::vector<std::string>& lines) {
    std::string s;
    for (const auto& l : lines) s += l + "\n";
    write_text(name, s);
  }

  void write_jsonl(const std::string& name, const std::vector<nlohmann::ordered_json>& rows) {
    std::string s;
    for (const auto& r : rows) s += r.dump() + "\n";
    write_text(name, s);
  }

  const std::filesystem::path& root() const { return root_; }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::filesystem::path root_;
  std::vector<std::string> names_;
};

// Typed access to params.* with field-naming errors.
class Params {
 public:
  explicit Params(const nlohmann::ordered_json& j) : j_(j) {}

  template <typename T>
  T get(const std::string& key, T fallback) const {
    if (!j_.contains(key)) return fallback;
    try {
      const auto& v = j_.at(key);
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError("");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigError("");
      } else if constexpr (std::is_unsigned_v<T>) {
        if (!v.is_number_unsigned()) throw ConfigError("");
      } else if constexpr (std::is_arithmetic_v<T>) {
        if (!v.is_number()) throw ConfigError("");
      }
      return v.template get<T>();
    } catch (const std::exception&) {
      throw ConfigError("params." + key + " has the wrong type");
    }
  }

  bool contains(const std::string& key) const { return j_.contains(key); }
  const nlohmann::ordered_json& at(const std::string& key) const { return j_.at(key); }

 private:
  const nlohmann::ordered_json& j_;
};

inline std::unique_ptr<CompletionBackend> make_backend(const RunConfig& c) {
  if (c.mock_llm) return std::make_unique<MockBackend>();
  if (c.endpoint.empty()) throw ConfigError("endpoint: required for " + to_string(c.task) + " (or use --mock-llm)");
  return std::make_unique<HttpChatBackend>(c.endpoint, c.api_key);
}

// Sub-store holding `ids` in the given order.
inline EmbeddingStore select_rows(const EmbeddingStore& src, const std::vector<std::string>& ids,
                                  const std::string& what) {
  EmbeddingStore out(src.model_name(), src.dim(), src.pooling(), src.l2_normalized());
  for (const auto& id : ids) {
    const auto idx = src.index_of(id);
    if (!idx) throw DataError(what + ": no embedding for \"" + id + "\"");
    out.append(id, src.row(*idx));
  }
  return out;
}

inline nlohmann::ordered_json typing_row(const std::string& term, const std::vector<std::string>& types) {
  nlohmann::ordered_json r;
  r["term"] = term;
  r["types"] = types;
  return r;
}

// {"term", "types"} per line.
inline std::vector<std::pair<std::string, std::vector<std::string>>> read_typing_jsonl(
    const std::filesystem::path& p) {
  std::vector<std::pair<std::string, std::vector<std::string>>> out;
  std::istringstream in(ontolearn::detail::read_file(p));
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (text::trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      out.emplace_back(j.at("term").get<std::string>(), j.at("types").get<std::vector<std::string>>());
    } catch (const nlohmann::json::exception&) {
      throw DataError(p.string() + ": bad typing record at line " + std::to_string(n));
    }
  }
  return out;
}

inline CorpusPaths corpus_paths(const RunConfig& c, const std::string& prefix) {
  CorpusPaths cp;
  cp.documents = c.path(prefix + "documents");
  auto opt = [&](const std::string& key) {
    return c.has(prefix + key) ? c.path(prefix + key) : std::filesystem::path{};
  };
  cp.terms = opt("terms");
  cp.types = opt("types");
  cp.terms2types = opt("terms2types");
  cp.terms2docs = opt("terms2docs");
  return cp;
}

// ---------------------------------------------------------------------------
// Tasks. Each returns a summary object recorded in the manifest.

using Summary = nlohmann::ordered_json;

inline Summary run_repair(const RunConfig& c, OutputDir& out) {
  auto cp = corpus_paths(c, "");
  if (cp.terms.empty()) throw ConfigError("paths.terms is required for task repair");
  const Corpus corpus = load_corpus(cp);
  const auto index = repair_term_doc_index(corpus);
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  std::size_t matched = 0;
  for (const auto& [term, docs] : index.term_to_docs) {
    j[term] = std::vector<std::string>(docs.begin(), docs.end());
    matched += !docs.empty();
  }
  out.write_json("terms2docs.repaired.json", j);
  return {{"terms", index.term_to_docs.size()}, {"terms_with_documents", matched}};
}

inline Summary run_tfidf(const RunConfig& c, OutputDir& out) {
  const Params p(c.params);
  const Corpus corpus = load_corpus(corpus_paths(c, ""));
  const TfidfModel model(corpus.documents(), p.get<std::size_t>("min_token_length", 2));
  const auto k = p.get<std::size_t>("k", 20);
  std::vector<nlohmann::ordered_json> rows;
  for (const auto& d : corpus.documents()) {
    rows.push_back({{"id", d.id}, {"keywords", model.keywords(d.text, k)}});
  }
  out.write_jsonl("keywords.jsonl", rows);
  return {{"documents", rows.size()}};
}

inline Summary run_embed_fetch(const RunConfig& c, OutputDir& out) {
  const Params p(c.params);
  if (c.endpoint.empty()) throw ConfigError("endpoint: required for embed-fetch");
  std::vector<std::string> ids, texts;
  {
    std::istringstream in(ontolearn::detail::read_file(c.path("input")));
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (text::trim(line).empty()) continue;
      try {
        const auto j = nlohmann::json::parse(line);
        ids.push_back(j.at("id").get<std::string>());
        texts.push_back(j.at("text").get<std::string>());
      } catch (const nlohmann::json::exception&) {
        throw DataError(c.path("input").string() + ": bad record at line " + std::to_string(n));
      }
    }
  }
  FetchOptions opt;
  opt.endpoint = c.endpoint;
  opt.api_key = c.api_key;
  opt.model_name = p.get<std::string>("model", "default");
  opt.batch_size = p.get<std::size_t>("batch_size", 32);
  try {
    opt.pooling = pooling_from_string(p.get<std::string>("pooling", "mean"));
  } catch (const DataError& e) {
    throw ConfigError(std::string("params.pooling: ") + e.what());
  }
  opt.normalize = p.get<bool>("normalize", true);
  opt.dim = p.get<std::size_t>("dim", 0);
  const auto store = fetch_embeddings(opt, ids, texts);
  write_store(store, out.path("store.emb"));
  return {{"rows", store.size()}, {"dim", store.dim()}};
}

inline Summary run_knn(const RunConfig& c, OutputDir& out) {
  const Params p(c.params);
  const auto store = read_store(c.path("store"));
  const auto queries = c.has("queries") ? read_store(c.path("queries")) : store;
  const auto k = p.get<std::size_t>("k", 3);
  const bool exclude_self = p.get<bool>("exclude_self", true);
  std::vector<nlohmann::ordered_json> rows;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const auto& qid = queries.ids()[i];
    auto nn = knn(store, queries.row(i), k + (exclude_self ? 1 : 0));
    auto arr = nlohmann::ordered_json::array();
    for (const auto& n : nn) {
      if (exclude_self && n.id == qid) continue;
      if (arr.size() == k) break;
      arr.push_back({{"id", n.id}, {"score", n.score}});
    }
    rows.push_back({{"id", qid}, {"neighbors", arr}});
  }
  out.write_jsonl("neighbors.jsonl", rows);
  return {{"queries", rows.size()}};
}

inline DecodeParams decode_params(const Params& p) {
  DecodeParams d;
  d.model = p.get<std::string>("model", d.model);
  d.temperature = p.get<double>("temperature", d.temperature);
  return d;
}

// Task A: few-shot extraction of terms and types per test document.
inline Summary run_prompt_a(const RunConfig& c, OutputDir& out) {
  const Params p(c.params);
  const auto method_name = p.get<std::string>("method", "m2");
  DemoMethod method;
  if (method_name == "m1") method = DemoMethod::m1;
  else if (method_name == "m2") method = DemoMethod::m2;
  else throw ConfigError("params.method must be \"m1\" or \"m2\"");
  const auto k = p.get<std::size_t>("k", kMaxDemonstrations);

  const Corpus train = load_corpus(corpus_paths(c, "train_"));
  const auto test_docs = parse_documents_jsonl(ontolearn::detail::read_file(c.path("test_documents")));
  const auto doc_store = read_store(c.path("doc_store"));
  std::vector<std::string> train_ids;
  for (const auto& d : train.documents()) train_ids.push_back(d.id);
  const auto train_store = select_rows(doc_store, train_ids, "paths.doc_store");

  const auto index = repair_term_doc_index(train);
  const TaskADemoSource demos(train, index, p.get<std::size_t>("keywords", 20));
  auto backend = make_backend(c);
  const auto decode = decode_params(p);

  std::vector<nlohmann::ordered_json> prompts, preds;
  std::vector<ExtractionResult> results;
  std::size_t skipped = 0, parse_failures = 0;
  for (const auto& doc : test_docs) {
    const auto idx = doc_store.index_of(doc.id);
    if (!idx) throw DataError("paths.doc_store: no embedding for \"" + doc.id + "\"");
    std::vector<std::string> neighbors;
    for (const auto& n : knn(train_store, doc_store.row(*idx), k)) neighbors.push_back(n.id);
    const auto built = demos.build(doc, demos.keywords(doc), neighbors, method);
    skipped += built.skipped;
    auto pj = to_json(built.prompt);
    pj["id"] = doc.id;
    prompts.push_back(pj);

    ExtractionResult r;
    try {
      r = parse_structured_output(complete(built.prompt, *backend, decode));
    } catch (const OutputParseError&) {
      ++parse_failures;
    }
    preds.push_back({{"id", doc.id}, {"terms", r.terms}, {"types", r.types}});
    results.push_back(std::move(r));
  }
  const auto merged = aggregate_results(results);
  out.write_jsonl("prompts.jsonl", prompts);
  out.write_jsonl("predictions.jsonl", preds);
  out.write_lines("terms.txt", merged.terms);
  out.write_lines("types.txt", merged.types);
  return {{"documents", test_docs.size()},
          {"skipped_demonstrations", skipped},
          {"parse_failures", parse_failures},
          {"terms", merged.terms.size()},
          {"types", merged.types.size()}};
}

// Task B: few-shot typing with nearest training terms as exemplars.
inline Summary run_prompt_b(const RunConfig& c, OutputDir& out) {
  const Params p(c.params);
  const auto k = p.get<std::size_t>("k", kMaxDemonstrations);
  const auto train = ontolearn::detail::parse_string_multimap(
      ontolearn::detail::parse_json_file(c.path("train_terms2types")),
      c.path("train_terms2types").string());
  const auto test_terms = read_lines(c.path("test_terms"));
  const auto term_store = read_store(c.path("term_store"));

  std::vector<std::string> train_terms;
  for (const auto& [t, _] : train) train_terms.push_back(t);
  const auto train_store = select_rows(term_store, train_terms, "paths.term_store");
  auto backend = make_backend(c);
  const auto decode = decode_params(p);

  std::vector<nlohmann::ordered_json> prompts, typing;
  std::vector<ExtractionResult> results;
  std::size_t parse_failures = 0;
  for (const auto& term : test_terms) {
    const auto idx = term_store.index_of(term);
    if (!idx) throw DataError("paths.term_store: no embedding for \"" + term + "\"");
    std::vector<std::pair<std::string, std::set<std::string>>> neighbors;
    for (const auto& n : knn(train_store, term_store.row(*idx), k + 1)) {
      if (n.id == term || neighbors.size() == k) continue;
      neighbors.emplace_back(n.id, train.at(n.id));
    }
    const auto prompt = build_prompt_taskB(term, neighbors);
    auto pj = to_json(prompt);
    pj["term"] = term;
    prompts.push_back(pj);
    ExtractionResult r;
    try {
      r = parse_structured_output(complete(prompt, *backend, decode), OutputSchema::types_only);
    } catch (const OutputParseError&) {
      ++parse_failures;
    }
    typing.push_back(typing_row(term, r.types));
    results.push_back(std::move(r));
  }
  out.write_jsonl("prompts.jsonl", prompts);
  out.write_jsonl("typing.jsonl", typing);
  out.write_lines("types.txt", aggregate_results(results).types);
  return {{"terms", test_terms.size()}, {"parse_failures", parse_failures}};
}

inline std::vector<std::string> query_terms(const RunConfig& c, const EmbeddingStore& term_store) {
  return c.has("test_terms") ? read_lines(c.path("test_terms")) : term_store.ids();
}

inline std::span<const float> term_row(const EmbeddingStore& store, const std::string& term,
                                       const std::string& field) {
  const auto idx = store.index_of(term);
  if (!idx) throw DataError(field + ": no embedding for \"" + term + "\"");
  return store.row(*idx);
}

inline Summary run_zeroshot(const RunConfig& c, OutputDir& out) {
  const auto terms_store = read_store(c.path("term_store"));
  const auto types_store = read_store(c.path("type_store"));
  std::vector<nlohmann::ordered_json> rows;
  for (const auto& term : query_terms(c, terms_store)) {
    const auto pred = cosine_classify(term_row(terms_store, term, "paths.term_store"), types_store, term);
    rows.push_back(typing_row(term, pred.predicted));
  }
  out.write_jsonl("typing.jsonl", rows);
  return {{"terms", rows.size()}, {"candidate_types", types_store.size()}};
}

inline Summary run_ensemble(const RunConfig& c, OutputDir& out) {
  const Params p(c.params);
  if (!p.contains("members") || p.at("members").empty()) {
    throw ConfigError("params.members must list at least one member");
  }
  const auto mode_name = p.get<std::string>("score", "similarities");
  EnsembleScore mode;
  if (mode_name == "similarities") mode = EnsembleScore::similarities;
  else if (mode_name == "probs") mode = EnsembleScore::probs;
  else throw ConfigError("params.score must be \"similarities\" or \"probs\"");

  struct Member {
    std::string name;
    EmbeddingStore terms, types;
    double temperature;
  };
  std::vector<Member> members;
  const auto& mj = p.at("members");
  for (std::size_t i = 0; i < mj.size(); ++i) {
    const std::string where = "params.members[" + std::to_string(i) + "].";
    Member m;
    m.name = mj[i].value("name", "member" + std::to_string(i));
    m.temperature = mj[i].value("temperature", 1.0);
    m.terms = read_store(c.paths.at(where + "term_store"));
    m.types = read_store(c.paths.at(where + "type_store"));
    members.push_back(std::move(m));
  }
  // Candidate order follows the first member; others are aligned by id.
  const auto candidates = members.front().types.ids();
  for (auto& m : members) {
    m.types = select_rows(m.types, candidates, m.name + " type_store");
  }
  std::vector<nlohmann::ordered_json> rows, weights;
  for (const auto& term : query_terms(c, members.front().terms)) {
    std::vector<MemberPrediction> preds;
    for (const auto& m : members) {
      preds.push_back(member_predict(cosine_scores(term_row(m.terms, term, m.name + " term_store"), m.types),
                                     m.temperature, m.name));
    }
    const auto w = ensemble_weights(preds);
    const auto pred = ensemble_predict(preds, candidates, mode, term);
    rows.push_back(typing_row(term, pred.predicted));
    nlohmann::ordered_json wj;
    wj["term"] = term;
    for (std::size_t i = 0; i < members.size(); ++i) wj["weights"][members[i].name] = w[i];
    weights.push_back(wj);
  }
  out.write_jsonl("typing.jsonl", rows);
  out.write_jsonl("weights.jsonl", weights);
  return {{"terms", rows.size()}, {"members", members.size()}};
}

inline Summary run_distmult(const RunConfig& c, OutputDir& out) {
  const Params p(c.params);
  const double tau = p.get<double>("tau", 1.0);
  const auto terms_store = read_store(c.path("term_store"));
  const auto types_store = read_store(c.path("type_store"));
  std::vector<nlohmann::ordered_json> rows;
  std::size_t assigned = 0;
  for (const auto& term : query_terms(c, terms_store)) {
    const auto pred = distmult_predict(term_row(terms_store, term, "paths.term_store"), types_store, tau, term);
    assigned += pred.predicted.size();
    rows.push_back(typing_row(term, pred.predicted));
  }
  out.write_jsonl("typing.jsonl", rows);
  return {{"terms", rows.size()}, {"assignments", assigned}};
}

inline taxo::TaxonomyGraph load_graph(const RunConfig& c, const std::string& key) {
  std::vector<std::string> types;
  if (key == "taxonomy" && c.has("types")) types = read_lines(c.path("types"));
  return taxo::read_taxonomy(c.path(key), std::move(types));
}

inline taxo::TrainConfig train_config(const RunConfig& c) {
  const Params p(c.params);
  taxo::TrainConfig tc;
  if (p.contains("train")) {
    try {
      tc = taxo::train_config_from_json(p.at("train"));
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("params.train: ") + e.what());
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("params.train: ") + e.what());
    }
  }
  tc.seed = c.seed;
  tc.validate();
  return tc;
}

inline nlohmann::ordered_json history_json(const taxo::TrainResult& r) {
  nlohmann::ordered_json h;
  h["best_epoch"] = r.best_epoch;
  h["best_val_auc"] = std::isnan(r.best_val_auc) ? nlohmann::ordered_json() : nlohmann::ordered_json(r.best_val_auc);
  h["pos_weight"] = r.pos_weight;
  h["epochs"] = nlohmann::ordered_json::array();
  for (const auto& e : r.history) {
    h["epochs"].push_back({{"epoch", e.epoch},
                           {"train_loss", e.train_loss},
                           {"val_auc", std::isnan(e.val_auc) ? nlohmann::ordered_json() : nlohmann::ordered_json(e.val_auc)}});
  }
  return h;
}

inline Summary run_taxo_train(const RunConfig& c, OutputDir& out) {
  const Params p(c.params);
  const auto tc = train_config(c);
  const auto graph = load_graph(c, "taxonomy");
  const auto store = read_store(c.path("type_store"));
  const double ratio = p.get<double>("split_ratio", 0.8);

  taxo::TrainResult r;
  nlohmann::ordered_json history;
  if (ratio >= 1.0) {
    r = taxo::train(graph, store, tc);
    history = history_json(r);
    history["train_density"] = graph.density();
  } else {
    const auto split = taxo::split_types(graph, ratio, c.seed);
    r = taxo::train(split.train, &split.validation, store, tc);
    history = history_json(r);
    history["train_density"] = split.train.density();
    history["dropped_edges"] = split.dropped_edges;
    // Validation-F1 threshold for the best head, if both classes are present.
    const auto s = taxo::forward(r.best_head, taxo::gather_embeddings(store, split.validation.types));
    const auto [scores, labels] = taxo::valid_pairs(s, taxo::labels_for<double>(split.validation));
    if (std::count(labels.begin(), labels.end(), 1) > 0) {
      history["val_f1_threshold"] = taxo::select_val_f1_threshold(scores, labels);
    }
  }
  taxo::write_checkpoint(out.path("head.ckpt"), r.best_head, tc);
  taxo::write_checkpoint(out.path("head.final.ckpt"), r.final_head, tc);
  out.write_json("history.json", history);
  return {{"types", graph.size()}, {"edges", graph.edges.size()}, {"best_epoch", r.best_epoch}};
}

inline Summary run_taxo_grid(const RunConfig& c, OutputDir& out) {
  const Params p(c.params);
  const auto base = train_config(c);
  const auto graph = load_graph(c, "taxonomy");
  const auto store = read_store(c.path("type_store"));
  auto list = [&](const char* key, auto fallback) {
    using T = typename decltype(fallback)::value_type;
    if (!p.contains("grid") || !p.at("grid").contains(key)) return fallback;
    try {
      auto v = p.at("grid").at(key).template get<std::vector<T>>();
      if (v.empty()) throw ConfigError("");
      return v;
    } catch (const std::exception&) {
      throw ConfigError(std::string("params.grid.") + key + " must be a non-empty array");
    }
  };
  const auto configs = taxo::make_grid(list("learning_rate", std::vector<double>{base.learning_rate}),
                                       list("batch_size", std::vector<std::size_t>{base.batch_size}),
                                       list("num_heads", std::vector<std::size_t>{base.num_heads}),
                                       list("epochs", std::vector<std::size_t>{base.epochs}), base);
  const auto g = taxo::grid_search(graph, store, configs, p.get<double>("split_ratio", 0.8), c.seed);
  nlohmann::ordered_json board = nlohmann::ordered_json::array();
  for (const auto& e : g.leaderboard) {
    board.push_back({{"config", taxo::to_json(e.config)},
                     {"val_auc", std::isnan(e.val_auc) ? nlohmann::ordered_json() : nlohmann::ordered_json(e.val_auc)},
                     {"best_epoch", e.best_epoch}});
  }
  out.write_json("leaderboard.json", {{"best_index", g.best_index},
                                      {"train_density", g.split.train.density()},
                                      {"entries", board}});
  taxo::write_checkpoint(out.path("head.ckpt"), g.best.best_head, configs[g.best_index]);
  return {{"configs", configs.size()}, {"best_index", g.best_index}};
}

inline Summary run_taxo_predict(const RunConfig& c, OutputDir& out) {
  const Params p(c.params);
  const auto ck = taxo::read_checkpoint(c.path("checkpoint"));
  const auto head = ck.head.cast<double>();
  const auto store = read_store(c.path("type_store"));
  std::vector<std::string> types;
  if (c.has("types")) types = read_lines(c.path("types"));
  else types = store.ids();

  const auto mode = p.get<std::string>("cutoff", "sparsity");
  taxo::Cutoff cut;
  Summary s;
  if (mode == "threshold") {
    if (!p.contains("threshold")) throw ConfigError("params.threshold is required for cutoff \"threshold\"");
    cut = taxo::Threshold{p.get<double>("threshold", 0.5)};
  } else if (mode == "sparsity") {
    double density;
    if (p.contains("train_density")) {
      density = p.get<double>("train_density", 0.0);
    } else if (c.has("train_taxonomy")) {
      density = load_graph(c, "train_taxonomy").density();
    } else {
      throw ConfigError("params.train_density or paths.train_taxonomy is required for cutoff \"sparsity\"");
    }
    cut = taxo::TopK{taxo::sparsity_edge_count(density, types.size() * types.size())};
    s["train_density"] = density;
  } else if (mode == "val_f1") {
    const auto val = load_graph(c, "validation_taxonomy");
    const auto sv = taxo::forward(head, taxo::gather_embeddings(store, val.types));
    const auto [scores, labels] = taxo::valid_pairs(sv, taxo::labels_for<double>(val));
    const double t = taxo::select_val_f1_threshold(scores, labels);
    cut = taxo::Threshold{t};
    s["threshold"] = t;
  } else {
    throw ConfigError("params.cutoff must be \"threshold\", \"sparsity\" or \"val_f1\"");
  }
  const auto g = taxo::predict_taxonomy(head, store, types, cut);
  taxo::write_taxonomy(g, out.path("taxonomy.json"));
  s["types"] = types.size();
  s["edges"] = g.edges.size();
  return s;
}

inline Summary run_eval(const RunConfig& c, OutputDir& out) {
  const Params p(c.params);
  const auto kind = p.get<std::string>("kind", "terms");
  const bool normalize = p.get<bool>("normalize", true);
  ReportRow row;
  row.dataset = p.get<std::string>("dataset", "dataset");
  row.metric = p.get<std::string>("metric", kind);
  if (kind == "terms" || kind == "types") {
    row.prf = set_prf(read_lines(c.path("predicted")), read_lines(c.path("gold")), normalize);
  } else if (kind == "typing") {
    // (term, type) pairs; gold is a terms2types JSON object.
    std::vector<NamedEdge> pred, gold;
    for (const auto& [term, types] : read_typing_jsonl(c.path("predicted"))) {
      for (const auto& t : types) pred.emplace_back(term, t);
    }
    const auto g = ontolearn::detail::parse_string_multimap(
        ontolearn::detail::parse_json_file(c.path("gold")), c.path("gold").string());
    for (const auto& [term, types] : g) {
      for (const auto& t : types) gold.emplace_back(term, t);
    }
    row.prf = edge_prf(pred, gold, normalize);
  } else if (kind == "taxonomy") {
    row.prf = edge_prf(taxo::read_taxonomy(c.path("predicted")).named_edges(),
                       taxo::read_taxonomy(c.path("gold")).named_edges(), normalize);
  } else {
    throw ConfigError("params.kind must be terms, types, typing or taxonomy");
  }
  out.write_json("report.json", nlohmann::ordered_json::array({to_json(row)}));
  out.write_text("report.txt", format_table({row}));
  return to_json(row);
}

// ---------------------------------------------------------------------------

struct RunResult {
  int exit_code = 0;
  std::string message;
  std::filesystem::path manifest;
};

inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return 1;
  if (dynamic_cast<const ServiceError*>(&e)) return 3;
  return 2;
}

inline nlohmann::ordered_json build_manifest(const RunConfig& c, const OutputDir& out,
                                             const Summary& summary, const std::string& timestamp) {
  nlohmann::ordered_json m;
  m["tool"] = "ontolearn";
  m["version"] = kVersion;
  m["task"] = to_string(c.task);
  m["seed"] = c.seed;
  m["config"] = c.echo;
  m["inputs"] = nlohmann::ordered_json::object();
  for (const auto& [field, path] : c.paths) {
    m["inputs"][field] = {{"fnv1a64", file_hash(path)}};
  }
  m["outputs"] = nlohmann::ordered_json::object();
  for (const auto& name : out.names()) {
    m["outputs"][name] = {{"fnv1a64", file_hash(out.root() / name)}};
  }
  m["summary"] = summary;
  m["timestamp"] = timestamp;
  return m;
}

inline Summary dispatch(const RunConfig& c, OutputDir& out) {
  switch (c.task) {
    case Task::repair: return run_repair(c, out);
    case Task::tfidf: return run_tfidf(c, out);
    case Task::embed_fetch: return run_embed_fetch(c, out);
    case Task::knn: return run_knn(c, out);
    case Task::prompt_a: return run_prompt_a(c, out);
    case Task::prompt_b: return run_prompt_b(c, out);
    case Task::zeroshot: return run_zeroshot(c, out);
    case Task::ensemble: return run_ensemble(c, out);
    case Task::distmult: return run_distmult(c, out);
    case Task::taxo_train: return run_taxo_train(c, out);
    case Task::taxo_grid: return run_taxo_grid(c, out);
    case Task::taxo_predict: return run_taxo_predict(c, out);
    case Task::eval: return run_eval(c, out);
  }
  throw ConfigError("task: unhandled");
}

// Never throws for pipeline errors; the exit code says which kind occurred.
inline RunResult run(const RunConfig& c) {
  RunResult r;
  try {
    OutputDir out(c.out);
    const auto summary = dispatch(c, out);
    r.manifest = c.out / "manifest.json";
    std::ofstream mf(r.manifest, std::ios::binary);
    if (!mf) throw DataError("cannot write " + r.manifest.string());
    mf << build_manifest(c, out, summary, utc_timestamp()).dump(2) << '\n';
    r.message = to_string(c.task) + ": ok";
  } catch (const Error& e) {
    r.exit_code = exit_code_for(e);
    r.message = e.what();
  } catch (const nlohmann::json::exception& e) {
    r.exit_code = 2;
    r.message = e.what();
  }
  return r;
}

inline RunResult run(const std::filesystem::path& config_path, const Overrides& ov = {}) {
  try {
    return run(load_config(config_path, ov));
  } catch (const Error& e) {
    return {exit_code_for(e), e.what(), {}};
  }
}

}  // namespace ontolearn::pipeline
