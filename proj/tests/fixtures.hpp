#pragma once

// Synthetic, fully planted inputs shared by unit and acceptance tests.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "ontolearn/corpus.hpp"
#include "ontolearn/embedstore.hpp"
#include "ontolearn/taxo.hpp"

namespace fixtures {

namespace fs = std::filesystem;

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            ("ontolearn_" + tag + "_" + std::to_string(rd()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// ---------------------------------------------------------------------------
// Planted corpus: 20 documents, 50 terms. Each document is built from planted
// term occurrences (with case and punctuation variation) and filler words
// that contain terms only as unbounded substrings ("cellé", "reaction",
// "genesis"). The expected index is known by construction.

inline const std::vector<std::string>& planted_terms() {
  static const std::vector<std::string> terms = {
      "cell",      "cellular",    "cell wall", "ion",        "ionic",       "rna",
      "mrna",      "graph",       "graphene",  "kinase",     "protein kinase", "enzyme",
      "enzymes",   "acid",        "amino acid", "lipid",     "membrane",    "nucleus",
      "nuclear",   "virus",       "viral",     "gene",       "genes",       "genome",
      "genomic",   "neuron",      "neural",    "tissue",     "organ",       "organism",
      "organic",   "carbon",      "carbonate", "oxide",      "dioxide",     "metal",
      "metallic",  "alloy",       "polymer",   "monomer",    "crystal",     "crystalline",
      "catalyst",  "catalysis",   "solvent",   "reagent",    "molecule",    "molecular",
      "atom",      "atomic"};
  return terms;
}

// Multi-word terms that contain another term on word boundaries.
inline const std::map<std::string, std::vector<std::string>>& implied_terms() {
  static const std::map<std::string, std::vector<std::string>> m = {
      {"cell wall", {"cell"}}, {"amino acid", {"acid"}}, {"protein kinase", {"kinase"}}};
  return m;
}

struct PlantedCorpus {
  std::vector<ontolearn::Document> docs;
  std::map<std::string, std::set<std::string>> expected;  // term -> doc ids
};

inline PlantedCorpus make_planted_corpus(std::uint64_t seed = 7) {
  static const std::vector<std::string> filler = {
      "the",    "study", "of",     "shows", "results", "with",     "and",    "we",
      "report", "data",  "action", "reaction", "cellé", "genesis", "organza", "atomize",
      "mrnaü",  "graphs", "carbons", "alloys-like"};
  // None of the filler words may contain a term on word boundaries; "alloys-like"
  // would contain "like" but that is not a term.
  static const std::vector<std::pair<std::string, std::string>> wrappers = {
      {"", ""}, {"(", ")"}, {"", ","}, {"", "."}, {"\"", "\""}, {"", "-based"}, {"[", "]"}};

  const auto& terms = planted_terms();
  std::mt19937_64 rng(seed);
  PlantedCorpus pc;
  for (const auto& t : terms) pc.expected[t];
  for (int d = 0; d < 20; ++d) {
    ontolearn::Document doc;
    doc.id = "doc" + std::to_string(d);
    std::vector<std::string> words;
    std::string title;
    const int n_planted = 3 + static_cast<int>(rng() % 4);
    for (int i = 0; i < n_planted; ++i) {
      const auto& term = terms[rng() % terms.size()];
      std::string surface = term;
      switch (rng() % 3) {
        case 0: break;
        case 1: surface[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(surface[0]))); break;
        case 2:
          for (auto& ch : surface) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
          break;
      }
      const auto& [pre, post] = wrappers[rng() % wrappers.size()];
      pc.expected[term].insert(doc.id);
      if (auto it = implied_terms().find(term); it != implied_terms().end()) {
        for (const auto& sub : it->second) pc.expected[sub].insert(doc.id);
      }
      if (i == 0 && rng() % 2 == 0) {
        title = "On " + surface;
        continue;
      }
      for (int f = 0; f < 2; ++f) words.push_back(filler[rng() % filler.size()]);
      words.push_back(pre + surface + post);
    }
    words.push_back(filler[rng() % filler.size()]);
    doc.title = title.empty() ? "Untitled report" : title;
    for (std::size_t i = 0; i < words.size(); ++i) doc.text += (i ? " " : "") + words[i];
    pc.docs.push_back(std::move(doc));
  }
  return pc;
}

inline std::string documents_jsonl(const std::vector<ontolearn::Document>& docs) {
  std::string s;
  for (const auto& d : docs) {
    nlohmann::ordered_json j;
    j["id"] = d.id;
    j["title"] = d.title;
    j["text"] = d.text;
    s += j.dump() + "\n";
  }
  return s;
}

inline std::string lines(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += x + "\n";
  return s;
}

// ---------------------------------------------------------------------------
// Embedding stores

inline std::vector<float> random_unit(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<float> n(0.0f, 1.0f);
  std::vector<float> v(dim);
  for (auto& x : v) x = n(rng);
  return ontolearn::l2_normalize(std::span<const float>(v));
}

inline ontolearn::EmbeddingStore random_store(const std::vector<std::string>& ids, std::size_t dim,
                                              std::uint64_t seed, bool normalized = true) {
  std::mt19937_64 rng(seed);
  ontolearn::EmbeddingStore s("synthetic-encoder", dim, ontolearn::Pooling::mean, normalized);
  for (const auto& id : ids) {
    auto v = random_unit(rng, dim);
    if (!normalized) {
      for (auto& x : v) x *= 2.5f;
    }
    s.append(id, v);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Planted two-level taxonomy: `roots` top types, every other type has one
// root parent.

inline ontolearn::taxo::TaxonomyGraph planted_taxonomy(std::size_t n, std::size_t roots,
                                                       std::uint64_t seed) {
  ontolearn::taxo::TaxonomyGraph g;
  for (std::size_t i = 0; i < n; ++i) g.types.push_back("type" + std::to_string(i));
  std::mt19937_64 rng(seed);
  for (std::size_t c = roots; c < n; ++c) g.add_edge(c, rng() % roots);
  return g;
}

// ---------------------------------------------------------------------------
// End-to-end workspace for the prompt pipelines: training corpus with
// terms2types/terms2docs, test documents and terms, file-based embeddings.

struct PipelineWorkspace {
  TempDir dir{"pipeline"};

  PipelineWorkspace() {
    const auto pc = make_planted_corpus(11);
    std::vector<ontolearn::Document> train(pc.docs.begin(), pc.docs.begin() + 15);
    std::vector<ontolearn::Document> test(pc.docs.begin() + 15, pc.docs.end());
    write_file(dir / "train_documents.jsonl", documents_jsonl(train));
    write_file(dir / "test_documents.jsonl", documents_jsonl(test));

    const auto& terms = planted_terms();
    std::vector<std::string> train_terms(terms.begin(), terms.begin() + 40);
    std::vector<std::string> test_terms(terms.begin() + 40, terms.end());
    static const std::vector<std::string> types = {"biology", "chemistry", "materials", "physics"};
    nlohmann::ordered_json t2t = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < train_terms.size(); ++i) {
      t2t[train_terms[i]] = std::vector<std::string>{types[i % types.size()]};
      if (i % 5 == 0) t2t[train_terms[i]].push_back(types[(i + 1) % types.size()]);
    }
    nlohmann::ordered_json t2d = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < train.size(); ++i) {
      t2d[types[i % types.size()]].push_back(train[i].id);
    }
    write_file(dir / "train_terms.txt", lines(train_terms));
    write_file(dir / "test_terms.txt", lines(test_terms));
    write_file(dir / "types.txt", lines(types));
    write_file(dir / "train_terms2types.json", t2t.dump(1));
    write_file(dir / "train_terms2docs.json", t2d.dump(1));

    std::vector<std::string> doc_ids;
    for (const auto& d : pc.docs) doc_ids.push_back(d.id);
    ontolearn::write_store(random_store(doc_ids, 12, 3), dir / "docs.emb");
    ontolearn::write_store(random_store(terms, 12, 4), dir / "terms.emb");
    ontolearn::write_store(random_store(types, 12, 5), dir / "types.emb");
  }

  fs::path write_config(const std::string& name, const nlohmann::ordered_json& cfg) const {
    const auto p = dir / name;
    write_file(p, cfg.dump(2));
    return p;
  }

  nlohmann::ordered_json task_a_config(const std::string& out) const {
    return {{"task", "prompt-a"},
            {"seed", 42},
            {"out", out},
            {"paths",
             {{"train_documents", "train_documents.jsonl"},
              {"train_terms", "train_terms.txt"},
              {"train_terms2types", "train_terms2types.json"},
              {"train_terms2docs", "train_terms2docs.json"},
              {"test_documents", "test_documents.jsonl"},
              {"doc_store", "docs.emb"}}},
            {"params", {{"method", "m2"}, {"keywords", 10}}}};
  }

  nlohmann::ordered_json task_b_config(const std::string& out) const {
    return {{"task", "prompt-b"},
            {"seed", 42},
            {"out", out},
            {"paths",
             {{"train_terms2types", "train_terms2types.json"},
              {"test_terms", "test_terms.txt"},
              {"term_store", "terms.emb"}}}};
  }
};

}  // namespace fixtures
