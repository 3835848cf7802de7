#pragma once

// Dense embedding store: id-keyed f32 rows plus pooling/normalization
// metadata, with cosine helpers and exact k-NN.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ontolearn/binio.hpp"
#include "ontolearn/error.hpp"

namespace ontolearn {

enum class Pooling { mean, last_token };

inline std::string to_string(Pooling p) {
  return p == Pooling::mean ? "mean" : "last_token";
}

inline Pooling pooling_from_string(const std::string& s) {
  if (s == "mean") return Pooling::mean;
  if (s == "last_token") return Pooling::last_token;
  throw DataError("unknown pooling \"" + s + "\"");
}

template <std::floating_point T>
double dot(std::span<const T> u, std::span<const T> v) {
  if (u.size() != v.size()) throw DataError("dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    acc += static_cast<double>(u[i]) * static_cast<double>(v[i]);
  }
  return acc;
}

template <std::floating_point T>
double l2_norm(std::span<const T> v) {
  return std::sqrt(dot(v, v));
}

template <std::floating_point T>
std::vector<T> l2_normalize(std::span<const T> v) {
  if (v.empty()) throw DataError("empty vector");
  const double n = l2_norm(v);
  if (n == 0.0 || !std::isfinite(n)) throw DataError("zero-norm vector");
  std::vector<T> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = static_cast<T>(static_cast<double>(v[i]) / n);
  }
  return out;
}

template <std::floating_point T>
std::vector<T> l2_normalize(const std::vector<T>& v) {
  return l2_normalize(std::span<const T>(v));
}

template <std::floating_point T>
double cosine(std::span<const T> u, std::span<const T> v) {
  if (u.size() != v.size()) throw DataError("dimension mismatch");
  const double nu = l2_norm(u), nv = l2_norm(v);
  if (nu == 0.0 || nv == 0.0) throw DataError("zero-norm vector");
  return dot(u, v) / (nu * nv);
}

template <std::floating_point T>
double cosine(const std::vector<T>& u, const std::vector<T>& v) {
  return cosine(std::span<const T>(u), std::span<const T>(v));
}

struct Neighbor {
  std::string id;
  double score = 0.0;
};

class EmbeddingStore {
 public:
  static constexpr double kNormTolerance = 1e-4;

  EmbeddingStore() = default;
  EmbeddingStore(std::string model_name, std::size_t dim, Pooling pooling,
                 bool l2_normalized)
      : model_name_(std::move(model_name)),
        dim_(dim),
        pooling_(pooling),
        l2_normalized_(l2_normalized) {
    if (dim_ == 0) throw DataError("dim must be positive");
  }

  const std::string& model_name() const { return model_name_; }
  std::size_t dim() const { return dim_; }
  Pooling pooling() const { return pooling_; }
  bool l2_normalized() const { return l2_normalized_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::vector<float>& data() const { return data_; }

  // Extra header fields carried through read/write untouched (e.g. a pinned
  // model revision written by the exporter).
  const nlohmann::ordered_json& extra_header() const { return extra_; }
  void set_extra_header(nlohmann::ordered_json extra) { extra_ = std::move(extra); }

  std::span<const float> row(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }

  std::optional<std::size_t> index_of(const std::string& id) const {
    auto it = pos_.find(id);
    if (it == pos_.end()) return std::nullopt;
    return it->second;
  }

  std::span<const float> at(const std::string& id) const {
    auto i = index_of(id);
    if (!i) throw DataError("no embedding for \"" + id + "\"");
    return row(*i);
  }

  void append(std::string id, std::span<const float> vec) {
    if (vec.size() != dim_) {
      throw DataError("row for \"" + id + "\" has " + std::to_string(vec.size()) +
                      " values, expected " + std::to_string(dim_));
    }
    for (float f : vec) {
      if (!std::isfinite(f)) throw DataError("non-finite value in row \"" + id + "\"");
    }
    if (l2_normalized_) {
      const double n = l2_norm(vec);
      if (std::abs(n - 1.0) > kNormTolerance) {
        throw DataError("row \"" + id + "\" is not unit-norm (" + std::to_string(n) + ")");
      }
    }
    if (!pos_.emplace(id, ids_.size()).second) {
      throw DataError("duplicate id \"" + id + "\"");
    }
    ids_.push_back(std::move(id));
    data_.insert(data_.end(), vec.begin(), vec.end());
  }

  void append(std::string id, const std::vector<float>& vec) {
    append(std::move(id), std::span<const float>(vec));
  }

  // Bitwise comparison of floats so -0.0 / NaN payloads count.
  friend bool operator==(const EmbeddingStore& a, const EmbeddingStore& b) {
    return a.model_name_ == b.model_name_ && a.dim_ == b.dim_ &&
           a.pooling_ == b.pooling_ && a.l2_normalized_ == b.l2_normalized_ &&
           a.ids_ == b.ids_ && a.extra_ == b.extra_ &&
           a.data_.size() == b.data_.size() &&
           std::memcmp(a.data_.data(), b.data_.data(),
                       a.data_.size() * sizeof(float)) == 0;
  }

 private:
  std::string model_name_;
  std::size_t dim_ = 1;
  Pooling pooling_ = Pooling::mean;
  bool l2_normalized_ = false;
  std::vector<std::string> ids_;
  std::vector<float> data_;
  std::unordered_map<std::string, std::size_t> pos_;
  nlohmann::ordered_json extra_ = nlohmann::ordered_json::object();
};

// Exact top-k by cosine; ties by id ascending.
inline std::vector<Neighbor> knn(const EmbeddingStore& store,
                                 std::span<const float> query, std::size_t k) {
  if (store.empty()) throw DataError("empty store");
  if (query.size() != store.dim()) throw DataError("dimension mismatch");
  if (k == 0) throw ConfigError("k must be >= 1");
  std::vector<Neighbor> all;
  all.reserve(store.size());
  for (std::size_t i = 0; i < store.size(); ++i) {
    all.push_back({store.ids()[i], cosine(query, store.row(i))});
  }
  const auto better = [](const Neighbor& a, const Neighbor& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  };
  const std::size_t n = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n),
                    all.end(), better);
  all.resize(n);
  return all;
}

inline constexpr std::string_view kStoreMagic = "EMBSTOR1";

inline void write_store(const EmbeddingStore& store, std::ostream& out) {
  nlohmann::ordered_json h;
  h["version"] = 1;
  h["model"] = store.model_name();
  h["dim"] = store.dim();
  h["count"] = store.size();
  h["pooling"] = to_string(store.pooling());
  h["l2_normalized"] = store.l2_normalized();
  for (const auto& [k, v] : store.extra_header().items()) h[k] = v;
  binio::write_preamble(out, kStoreMagic, h);
  for (std::size_t i = 0; i < store.size(); ++i) {
    const auto& id = store.ids()[i];
    if (id.size() > 0xFFFF) throw DataError("id longer than 65535 bytes");
    binio::write_le(out, static_cast<std::uint16_t>(id.size()));
    out.write(id.data(), static_cast<std::streamsize>(id.size()));
    for (float f : store.row(i)) binio::write_f32(out, f);
  }
  if (!out) throw DataError("write failed");
}

inline EmbeddingStore read_store(std::istream& in) {
  auto h = binio::read_preamble(in, kStoreMagic);
  EmbeddingStore store;
  std::size_t count = 0;
  try {
    if (h.at("version").get<int>() != 1) throw DataError("unsupported store version");
    store = EmbeddingStore(h.at("model").get<std::string>(), h.at("dim").get<std::size_t>(),
                           pooling_from_string(h.at("pooling").get<std::string>()),
                           h.at("l2_normalized").get<bool>());
    count = h.at("count").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad store header: ") + e.what());
  }
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
  for (const auto& [k, v] : h.items()) {
    if (k != "version" && k != "model" && k != "dim" && k != "count" &&
        k != "pooling" && k != "l2_normalized") {
      extra[k] = v;
    }
  }
  store.set_extra_header(std::move(extra));

  std::vector<float> row(store.dim());
  for (std::size_t r = 0; r < count; ++r) {
    const auto len = binio::read_le<std::uint16_t>(in, "truncated record");
    std::string id(len, '\0');
    binio::read_exact(in, id.data(), len, "truncated record");
    for (auto& f : row) f = binio::read_f32(in, "truncated record");
    store.append(std::move(id), row);
  }
  if (!binio::at_eof(in)) throw DataError("trailing data after last record");
  return store;
}

inline void write_store(const EmbeddingStore& store, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_store(store, out);
}

inline EmbeddingStore read_store(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return read_store(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace ontolearn
