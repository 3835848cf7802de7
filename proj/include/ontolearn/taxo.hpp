#pragma once

// Taxonomy discovery: a single multi-head cross-attention layer over frozen
// type embeddings scores every (child, parent) pair; trained with weighted
// BCE against the is-a incidence matrix.
//
//   S_h = (X Wq_h)(Y Wk_h)^T / sqrt(d_h)
//   L   = sum_h mix_h S_h + bias
//   P   = sigmoid(L)            (or a softmax over each row's valid entries)
//
// probs(i, j) is the likelihood that type i is a subclass of type j.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "ontolearn/binio.hpp"
#include "ontolearn/embedstore.hpp"
#include "ontolearn/error.hpp"
#include "ontolearn/eval.hpp"

namespace ontolearn::taxo {

// ---------------------------------------------------------------------------
// Graph

struct TaxonomyGraph {
  std::vector<std::string> types;
  std::set<std::pair<std::size_t, std::size_t>> edges;  // (child, parent)

  std::size_t size() const { return types.size(); }

  std::optional<std::size_t> index_of(const std::string& name) const {
    auto it = std::find(types.begin(), types.end(), name);
    if (it == types.end()) return std::nullopt;
    return static_cast<std::size_t>(it - types.begin());
  }

  void add_edge(std::size_t child, std::size_t parent) {
    if (child >= types.size() || parent >= types.size()) {
      throw DataError("edge index out of range");
    }
    if (child == parent) throw DataError("self-loop on \"" + types[child] + "\"");
    edges.emplace(child, parent);
  }

  std::vector<NamedEdge> named_edges() const {
    std::vector<NamedEdge> out;
    out.reserve(edges.size());
    for (auto [c, p] : edges) out.emplace_back(types[c], types[p]);
    return out;
  }

  // Edge density |E| / N^2.
  double density() const {
    if (types.empty()) return 0.0;
    const double n = static_cast<double>(types.size());
    return static_cast<double>(edges.size()) / (n * n);
  }
};

// JSON array of {"parent": ..., "child": ...}. When `types` is empty the type
// list is taken from the edges in order of first appearance. Self-loops are
// skipped.
inline TaxonomyGraph parse_taxonomy_json(const nlohmann::json& j,
                                         std::vector<std::string> types = {}) {
  if (!j.is_array()) throw DataError("taxonomy file must be a JSON array");
  TaxonomyGraph g;
  std::unordered_map<std::string, std::size_t> pos;
  const bool fixed = !types.empty();
  for (auto& t : types) {
    if (!pos.emplace(t, g.types.size()).second) throw DataError("duplicate type \"" + t + "\"");
    g.types.push_back(std::move(t));
  }
  auto lookup = [&](const std::string& name) -> std::size_t {
    auto it = pos.find(name);
    if (it != pos.end()) return it->second;
    if (fixed) throw DataError("edge references unknown type \"" + name + "\"");
    pos.emplace(name, g.types.size());
    g.types.push_back(name);
    return g.types.size() - 1;
  };
  for (const auto& rec : j) {
    if (!rec.is_object() || !rec.contains("parent") || !rec.contains("child") ||
        !rec["parent"].is_string() || !rec["child"].is_string()) {
      throw DataError("taxonomy record must have string \"parent\" and \"child\"");
    }
    const auto parent = lookup(rec["parent"].get<std::string>());
    const auto child = lookup(rec["child"].get<std::string>());
    if (parent != child) g.add_edge(child, parent);
  }
  return g;
}

inline TaxonomyGraph read_taxonomy(const std::filesystem::path& path,
                                   std::vector<std::string> types = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return parse_taxonomy_json(nlohmann::json::parse(in), std::move(types));
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

inline nlohmann::ordered_json taxonomy_to_json(const TaxonomyGraph& g) {
  auto arr = nlohmann::ordered_json::array();
  for (auto [c, p] : g.edges) arr.push_back({{"parent", g.types[p]}, {"child", g.types[c]}});
  return arr;
}

inline void write_taxonomy(const TaxonomyGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << taxonomy_to_json(g).dump(1) << '\n';
}

struct TypeSplit {
  TaxonomyGraph train;
  TaxonomyGraph validation;
  std::vector<std::size_t> train_types;  // indices into the source graph
  std::vector<std::size_t> validation_types;
  std::size_t dropped_edges = 0;  // edges crossing the partition
};

namespace detail {

inline TaxonomyGraph induced_subgraph(const TaxonomyGraph& g,
                                      const std::vector<std::size_t>& keep) {
  TaxonomyGraph sub;
  std::vector<std::size_t> remap(g.size(), std::numeric_limits<std::size_t>::max());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    remap[keep[i]] = i;
    sub.types.push_back(g.types[keep[i]]);
  }
  for (auto [c, p] : g.edges) {
    if (remap[c] != std::numeric_limits<std::size_t>::max() &&
        remap[p] != std::numeric_limits<std::size_t>::max()) {
      sub.edges.emplace(remap[c], remap[p]);
    }
  }
  return sub;
}

}  // namespace detail

// Splits by types, not edges: an edge survives only if both endpoints land in
// the same partition. Partition order follows the source order.
inline TypeSplit split_types(const TaxonomyGraph& g, double train_ratio = 0.8,
                             std::uint64_t seed = 0) {
  if (g.size() < 5) throw DataError("split needs at least 5 types");
  if (!(train_ratio > 0.0 && train_ratio < 1.0)) throw ConfigError("train_ratio must be in (0,1)");
  std::vector<std::size_t> order(g.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  auto n_train = static_cast<std::size_t>(std::lround(train_ratio * static_cast<double>(g.size())));
  n_train = std::clamp<std::size_t>(n_train, 1, g.size() - 1);

  TypeSplit s;
  s.train_types.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.validation_types.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  std::sort(s.train_types.begin(), s.train_types.end());
  std::sort(s.validation_types.begin(), s.validation_types.end());
  s.train = detail::induced_subgraph(g, s.train_types);
  s.validation = detail::induced_subgraph(g, s.validation_types);
  s.dropped_edges = g.edges.size() - s.train.edges.size() - s.validation.edges.size();
  return s;
}

// ---------------------------------------------------------------------------
// Model

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class OutputMode { sigmoid, row_softmax };

inline std::string to_string(OutputMode m) {
  return m == OutputMode::sigmoid ? "sigmoid" : "row_softmax";
}

inline OutputMode output_mode_from_string(const std::string& s) {
  if (s == "sigmoid") return OutputMode::sigmoid;
  if (s == "row_softmax") return OutputMode::row_softmax;
  throw ConfigError("unknown output mode \"" + s + "\"");
}

template <typename Scalar>
struct BasicAttentionHead {
  std::size_t num_heads = 1;
  Matrix<Scalar> w_query;  // d x d_proj; head h uses columns [h*d_h, (h+1)*d_h)
  Matrix<Scalar> w_key;    // d x d_proj
  Vector<Scalar> head_mix; // H weights on the simplex
  Scalar bias = 0;
  OutputMode output = OutputMode::sigmoid;
  bool trainable_mix = false;

  std::size_t model_dim() const { return static_cast<std::size_t>(w_query.rows()); }
  std::size_t proj_dim() const { return static_cast<std::size_t>(w_query.cols()); }
  std::size_t head_dim() const { return proj_dim() / num_heads; }

  // Throws DataError naming the first violated invariant.
  void validate() const {
    if (num_heads == 0) throw DataError("num_heads must be >= 1");
    if (w_query.rows() != w_key.rows() || w_query.cols() != w_key.cols()) {
      throw DataError("w_query and w_key shapes differ");
    }
    if (proj_dim() == 0 || proj_dim() % num_heads != 0) {
      throw DataError("projection width " + std::to_string(proj_dim()) +
                      " not divisible by " + std::to_string(num_heads) + " heads");
    }
    if (static_cast<std::size_t>(head_mix.size()) != num_heads) {
      throw DataError("head_mix has wrong length");
    }
    if (!w_query.allFinite()) throw DataError("non-finite parameter w_query");
    if (!w_key.allFinite()) throw DataError("non-finite parameter w_key");
    if (!head_mix.allFinite()) throw DataError("non-finite parameter head_mix");
    if (!std::isfinite(static_cast<double>(bias))) throw DataError("non-finite parameter bias");
    if ((head_mix.array() < Scalar(0)).any() ||
        std::abs(static_cast<double>(head_mix.sum()) - 1.0) > 1e-5) {
      throw DataError("head_mix is not on the simplex");
    }
  }

  template <typename Other>
  BasicAttentionHead<Other> cast() const {
    BasicAttentionHead<Other> h;
    h.num_heads = num_heads;
    h.w_query = w_query.template cast<Other>();
    h.w_key = w_key.template cast<Other>();
    h.head_mix = head_mix.template cast<Other>();
    h.bias = static_cast<Other>(bias);
    h.output = output;
    h.trainable_mix = trainable_mix;
    return h;
  }
};

using AttentionHead = BasicAttentionHead<double>;

// Projection width defaults to min(d, 512) rounded down to a multiple of
// num_heads; entries ~ U(-1/sqrt(d), 1/sqrt(d)); bias 0; uniform head_mix.
inline AttentionHead init_head(std::size_t model_dim, std::size_t num_heads,
                               std::uint64_t seed, std::size_t proj_dim = 0,
                               OutputMode output = OutputMode::sigmoid) {
  if (model_dim == 0) throw ConfigError("model_dim must be >= 1");
  if (num_heads == 0) throw ConfigError("num_heads must be >= 1");
  if (proj_dim == 0) {
    proj_dim = std::min<std::size_t>(model_dim, 512) / num_heads * num_heads;
    if (proj_dim == 0) proj_dim = num_heads;
  }
  if (proj_dim % num_heads != 0) {
    throw ConfigError("proj_dim must be divisible by num_heads");
  }
  AttentionHead h;
  h.num_heads = num_heads;
  h.output = output;
  const double a = 1.0 / std::sqrt(static_cast<double>(model_dim));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-a, a);
  const auto rows = static_cast<Eigen::Index>(model_dim);
  const auto cols = static_cast<Eigen::Index>(proj_dim);
  h.w_query.resize(rows, cols);
  h.w_key.resize(rows, cols);
  for (Eigen::Index i = 0; i < h.w_query.size(); ++i) h.w_query.data()[i] = u(rng);
  for (Eigen::Index i = 0; i < h.w_key.size(); ++i) h.w_key.data()[i] = u(rng);
  h.head_mix = Vector<double>::Constant(static_cast<Eigen::Index>(num_heads),
                                        1.0 / static_cast<double>(num_heads));
  return h;
}

// Valid (child_rows[i], j) pairs exclude j == child_rows[i]; children and
// parents index the same type list.
inline Mask self_pair_mask(std::span<const std::size_t> child_rows, std::size_t n_parents) {
  Mask m = Mask::Constant(static_cast<Eigen::Index>(child_rows.size()),
                          static_cast<Eigen::Index>(n_parents), true);
  for (std::size_t i = 0; i < child_rows.size(); ++i) {
    if (child_rows[i] < n_parents) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(child_rows[i])) = false;
    }
  }
  return m;
}

inline Mask diagonal_mask(std::size_t n) {
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0);
  return self_pair_mask(rows, n);
}

template <typename Scalar>
struct ScoreMatrix {
  Matrix<Scalar> logits;
  Matrix<Scalar> probs;
  Mask mask;  // true = valid pair
  std::vector<Matrix<Scalar>> head_scores;  // S_h, kept for backprop
  Matrix<Scalar> queries, keys;             // X Wq, Y Wk

  std::size_t valid_count() const { return static_cast<std::size_t>(mask.count()); }
};

namespace detail {

template <typename Scalar>
Scalar sigmoid(Scalar x) {
  if (x >= 0) {
    const Scalar e = std::exp(-x);
    return Scalar(1) / (Scalar(1) + e);
  }
  const Scalar e = std::exp(x);
  return e / (Scalar(1) + e);
}

}  // namespace detail

template <typename Scalar>
ScoreMatrix<Scalar> forward(const BasicAttentionHead<Scalar>& head,
                            const Matrix<Scalar>& children, const Matrix<Scalar>& parents,
                            const Mask& mask) {
  head.validate();
  if (children.cols() != head.w_query.rows() || parents.cols() != head.w_key.rows()) {
    throw DataError("embedding dimension does not match the head");
  }
  if (mask.rows() != children.rows() || mask.cols() != parents.rows()) {
    throw DataError("mask shape does not match the score matrix");
  }
  ScoreMatrix<Scalar> s;
  s.mask = mask;
  s.queries = children * head.w_query;
  s.keys = parents * head.w_key;
  const auto dh = static_cast<Eigen::Index>(head.head_dim());
  const Scalar scale = Scalar(1) / std::sqrt(static_cast<Scalar>(dh));
  s.logits = Matrix<Scalar>::Constant(children.rows(), parents.rows(), head.bias);
  s.head_scores.reserve(head.num_heads);
  for (std::size_t h = 0; h < head.num_heads; ++h) {
    const auto c0 = static_cast<Eigen::Index>(h) * dh;
    Matrix<Scalar> sh =
        (s.queries.middleCols(c0, dh) * s.keys.middleCols(c0, dh).transpose()) * scale;
    s.logits.noalias() += head.head_mix(static_cast<Eigen::Index>(h)) * sh;
    s.head_scores.push_back(std::move(sh));
  }

  s.probs = Matrix<Scalar>::Zero(s.logits.rows(), s.logits.cols());
  if (head.output == OutputMode::sigmoid) {
    for (Eigen::Index i = 0; i < s.logits.rows(); ++i) {
      for (Eigen::Index j = 0; j < s.logits.cols(); ++j) {
        if (mask(i, j)) s.probs(i, j) = detail::sigmoid(s.logits(i, j));
      }
    }
  } else {
    for (Eigen::Index i = 0; i < s.logits.rows(); ++i) {
      Scalar top = -std::numeric_limits<Scalar>::infinity();
      for (Eigen::Index j = 0; j < s.logits.cols(); ++j) {
        if (mask(i, j)) top = std::max(top, s.logits(i, j));
      }
      if (!std::isfinite(static_cast<double>(top))) continue;  // row fully masked
      Scalar z = 0;
      for (Eigen::Index j = 0; j < s.logits.cols(); ++j) {
        if (mask(i, j)) z += (s.probs(i, j) = std::exp(s.logits(i, j) - top));
      }
      for (Eigen::Index j = 0; j < s.logits.cols(); ++j) s.probs(i, j) /= z;
    }
  }
  return s;
}

// Self-scoring of one type list: children = parents = `embeddings`,
// diagonal masked.
template <typename Scalar>
ScoreMatrix<Scalar> forward(const BasicAttentionHead<Scalar>& head,
                            const Matrix<Scalar>& embeddings) {
  return forward(head, embeddings, embeddings,
                 diagonal_mask(static_cast<std::size_t>(embeddings.rows())));
}

inline constexpr double kProbClamp = 1e-7;

// Labels matrix (0/1) aligned with the score matrix.
template <typename Scalar>
Matrix<Scalar> labels_for(const TaxonomyGraph& g, std::span<const std::size_t> child_rows) {
  Matrix<Scalar> y = Matrix<Scalar>::Zero(static_cast<Eigen::Index>(child_rows.size()),
                                          static_cast<Eigen::Index>(g.size()));
  std::vector<Eigen::Index> row_of(g.size(), -1);
  for (std::size_t i = 0; i < child_rows.size(); ++i) {
    row_of[child_rows[i]] = static_cast<Eigen::Index>(i);
  }
  for (auto [c, p] : g.edges) {
    if (row_of[c] >= 0) y(row_of[c], static_cast<Eigen::Index>(p)) = Scalar(1);
  }
  return y;
}

template <typename Scalar>
Matrix<Scalar> labels_for(const TaxonomyGraph& g) {
  std::vector<std::size_t> rows(g.size());
  std::iota(rows.begin(), rows.end(), 0);
  return labels_for<Scalar>(g, rows);
}

// Mean over valid pairs of  w*y*(-ln p) + (1-y)*(-ln(1-p)),  p clamped to
// [1e-7, 1-1e-7].
template <typename Scalar>
double bce_loss(const ScoreMatrix<Scalar>& s, const Matrix<Scalar>& labels, double pos_weight) {
  if (labels.rows() != s.probs.rows() || labels.cols() != s.probs.cols()) {
    throw DataError("labels shape does not match the score matrix");
  }
  double total = 0.0;
  std::size_t n = 0;
  for (Eigen::Index i = 0; i < s.probs.rows(); ++i) {
    for (Eigen::Index j = 0; j < s.probs.cols(); ++j) {
      if (!s.mask(i, j)) continue;
      const double p = std::clamp(static_cast<double>(s.probs(i, j)), kProbClamp, 1.0 - kProbClamp);
      const double y = static_cast<double>(labels(i, j));
      total += pos_weight * y * -std::log(p) + (1.0 - y) * -std::log(1.0 - p);
      ++n;
    }
  }
  return n ? total / static_cast<double>(n) : 0.0;
}

template <typename Scalar>
double bce_loss(const ScoreMatrix<Scalar>& s, const TaxonomyGraph& gold, double pos_weight) {
  if (static_cast<std::size_t>(s.probs.rows()) != gold.size() ||
      static_cast<std::size_t>(s.probs.cols()) != gold.size()) {
    throw DataError("score matrix does not cover the gold type list");
  }
  return bce_loss(s, labels_for<Scalar>(gold), pos_weight);
}

template <typename Scalar>
struct HeadGradients {
  Matrix<Scalar> w_query;
  Matrix<Scalar> w_key;
  Vector<Scalar> head_mix;  // d loss / d mix_h, treating mix as free
  Scalar bias = 0;
  double loss = 0.0;
};

// Exact gradients of bce_loss. Pairs whose probability sits in the clamp
// region contribute nothing (the clamp is flat there).
template <typename Scalar>
HeadGradients<Scalar> gradients(const BasicAttentionHead<Scalar>& head,
                                const Matrix<Scalar>& children, const Matrix<Scalar>& parents,
                                const Mask& mask, const Matrix<Scalar>& labels,
                                double pos_weight) {
  const auto s = forward(head, children, parents, mask);
  HeadGradients<Scalar> g;
  g.loss = bce_loss(s, labels, pos_weight);
  const double n_valid = static_cast<double>(s.valid_count());

  // dLoss/dLogit
  Matrix<Scalar> dlogit = Matrix<Scalar>::Zero(s.logits.rows(), s.logits.cols());
  if (n_valid > 0) {
    const double inv = 1.0 / n_valid;
    if (head.output == OutputMode::sigmoid) {
      for (Eigen::Index i = 0; i < dlogit.rows(); ++i) {
        for (Eigen::Index j = 0; j < dlogit.cols(); ++j) {
          if (!mask(i, j)) continue;
          const double p = static_cast<double>(s.probs(i, j));
          if (p < kProbClamp || p > 1.0 - kProbClamp) continue;
          const double y = static_cast<double>(labels(i, j));
          dlogit(i, j) = static_cast<Scalar>(inv * (-pos_weight * y * (1.0 - p) + (1.0 - y) * p));
        }
      }
    } else {
      for (Eigen::Index i = 0; i < dlogit.rows(); ++i) {
        // dLoss/dp, then back through the row softmax.
        std::vector<double> dp(static_cast<std::size_t>(dlogit.cols()), 0.0);
        double weighted = 0.0;
        for (Eigen::Index j = 0; j < dlogit.cols(); ++j) {
          if (!mask(i, j)) continue;
          const double p = static_cast<double>(s.probs(i, j));
          if (p < kProbClamp || p > 1.0 - kProbClamp) continue;
          const double y = static_cast<double>(labels(i, j));
          dp[static_cast<std::size_t>(j)] = inv * (-pos_weight * y / p + (1.0 - y) / (1.0 - p));
          weighted += dp[static_cast<std::size_t>(j)] * p;
        }
        for (Eigen::Index j = 0; j < dlogit.cols(); ++j) {
          if (!mask(i, j)) continue;
          const double p = static_cast<double>(s.probs(i, j));
          dlogit(i, j) = static_cast<Scalar>(p * (dp[static_cast<std::size_t>(j)] - weighted));
        }
      }
    }
  }

  const auto dh = static_cast<Eigen::Index>(head.head_dim());
  const Scalar scale = Scalar(1) / std::sqrt(static_cast<Scalar>(dh));
  Matrix<Scalar> dq = Matrix<Scalar>::Zero(s.queries.rows(), s.queries.cols());
  Matrix<Scalar> dk = Matrix<Scalar>::Zero(s.keys.rows(), s.keys.cols());
  g.head_mix.resize(static_cast<Eigen::Index>(head.num_heads));
  for (std::size_t h = 0; h < head.num_heads; ++h) {
    const auto hi = static_cast<Eigen::Index>(h);
    const auto c0 = hi * dh;
    g.head_mix(hi) = (dlogit.array() * s.head_scores[h].array()).sum();
    const Scalar f = head.head_mix(hi) * scale;
    dq.middleCols(c0, dh).noalias() = f * (dlogit * s.keys.middleCols(c0, dh));
    dk.middleCols(c0, dh).noalias() = f * (dlogit.transpose() * s.queries.middleCols(c0, dh));
  }
  g.w_query.noalias() = children.transpose() * dq;
  g.w_key.noalias() = parents.transpose() * dk;
  g.bias = dlogit.sum();

  if (!g.w_query.allFinite()) throw DataError("non-finite gradient for w_query");
  if (!g.w_key.allFinite()) throw DataError("non-finite gradient for w_key");
  if (!g.head_mix.allFinite()) throw DataError("non-finite gradient for head_mix");
  if (!std::isfinite(static_cast<double>(g.bias))) throw DataError("non-finite gradient for bias");
  return g;
}

// ---------------------------------------------------------------------------
// Training

// Linear warm-up over the first ceil(warmup_fraction * total) steps, then
// cosine decay to 0.
inline double lr_schedule(std::size_t step, std::size_t total_steps, double lr_max,
                          double warmup_fraction = 0.1) {
  if (total_steps == 0) throw ConfigError("total_steps must be >= 1");
  if (step >= total_steps) throw ConfigError("step out of range");
  // The epsilon keeps 0.1 * 100 from rounding up to 11.
  auto warmup = static_cast<std::size_t>(
      std::ceil(warmup_fraction * static_cast<double>(total_steps) - 1e-9));
  warmup = std::min(warmup, total_steps);
  if (step < warmup) {
    return lr_max * static_cast<double>(step + 1) / static_cast<double>(warmup);
  }
  const double span = static_cast<double>(total_steps - warmup);
  const double t = static_cast<double>(step - warmup) / span;
  return lr_max * 0.5 * (1.0 + std::cos(M_PI * t));
}

enum class Optimizer { sgd, adam };

struct TrainConfig {
  double learning_rate = 1e-5;
  std::size_t batch_size = 16;
  std::size_t num_heads = 8;
  std::size_t epochs = 7;
  double warmup_fraction = 0.1;
  // nullopt = (#valid negatives / #positives) on the training partition.
  std::optional<double> pos_weight;
  std::uint64_t seed = 0;
  std::size_t proj_dim = 0;  // 0 = min(d, 512)
  Optimizer optimizer = Optimizer::sgd;
  OutputMode output = OutputMode::sigmoid;
  bool trainable_mix = false;

  void validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
      throw ConfigError("learning_rate must be > 0");
    }
    if (epochs < 1) throw ConfigError("epochs must be ≥ 1");
    if (batch_size < 1) throw ConfigError("batch_size must be ≥ 1");
    if (num_heads < 1) throw ConfigError("num_heads must be ≥ 1");
    if (!(warmup_fraction >= 0.0 && warmup_fraction <= 1.0)) {
      throw ConfigError("warmup_fraction must be in [0,1]");
    }
    if (pos_weight && !(*pos_weight >= 0.0)) throw ConfigError("pos_weight must be ≥ 0");
  }
};

inline nlohmann::ordered_json to_json(const TrainConfig& c) {
  nlohmann::ordered_json j;
  j["learning_rate"] = c.learning_rate;
  j["batch_size"] = c.batch_size;
  j["num_heads"] = c.num_heads;
  j["epochs"] = c.epochs;
  j["warmup_fraction"] = c.warmup_fraction;
  j["pos_weight"] = c.pos_weight ? nlohmann::ordered_json(*c.pos_weight)
                                 : nlohmann::ordered_json("auto");
  j["seed"] = c.seed;
  j["proj_dim"] = c.proj_dim;
  j["optimizer"] = c.optimizer == Optimizer::sgd ? "sgd" : "adam";
  j["output"] = to_string(c.output);
  j["trainable_mix"] = c.trainable_mix;
  return j;
}

// Missing keys keep their defaults. Numeric fields must not be negative.
template <typename Json>
TrainConfig train_config_from_json(const Json& j, TrainConfig c = {}) {
  if (!j.is_object()) throw ConfigError("train config must be a JSON object");
  auto count = [&](const char* key, std::size_t& dst) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_number_integer() || v.template get<long long>() < 0) {
      throw ConfigError(std::string(key) + " must be a non-negative integer");
    }
    dst = v.template get<std::size_t>();
  };
  auto number = [&](const char* key, double& dst) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number()) throw ConfigError(std::string(key) + " must be a number");
    dst = j.at(key).template get<double>();
  };
  number("learning_rate", c.learning_rate);
  count("batch_size", c.batch_size);
  count("num_heads", c.num_heads);
  count("epochs", c.epochs);
  number("warmup_fraction", c.warmup_fraction);
  if (j.contains("pos_weight")) {
    const auto& v = j.at("pos_weight");
    if (v.is_string() && v.template get<std::string>() == "auto") {
      c.pos_weight.reset();
    } else if (v.is_number()) {
      c.pos_weight = v.template get<double>();
    } else {
      throw ConfigError("pos_weight must be a number or \"auto\"");
    }
  }
  if (j.contains("seed")) {
    std::size_t s = 0;
    count("seed", s);
    c.seed = s;
  }
  count("proj_dim", c.proj_dim);
  if (j.contains("optimizer")) {
    const auto o = j.at("optimizer").template get<std::string>();
    if (o == "sgd") c.optimizer = Optimizer::sgd;
    else if (o == "adam") c.optimizer = Optimizer::adam;
    else throw ConfigError("unknown optimizer \"" + o + "\"");
  }
  if (j.contains("output")) c.output = output_mode_from_string(j.at("output").template get<std::string>());
  if (j.contains("trainable_mix")) c.trainable_mix = j.at("trainable_mix").template get<bool>();
  return c;
}

// Rows of `store` for each type, as a double matrix.
inline Matrix<double> gather_embeddings(const EmbeddingStore& store,
                                        const std::vector<std::string>& types) {
  Matrix<double> m(static_cast<Eigen::Index>(types.size()), static_cast<Eigen::Index>(store.dim()));
  for (std::size_t i = 0; i < types.size(); ++i) {
    const auto idx = store.index_of(types[i]);
    if (!idx) throw DataError("missing embedding for type \"" + types[i] + "\"");
    const auto row = store.row(*idx);
    for (std::size_t c = 0; c < row.size(); ++c) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = row[c];
    }
  }
  return m;
}

inline double auto_pos_weight(const TaxonomyGraph& g) {
  const double valid = static_cast<double>(g.size()) * static_cast<double>(g.size() - (g.size() ? 1 : 0));
  const double pos = static_cast<double>(g.edges.size());
  return pos > 0.0 ? (valid - pos) / pos : 1.0;
}

// Scores and labels over the valid (off-diagonal) pairs of a self-scored graph.
inline std::pair<std::vector<double>, std::vector<int>> valid_pairs(
    const ScoreMatrix<double>& s, const Matrix<double>& labels) {
  std::pair<std::vector<double>, std::vector<int>> out;
  for (Eigen::Index i = 0; i < s.probs.rows(); ++i) {
    for (Eigen::Index j = 0; j < s.probs.cols(); ++j) {
      if (!s.mask(i, j)) continue;
      out.first.push_back(s.probs(i, j));
      out.second.push_back(labels(i, j) > 0.5 ? 1 : 0);
    }
  }
  return out;
}

// NaN when the graph has only one class among its valid pairs.
inline double graph_auc(const AttentionHead& head, const Matrix<double>& embeddings,
                        const TaxonomyGraph& g) {
  const auto s = forward(head, embeddings);
  const auto [scores, labels] = valid_pairs(s, labels_for<double>(g));
  const auto pos = std::count(labels.begin(), labels.end(), 1);
  if (pos == 0 || pos == static_cast<long>(labels.size())) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return roc_auc(scores, labels);
}

struct EpochStats {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;  // mean over the epoch's minibatches
  double val_auc = std::numeric_limits<double>::quiet_NaN();
};

struct TrainResult {
  AttentionHead final_head;
  AttentionHead best_head;  // best validation AUC, or the final head
  std::size_t best_epoch = 0;
  double best_val_auc = std::numeric_limits<double>::quiet_NaN();
  double pos_weight = 1.0;
  std::vector<EpochStats> history;
};

namespace detail {

struct AdamState {
  Matrix<double> mq, vq, mk, vk;
  Vector<double> mm, vm;
  double mb = 0, vb = 0;
  std::size_t t = 0;
};

inline void renormalize_mix(AttentionHead& head, const Vector<double>& grad, double lr) {
  // Gradient step on log-weights followed by a softmax keeps the mix on the
  // simplex; zero weights stay zero.
  Vector<double> logits(head.head_mix.size());
  const double g_bar = head.head_mix.dot(grad);
  for (Eigen::Index h = 0; h < logits.size(); ++h) {
    const double w = head.head_mix(h);
    logits(h) = w > 0 ? std::log(w) - lr * w * (grad(h) - g_bar)
                      : -std::numeric_limits<double>::infinity();
  }
  const double top = logits.maxCoeff();
  double z = 0;
  for (Eigen::Index h = 0; h < logits.size(); ++h) z += (logits(h) = std::exp(logits(h) - top));
  head.head_mix = logits / z;
}

}  // namespace detail

// Minibatches are shuffled blocks of `batch_size` child rows, each scored
// against every parent of the training partition. The result is a pure
// function of (inputs, config).
inline TrainResult train(const TaxonomyGraph& train_graph, const TaxonomyGraph* validation,
                         const EmbeddingStore& embeddings, const TrainConfig& config) {
  config.validate();
  if (train_graph.size() < 2) throw DataError("training graph needs at least 2 types");
  const Matrix<double> x_train = gather_embeddings(embeddings, train_graph.types);
  Matrix<double> x_val;
  if (validation) x_val = gather_embeddings(embeddings, validation->types);

  TrainResult r;
  r.pos_weight = config.pos_weight.value_or(auto_pos_weight(train_graph));
  AttentionHead head =
      init_head(embeddings.dim(), config.num_heads, config.seed, config.proj_dim, config.output);
  head.trainable_mix = config.trainable_mix;

  const std::size_t n = train_graph.size();
  const std::size_t batches_per_epoch = (n + config.batch_size - 1) / config.batch_size;
  const std::size_t total_steps = batches_per_epoch * config.epochs;
  std::mt19937_64 rng(config.seed ^ 0x9E3779B97F4A7C15ULL);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const Matrix<double> all_labels = labels_for<double>(train_graph);

  detail::AdamState adam;
  if (config.optimizer == Optimizer::adam) {
    adam.mq = adam.vq = Matrix<double>::Zero(head.w_query.rows(), head.w_query.cols());
    adam.mk = adam.vk = Matrix<double>::Zero(head.w_key.rows(), head.w_key.cols());
    adam.mm = adam.vm = Vector<double>::Zero(head.head_mix.size());
  }

  r.best_head = head;
  std::size_t step = 0;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    for (std::size_t b = 0; b < batches_per_epoch; ++b, ++step) {
      const std::size_t lo = b * config.batch_size;
      const std::size_t hi = std::min(n, lo + config.batch_size);
      std::span<const std::size_t> rows(order.data() + lo, hi - lo);
      Matrix<double> xb(static_cast<Eigen::Index>(rows.size()), x_train.cols());
      Matrix<double> yb(static_cast<Eigen::Index>(rows.size()), all_labels.cols());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        xb.row(static_cast<Eigen::Index>(i)) = x_train.row(static_cast<Eigen::Index>(rows[i]));
        yb.row(static_cast<Eigen::Index>(i)) = all_labels.row(static_cast<Eigen::Index>(rows[i]));
      }
      const auto g = gradients(head, xb, x_train, self_pair_mask(rows, n), yb, r.pos_weight);
      loss_sum += g.loss;
      const double lr = lr_schedule(step, total_steps, config.learning_rate, config.warmup_fraction);

      if (config.optimizer == Optimizer::sgd) {
        head.w_query -= lr * g.w_query;
        head.w_key -= lr * g.w_key;
        head.bias -= lr * g.bias;
        if (head.trainable_mix) detail::renormalize_mix(head, g.head_mix, lr);
      } else {
        constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
        ++adam.t;
        const double c1 = 1.0 - std::pow(b1, static_cast<double>(adam.t));
        const double c2 = 1.0 - std::pow(b2, static_cast<double>(adam.t));
        auto update = [&](auto& param, auto& m, auto& v, const auto& grad) {
          m = b1 * m + (1 - b1) * grad;
          v = b2 * v + (1 - b2) * grad.cwiseProduct(grad);
          param.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
        };
        update(head.w_query, adam.mq, adam.vq, g.w_query);
        update(head.w_key, adam.mk, adam.vk, g.w_key);
        adam.mb = b1 * adam.mb + (1 - b1) * g.bias;
        adam.vb = b2 * adam.vb + (1 - b2) * g.bias * g.bias;
        head.bias -= lr * (adam.mb / c1) / (std::sqrt(adam.vb / c2) + eps);
        if (head.trainable_mix) {
          adam.mm = b1 * adam.mm + (1 - b1) * g.head_mix;
          adam.vm = b2 * adam.vm + (1 - b2) * g.head_mix.cwiseProduct(g.head_mix);
          Vector<double> step_dir =
              (adam.mm.array() / c1) / ((adam.vm.array() / c2).sqrt() + eps);
          detail::renormalize_mix(head, step_dir, lr);
        }
      }
    }

    EpochStats st;
    st.epoch = epoch;
    st.train_loss = loss_sum / static_cast<double>(batches_per_epoch);
    if (validation && validation->size() >= 2) {
      st.val_auc = graph_auc(head, x_val, *validation);
      if (!std::isnan(st.val_auc) && (std::isnan(r.best_val_auc) || st.val_auc > r.best_val_auc)) {
        r.best_val_auc = st.val_auc;
        r.best_epoch = epoch;
        r.best_head = head;
      }
    }
    r.history.push_back(st);
  }
  r.final_head = head;
  if (r.best_epoch == 0) {
    r.best_head = head;
    r.best_epoch = config.epochs;
  }
  return r;
}

inline TrainResult train(const TaxonomyGraph& train_graph, const EmbeddingStore& embeddings,
                         const TrainConfig& config) {
  return train(train_graph, nullptr, embeddings, config);
}

// Cartesian product in (lr, batch, heads, epochs) order, other fields from `base`.
inline std::vector<TrainConfig> make_grid(const std::vector<double>& learning_rates,
                                          const std::vector<std::size_t>& batch_sizes,
                                          const std::vector<std::size_t>& num_heads,
                                          const std::vector<std::size_t>& epochs,
                                          const TrainConfig& base = {}) {
  std::vector<TrainConfig> out;
  for (double lr : learning_rates)
    for (std::size_t b : batch_sizes)
      for (std::size_t h : num_heads)
        for (std::size_t e : epochs) {
          TrainConfig c = base;
          c.learning_rate = lr;
          c.batch_size = b;
          c.num_heads = h;
          c.epochs = e;
          out.push_back(c);
        }
  return out;
}

struct GridEntry {
  TrainConfig config;
  double val_auc = std::numeric_limits<double>::quiet_NaN();
  std::size_t best_epoch = 0;
};

struct GridResult {
  std::vector<GridEntry> leaderboard;  // config order
  std::size_t best_index = 0;
  TrainResult best;
  TypeSplit split;
};

// Trains every config on one split; best = highest validation AUC, first
// config wins ties, NaN ranks last.
inline GridResult grid_search(const TaxonomyGraph& graph, const EmbeddingStore& embeddings,
                              const std::vector<TrainConfig>& configs, double train_ratio = 0.8,
                              std::uint64_t split_seed = 0) {
  if (configs.empty()) throw ConfigError("grid needs at least one config");
  for (const auto& c : configs) c.validate();
  GridResult out;
  out.split = split_types(graph, train_ratio, split_seed);
  double best_auc = -std::numeric_limits<double>::infinity();
  bool have_best = false;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    auto r = train(out.split.train, &out.split.validation, embeddings, configs[i]);
    out.leaderboard.push_back({configs[i], r.best_val_auc, r.best_epoch});
    const double key = std::isnan(r.best_val_auc) ? -std::numeric_limits<double>::infinity()
                                                  : r.best_val_auc;
    if (!have_best || key > best_auc) {
      have_best = true;
      best_auc = key;
      out.best_index = i;
      out.best = std::move(r);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Thresholds and prediction

// Candidates are the distinct validation probabilities; a candidate t
// predicts p >= t. Returns the F1-maximizing candidate, smallest on ties,
// or the largest candidate when no threshold reaches F1 > 0.
inline double select_val_f1_threshold(std::span<const double> probs, std::span<const int> labels) {
  if (probs.empty()) throw DataError("empty validation set");
  if (probs.size() != labels.size()) throw DataError("probs and labels differ in length");
  std::vector<std::size_t> order(probs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return probs[a] > probs[b]; });
  const std::size_t total_pos =
      static_cast<std::size_t>(std::count_if(labels.begin(), labels.end(), [](int l) { return l != 0; }));

  // Walk candidates from high to low; at each distinct value everything at
  // or above it is predicted positive.
  double best_f1 = -1.0, best_t = probs[order.front()];
  std::size_t tp = 0, predicted = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double t = probs[order[i]];
    while (i < order.size() && probs[order[i]] == t) {
      tp += labels[order[i]] != 0;
      ++predicted;
      ++i;
    }
    const double prec = static_cast<double>(tp) / static_cast<double>(predicted);
    const double rec = total_pos ? static_cast<double>(tp) / static_cast<double>(total_pos) : 0.0;
    const double f1 = f1_score(prec, rec);
    if (f1 >= best_f1) {  // >= moves toward smaller thresholds on ties
      best_f1 = f1;
      best_t = t;
    }
  }
  if (best_f1 <= 0.0) return probs[order.front()];
  return best_t;
}

inline double select_val_f1_threshold(const std::vector<double>& probs,
                                      const std::vector<int>& labels) {
  return select_val_f1_threshold(std::span<const double>(probs), std::span<const int>(labels));
}

// round(density * n_pairs), clamped to [0, n_pairs].
inline std::size_t sparsity_edge_count(double train_density, std::size_t n_pairs) {
  if (n_pairs == 0) throw DataError("no test pairs");
  if (!(train_density >= 0.0 && train_density <= 1.0)) {
    throw ConfigError("train_density must be in [0,1]");
  }
  const auto k = static_cast<long long>(std::llround(train_density * static_cast<double>(n_pairs)));
  return static_cast<std::size_t>(std::clamp<long long>(k, 0, static_cast<long long>(n_pairs)));
}

// Threshold t such that exactly k scores satisfy score > t when the scores
// have no tie at the cut: the (k+1)-th largest score, or just below the
// minimum when k covers every score.
inline double sparsity_matched_threshold(std::span<const double> scores, std::size_t k) {
  if (scores.empty()) throw DataError("no test scores");
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  if (k >= sorted.size()) {
    return std::nextafter(sorted.back(), -std::numeric_limits<double>::infinity());
  }
  return sorted[k];
}

struct Threshold {
  double value;  // edges are pairs with prob > value
};
struct TopK {
  std::size_t k;  // the k highest valid pairs, (child, parent) index order on ties
};
using Cutoff = std::variant<Threshold, TopK>;

inline TaxonomyGraph edges_from_scores(const ScoreMatrix<double>& s,
                                       const std::vector<std::string>& types, const Cutoff& cut) {
  TaxonomyGraph g;
  g.types = types;
  if (const auto* t = std::get_if<Threshold>(&cut)) {
    for (Eigen::Index i = 0; i < s.probs.rows(); ++i)
      for (Eigen::Index j = 0; j < s.probs.cols(); ++j)
        if (s.mask(i, j) && s.probs(i, j) > t->value) {
          g.edges.emplace(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        }
    return g;
  }
  struct Cand {
    double p;
    std::size_t i, j;
  };
  std::vector<Cand> cands;
  for (Eigen::Index i = 0; i < s.probs.rows(); ++i)
    for (Eigen::Index j = 0; j < s.probs.cols(); ++j)
      if (s.mask(i, j)) {
        cands.push_back({s.probs(i, j), static_cast<std::size_t>(i), static_cast<std::size_t>(j)});
      }
  const std::size_t k = std::min(std::get<TopK>(cut).k, cands.size());
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.p > b.p; });
  for (std::size_t n = 0; n < k; ++n) g.edges.emplace(cands[n].i, cands[n].j);
  return g;
}

inline ScoreMatrix<double> score_types(const AttentionHead& head, const EmbeddingStore& embeddings,
                                       const std::vector<std::string>& types) {
  return forward(head, gather_embeddings(embeddings, types));
}

inline TaxonomyGraph predict_taxonomy(const AttentionHead& head, const EmbeddingStore& embeddings,
                                      const std::vector<std::string>& types, const Cutoff& cut) {
  return edges_from_scores(score_types(head, embeddings, types), types, cut);
}

// Sparsity matching: k = round(train_density * N^2), top-k valid pairs.
inline TaxonomyGraph predict_sparsity_matched(const AttentionHead& head,
                                              const EmbeddingStore& embeddings,
                                              const std::vector<std::string>& types,
                                              double train_density) {
  const std::size_t n = types.size();
  return predict_taxonomy(head, embeddings, types, TopK{sparsity_edge_count(train_density, n * n)});
}

// ---------------------------------------------------------------------------
// Checkpoints: "XATNHD01", u32 header length, JSON header, then f32 LE blocks
// w_query (d x d_proj, row-major), w_key, head_mix (H), bias.

inline constexpr std::string_view kHeadMagic = "XATNHD01";

struct HeadCheckpoint {
  BasicAttentionHead<float> head;
  TrainConfig config;

  friend bool operator==(const HeadCheckpoint& a, const HeadCheckpoint& b) {
    auto same = [](const auto& x, const auto& y) {
      return x.rows() == y.rows() && x.cols() == y.cols() &&
             std::memcmp(x.data(), y.data(), sizeof(float) * static_cast<std::size_t>(x.size())) == 0;
    };
    return a.head.num_heads == b.head.num_heads && a.head.output == b.head.output &&
           a.head.trainable_mix == b.head.trainable_mix && same(a.head.w_query, b.head.w_query) &&
           same(a.head.w_key, b.head.w_key) && same(a.head.head_mix, b.head.head_mix) &&
           std::memcmp(&a.head.bias, &b.head.bias, sizeof(float)) == 0 &&
           to_json(a.config) == to_json(b.config);
  }
};

template <typename Scalar>
void write_checkpoint(std::ostream& out, const BasicAttentionHead<Scalar>& head,
                      const TrainConfig& config) {
  head.validate();
  nlohmann::ordered_json h;
  h["version"] = 1;
  h["model_dim"] = head.model_dim();
  h["proj_dim"] = head.proj_dim();
  h["num_heads"] = head.num_heads;
  h["output"] = to_string(head.output);
  h["trainable_mix"] = head.trainable_mix;
  h["seed"] = config.seed;
  h["config"] = to_json(config);
  binio::write_preamble(out, kHeadMagic, h);
  auto block = [&](const auto& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) binio::write_f32(out, static_cast<float>(m.data()[i]));
  };
  block(head.w_query);
  block(head.w_key);
  block(head.head_mix);
  binio::write_f32(out, static_cast<float>(head.bias));
  if (!out) throw DataError("write failed");
}

inline HeadCheckpoint read_checkpoint(std::istream& in) {
  const auto h = binio::read_preamble(in, kHeadMagic);
  HeadCheckpoint ck;
  std::size_t d = 0, dp = 0;
  try {
    if (h.at("version").get<int>() != 1) throw DataError("unsupported checkpoint version");
    d = h.at("model_dim").get<std::size_t>();
    dp = h.at("proj_dim").get<std::size_t>();
    ck.head.num_heads = h.at("num_heads").get<std::size_t>();
    ck.head.output = output_mode_from_string(h.at("output").get<std::string>());
    ck.head.trainable_mix = h.at("trainable_mix").get<bool>();
    ck.config = train_config_from_json(h.at("config"));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad checkpoint header: ") + e.what());
  } catch (const ConfigError& e) {
    throw DataError(std::string("bad checkpoint config: ") + e.what());
  }
  if (d == 0 || dp == 0 || ck.head.num_heads == 0) throw DataError("bad checkpoint dimensions");
  auto block = [&](auto& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = binio::read_f32(in, "truncated checkpoint");
  };
  ck.head.w_query.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(dp));
  ck.head.w_key.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(dp));
  ck.head.head_mix.resize(static_cast<Eigen::Index>(ck.head.num_heads));
  block(ck.head.w_query);
  block(ck.head.w_key);
  block(ck.head.head_mix);
  ck.head.bias = binio::read_f32(in, "truncated checkpoint");
  if (!binio::at_eof(in)) throw DataError("trailing data after checkpoint");
  ck.head.validate();
  return ck;
}

template <typename Scalar>
void write_checkpoint(const std::filesystem::path& path, const BasicAttentionHead<Scalar>& head,
                      const TrainConfig& config) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_checkpoint(out, head, config);
}

inline HeadCheckpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return read_checkpoint(in);
}

}  // namespace ontolearn::taxo
