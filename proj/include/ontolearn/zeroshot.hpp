#pragma once

// Zero-shot term typing over frozen embeddings: prompt templating, cosine
// argmax, the confidence/entropy-weighted multi-model ensemble, and
// dot-product (DistMult with identity relation) scoring with z-score
// multi-type selection.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "ontolearn/embedstore.hpp"
#include "ontolearn/error.hpp"

namespace ontolearn {

enum class TemplateKind { plain, qa, instructional };

enum class TextRole { term, type };

// "{text}" is the slot; "{domain}" is replaced by domain_label.
struct TemplateStyle {
  TemplateKind kind = TemplateKind::plain;
  std::string domain_label;
  std::string term_template;
  std::string type_template;

  static TemplateStyle plain() { return {}; }

  static TemplateStyle qa(std::string domain) {
    return {TemplateKind::qa, std::move(domain), "In {domain}, explain {text}",
            "This {domain} category represents {text}"};
  }

  static TemplateStyle instructional(std::string domain) {
    return {TemplateKind::instructional, std::move(domain),
            "Instruct: Given a {domain} term, identify the category it belongs to\nQuery: {text}",
            "This {domain} category encompasses {text}"};
  }
};

inline TemplateKind template_kind_from_string(const std::string& s) {
  if (s == "plain") return TemplateKind::plain;
  if (s == "qa") return TemplateKind::qa;
  if (s == "instructional") return TemplateKind::instructional;
  throw ConfigError("unknown template style \"" + s + "\"");
}

namespace detail {

inline std::size_t count_occurrences(std::string_view s, std::string_view needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string_view::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

inline std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  for (auto p = s.find(from); p != std::string::npos; p = s.find(from, p + to.size())) {
    s.replace(p, from.size(), to);
  }
  return s;
}

}  // namespace detail

inline std::string apply_template(const std::string& text, const TemplateStyle& style,
                                  TextRole role) {
  if (style.kind == TemplateKind::plain) return text;
  const std::string& tpl = role == TextRole::term ? style.term_template : style.type_template;
  if (detail::count_occurrences(tpl, "{text}") != 1) {
    throw ConfigError("template must contain exactly one {text} slot: \"" + tpl + "\"");
  }
  std::string out = tpl;
  if (out.find("{domain}") != std::string::npos) {
    if (style.domain_label.empty()) {
      throw ConfigError("template uses {domain} but no domain_label is set");
    }
    out = detail::replace_all(out, "{domain}", style.domain_label);
  }
  // Substitute the slot last so text containing "{domain}" is left alone.
  return detail::replace_all(out, "{text}", text);
}

struct TypePrediction {
  std::string term;
  std::vector<std::string> predicted;
  std::vector<double> scores;  // one per candidate type, candidate order
};

// Index of the maximum; ties go to the smallest `ids[i]` (or smallest index
// when ids is empty).
inline std::size_t argmax_with_tiebreak(std::span<const double> scores,
                                        std::span<const std::string> ids = {}) {
  if (scores.empty()) throw DataError("no candidates");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best] ||
        (scores[i] == scores[best] && !ids.empty() && ids[i] < ids[best])) {
      best = i;
    }
  }
  return best;
}

inline std::vector<double> cosine_scores(std::span<const float> term_vec,
                                         const EmbeddingStore& types) {
  if (types.empty()) throw DataError("empty type store");
  if (term_vec.size() != types.dim()) throw DataError("dimension mismatch");
  std::vector<double> s(types.size());
  for (std::size_t j = 0; j < types.size(); ++j) s[j] = cosine(term_vec, types.row(j));
  return s;
}

inline TypePrediction cosine_classify(std::span<const float> term_vec,
                                      const EmbeddingStore& types,
                                      std::string term = {}) {
  TypePrediction p;
  p.term = std::move(term);
  p.scores = cosine_scores(term_vec, types);
  p.predicted = {types.ids()[argmax_with_tiebreak(p.scores, types.ids())]};
  return p;
}

struct MemberPrediction {
  std::string member_name;
  std::vector<double> similarities;
  std::vector<double> probs;
  double p_max = 0.0;
  double h_norm = 0.0;
  double confidence = 0.0;
  double weight_raw = 0.0;
};

// probs = softmax(sim / T); H = -sum p ln p; h_norm = H / ln K (0 when K = 1);
// confidence = p_max (1 - h_norm); weight_raw = 0.7 confidence + 0.3 (1 - h_norm).
inline MemberPrediction member_predict(std::span<const double> similarities,
                                       double temperature = 1.0,
                                       std::string member_name = {}) {
  if (similarities.empty()) throw DataError("no candidates");
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw ConfigError("temperature must be positive");
  }
  for (double s : similarities) {
    if (!std::isfinite(s)) throw DataError("non-finite similarity");
  }
  MemberPrediction m;
  m.member_name = std::move(member_name);
  m.similarities.assign(similarities.begin(), similarities.end());
  const std::size_t k = similarities.size();
  const double top = *std::max_element(similarities.begin(), similarities.end());
  m.probs.resize(k);
  double z = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    m.probs[j] = std::exp((similarities[j] - top) / temperature);
    z += m.probs[j];
  }
  double h = 0.0;
  for (auto& p : m.probs) {
    p /= z;
    if (p > 0.0) h -= p * std::log(p);
  }
  m.p_max = *std::max_element(m.probs.begin(), m.probs.end());
  const bool constant = std::all_of(similarities.begin(), similarities.end(),
                                    [&](double s) { return s == similarities[0]; });
  if (k < 2) {
    m.h_norm = 0.0;
  } else if (constant) {
    // Exactly uniform; avoid rounding leaving confidence at ~1e-16.
    m.h_norm = 1.0;
  } else {
    m.h_norm = std::clamp(h / std::log(static_cast<double>(k)), 0.0, 1.0);
  }
  m.confidence = m.p_max * (1.0 - m.h_norm);
  m.weight_raw = 0.7 * m.confidence + 0.3 * (1.0 - m.h_norm);
  return m;
}

inline MemberPrediction member_predict(const std::vector<double>& similarities,
                                       double temperature = 1.0,
                                       std::string member_name = {}) {
  return member_predict(std::span<const double>(similarities), temperature,
                        std::move(member_name));
}

namespace detail {

inline void check_aligned(const std::vector<MemberPrediction>& members) {
  if (members.empty()) throw DataError("ensemble needs at least one member");
  for (const auto& m : members) {
    if (m.similarities.size() != members.front().similarities.size()) {
      throw DataError("candidate-list mismatch across ensemble members");
    }
  }
}

}  // namespace detail

// weight_raw normalized to sum 1; uniform when every raw weight is 0.
inline std::vector<double> ensemble_weights(const std::vector<MemberPrediction>& members) {
  detail::check_aligned(members);
  std::vector<double> w(members.size());
  double total = 0.0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    w[i] = std::max(0.0, members[i].weight_raw);
    total += w[i];
  }
  if (total <= 0.0) {
    std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(members.size()));
  } else {
    for (auto& x : w) x /= total;
  }
  return w;
}

enum class EnsembleScore { similarities, probs };

// score_j = sum_i w_i * s_ij, argmax with id tie-break.
inline TypePrediction ensemble_predict(const std::vector<MemberPrediction>& members,
                                       std::span<const std::string> candidate_ids,
                                       EnsembleScore mode = EnsembleScore::similarities,
                                       std::string term = {}) {
  const auto w = ensemble_weights(members);
  const std::size_t k = members.front().similarities.size();
  if (candidate_ids.size() != k) throw DataError("candidate-list mismatch");
  TypePrediction p;
  p.term = std::move(term);
  p.scores.assign(k, 0.0);
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto& src =
        mode == EnsembleScore::similarities ? members[i].similarities : members[i].probs;
    for (std::size_t j = 0; j < k; ++j) p.scores[j] += w[i] * src[j];
  }
  p.predicted = {candidate_ids[argmax_with_tiebreak(p.scores, candidate_ids)]};
  return p;
}

// Raw dot products; vectors are not renormalized.
inline std::vector<double> distmult_scores(std::span<const float> term_vec,
                                           const EmbeddingStore& types) {
  if (term_vec.size() != types.dim()) throw DataError("dimension mismatch");
  std::vector<double> s(types.size());
  for (std::size_t j = 0; j < types.size(); ++j) s[j] = dot(term_vec, types.row(j));
  return s;
}

// Indices with population z-score > tau, by score descending (index
// ascending on ties). Falls back to the argmax singleton when sigma = 0 or
// nothing qualifies, so the result is never empty.
inline std::vector<std::size_t> zscore_select(std::span<const double> scores, double tau = 1.0) {
  if (scores.empty()) throw DataError("no scores");
  const double n = static_cast<double>(scores.size());
  const double mean = std::accumulate(scores.begin(), scores.end(), 0.0) / n;
  double var = 0.0;
  for (double s : scores) var += (s - mean) * (s - mean);
  const double sigma = std::sqrt(var / n);

  std::vector<std::size_t> picked;
  if (sigma > 0.0) {
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if ((scores[j] - mean) / sigma > tau) picked.push_back(j);
    }
    std::stable_sort(picked.begin(), picked.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  }
  if (picked.empty()) picked.push_back(argmax_with_tiebreak(scores));
  return picked;
}

inline std::vector<std::size_t> zscore_select(const std::vector<double>& scores,
                                              double tau = 1.0) {
  return zscore_select(std::span<const double>(scores), tau);
}

inline TypePrediction distmult_predict(std::span<const float> term_vec,
                                       const EmbeddingStore& types, double tau = 1.0,
                                       std::string term = {}) {
  TypePrediction p;
  p.term = std::move(term);
  p.scores = distmult_scores(term_vec, types);
  for (std::size_t j : zscore_select(p.scores, tau)) p.predicted.push_back(types.ids()[j]);
  return p;
}

}  // namespace ontolearn
