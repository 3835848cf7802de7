#pragma once

// Exact-match precision/recall/F1 for string sets and directed edges, and
// tie-aware ROC AUC.

#include <algorithm>
#include <cstddef>
#include <iomanip>
#include <numeric>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ontolearn/error.hpp"
#include "ontolearn/text.hpp"

namespace ontolearn {

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

inline double f1_score(double precision, double recall) {
  return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

// An empty prediction scores P = 0; an empty gold set is an error.
inline PRF prf_from_counts(std::size_t true_pos, std::size_t n_pred, std::size_t n_gold) {
  if (n_gold == 0) throw DataError("empty gold set");
  PRF r;
  r.precision = n_pred ? static_cast<double>(true_pos) / n_pred : 0.0;
  r.recall = static_cast<double>(true_pos) / n_gold;
  r.f1 = f1_score(r.precision, r.recall);
  return r;
}

// Strings are compared after text::normalize unless `normalize` is false.
inline PRF set_prf(const std::vector<std::string>& predicted,
                   const std::vector<std::string>& gold, bool normalize = true) {
  auto key = [&](const std::string& s) { return normalize ? text::normalize(s) : s; };
  std::set<std::string> p, g;
  for (const auto& s : predicted) p.insert(key(s));
  for (const auto& s : gold) g.insert(key(s));
  std::size_t tp = 0;
  for (const auto& s : p) tp += g.count(s);
  return prf_from_counts(tp, p.size(), g.size());
}

// Directed (child, parent) name pairs; (a, b) and (b, a) are different edges.
using NamedEdge = std::pair<std::string, std::string>;

inline PRF edge_prf(const std::vector<NamedEdge>& predicted, const std::vector<NamedEdge>& gold,
                    bool normalize = true) {
  auto key = [&](const NamedEdge& e) {
    return normalize ? NamedEdge{text::normalize(e.first), text::normalize(e.second)} : e;
  };
  std::set<NamedEdge> p, g;
  for (const auto& e : predicted) p.insert(key(e));
  for (const auto& e : gold) g.insert(key(e));
  std::size_t tp = 0;
  for (const auto& e : p) tp += g.count(e);
  return prf_from_counts(tp, p.size(), g.size());
}

// Mann-Whitney form with average ranks for ties.
inline double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw DataError("scores and labels differ in length");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double pos_rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks i+1 .. j
    for (std::size_t t = i; t < j; ++t) {
      if (labels[order[t]]) {
        pos_rank_sum += avg_rank;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) throw DataError("ROC AUC needs both classes");
  const double p = static_cast<double>(n_pos);
  return (pos_rank_sum - p * (p + 1.0) / 2.0) / (p * static_cast<double>(n_neg));
}

inline double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  return roc_auc(std::span<const double>(scores), std::span<const int>(labels));
}

struct ReportRow {
  std::string dataset;
  std::string metric;
  PRF prf;
};

inline nlohmann::ordered_json to_json(const ReportRow& r) {
  return {{"dataset", r.dataset},
          {"metric", r.metric},
          {"precision", r.prf.precision},
          {"recall", r.prf.recall},
          {"f1", r.prf.f1}};
}

inline std::string format_table(const std::vector<ReportRow>& rows) {
  std::size_t wd = 7, wm = 6;
  for (const auto& r : rows) {
    wd = std::max(wd, r.dataset.size());
    wm = std::max(wm, r.metric.size());
  }
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(wd)) << "dataset" << "  "
     << std::setw(static_cast<int>(wm)) << "metric" << "  precision  recall     f1\n";
  os << std::fixed << std::setprecision(4);
  for (const auto& r : rows) {
    os << std::left << std::setw(static_cast<int>(wd)) << r.dataset << "  "
       << std::setw(static_cast<int>(wm)) << r.metric << "  " << std::right
       << std::setw(9) << r.prf.precision << "  " << std::setw(6) << r.prf.recall << "  "
       << std::setw(6) << r.prf.f1 << "\n";
  }
  return os.str();
}

}  // namespace ontolearn
