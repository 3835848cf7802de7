#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ontolearn/eval.hpp"
#include "published_rows.hpp"

using namespace ontolearn;

namespace {

double brute_force_auc(const std::vector<double>& s, const std::vector<int>& y) {
  double wins = 0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!y[i]) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j]) continue;
      ++pairs;
      wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
    }
  }
  return wins / static_cast<double>(pairs);
}

}  // namespace

TEST(SetPrf, HandCount) {
  const auto r = set_prf({"a", "b", "c"}, {"b", "c", "d"});
  EXPECT_DOUBLE_EQ(r.precision, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.recall, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.f1, 2.0 / 3.0);
  const auto id = set_prf({"x", "y"}, {"y", "x"});
  EXPECT_EQ(id.precision, 1.0);
  EXPECT_EQ(id.f1, 1.0);
}

TEST(SetPrf, NormalizationEmptyPredictionAndEmptyGold) {
  EXPECT_EQ(set_prf({"Cell  Wall"}, {"cell wall"}).f1, 1.0);
  EXPECT_EQ(set_prf({"Cell"}, {"cell"}, false).f1, 0.0);
  const auto empty = set_prf({}, {"a"});
  EXPECT_EQ(empty.precision, 0.0);
  EXPECT_EQ(empty.recall, 0.0);
  EXPECT_EQ(empty.f1, 0.0);
  EXPECT_THROW(set_prf({"a"}, {}), DataError);
}

TEST(SetPrf, SwappingArgumentsSwapsPrecisionAndRecall) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 200; ++t) {
    std::vector<std::string> a, b;
    for (int i = 0; i < 1 + static_cast<int>(rng() % 8); ++i) a.push_back(std::to_string(rng() % 10));
    for (int i = 0; i < 1 + static_cast<int>(rng() % 8); ++i) b.push_back(std::to_string(rng() % 10));
    const auto ab = set_prf(a, b), ba = set_prf(b, a);
    EXPECT_DOUBLE_EQ(ab.precision, ba.recall);
    EXPECT_DOUBLE_EQ(ab.recall, ba.precision);
    EXPECT_NEAR(ab.f1, ba.f1, 1e-15);
  }
}

TEST(EdgePrf, DirectedMatching) {
  const auto r = edge_prf({{"a", "b"}}, {{"a", "b"}, {"c", "d"}});
  EXPECT_EQ(r.precision, 1.0);
  EXPECT_EQ(r.recall, 0.5);
  EXPECT_DOUBLE_EQ(r.f1, 2.0 / 3.0);
  EXPECT_EQ(edge_prf({{"b", "a"}}, {{"a", "b"}}).f1, 0.0);
  EXPECT_THROW(edge_prf({{"a", "b"}}, {}), DataError);
}

TEST(F1, PublishedRowsAreInternallyConsistent) {
  for (const auto& row : fixtures::published_rows()) {
    EXPECT_NEAR(f1_score(row.precision, row.recall), row.f1, 5e-4) << row.source << " / " << row.label;
  }
  EXPECT_EQ(f1_score(0, 0), 0.0);
}

TEST(Auc, SmallExamples) {
  EXPECT_EQ(roc_auc(std::vector<double>{0.9, 0.1}, std::vector<int>{1, 0}), 1.0);
  EXPECT_EQ(roc_auc(std::vector<double>{0.9, 0.1}, std::vector<int>{0, 1}), 0.0);
  EXPECT_EQ(roc_auc(std::vector<double>{0.5, 0.5}, std::vector<int>{1, 0}), 0.5);
  EXPECT_THROW(roc_auc(std::vector<double>{0.5, 0.4}, std::vector<int>{1, 1}), DataError);
  EXPECT_THROW(roc_auc(std::vector<double>{0.5}, std::vector<int>{1, 0}), DataError);
}

TEST(Auc, MatchesPairwiseBruteForce) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng() % 199;
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng() % 20) / 20.0;  // plenty of ties
      y[i] = static_cast<int>(rng() % 2);
    }
    y[0] = 1;
    y[1] = 0;
    EXPECT_NEAR(roc_auc(s, y), brute_force_auc(s, y), 1e-12);
  }
}

TEST(Auc, InvariantUnderMonotoneTransform) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> s(40), ts;
    std::vector<int> y(40);
    for (std::size_t i = 0; i < s.size(); ++i) {
      s[i] = std::round(u(rng) * 4) / 4;
      y[i] = static_cast<int>(i % 3 == 0);
    }
    for (double x : s) ts.push_back(std::exp(2 * x) + 1);
    EXPECT_NEAR(roc_auc(s, y), roc_auc(ts, y), 1e-12);
  }
}

TEST(Report, JsonAndTable) {
  const ReportRow row{"MatOnto", "sparsity", {0.6705, 0.4792, 0.5590}};
  const auto j = to_json(row);
  EXPECT_EQ(j.dump(), R"({"dataset":"MatOnto","metric":"sparsity","precision":0.6705,"recall":0.4792,"f1":0.559})");
  const auto table = format_table({row});
  EXPECT_NE(table.find("MatOnto"), std::string::npos);
  EXPECT_NE(table.find("0.6705"), std::string::npos);
  EXPECT_NE(table.find("0.5590"), std::string::npos);
}
