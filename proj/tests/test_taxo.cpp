#include <gtest/gtest.h>

#include <sstream>

#include "ontolearn/eval.hpp"
#include "taxo_checks.hpp"

using namespace ontolearn;
using namespace ontolearn::taxo;

namespace {

TaxonomyGraph chain(std::size_t n) {
  TaxonomyGraph g;
  for (std::size_t i = 0; i < n; ++i) g.types.push_back("t" + std::to_string(i));
  for (std::size_t i = 1; i < n; ++i) g.add_edge(i, i - 1);
  return g;
}

// Brute-force F1 over every distinct candidate threshold (predict p >= t).
double brute_val_f1_threshold(const std::vector<double>& p, const std::vector<int>& y) {
  std::set<double> cands(p.begin(), p.end());
  double best_t = *cands.rbegin(), best_f1 = 0.0;
  const auto pos = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
  for (double t : cands) {  // ascending: strict > keeps the smallest on ties
    std::size_t tp = 0, pred = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] >= t) {
        ++pred;
        tp += y[i] == 1;
      }
    }
    const double f = f1_score(static_cast<double>(tp) / static_cast<double>(pred),
                              pos ? static_cast<double>(tp) / static_cast<double>(pos) : 0.0);
    if (f > best_f1) {
      best_f1 = f;
      best_t = t;
    }
  }
  return best_t;
}

}  // namespace

TEST(Graph, ParseAndWriteRoundTrip) {
  const auto j = nlohmann::json::parse(
      R"([{"parent":"Food","child":"Fruit"},{"parent":"Fruit","child":"Apple"},{"parent":"X","child":"X"}])");
  const auto g = parse_taxonomy_json(j);
  EXPECT_EQ(g.size(), 4u);  // the self-loop is dropped but X is kept as a type
  EXPECT_EQ(g.edges.size(), 2u);
  EXPECT_DOUBLE_EQ(g.density(), 2.0 / 16.0);
  fixtures::TempDir dir("taxo");
  write_taxonomy(g, dir / "t.json");
  const auto back = read_taxonomy(dir / "t.json", g.types);
  EXPECT_EQ(back.edges, g.edges);
  EXPECT_THROW(parse_taxonomy_json(j, {"Food"}), DataError);
  EXPECT_THROW(read_taxonomy(dir / "missing.json"), Error);
}

TEST(Graph, AddEdgeRejectsSelfLoopsAndBadIndices) {
  auto g = chain(3);
  EXPECT_THROW(g.add_edge(1, 1), DataError);
  EXPECT_THROW(g.add_edge(0, 7), DataError);
}

TEST(Split, PartitionsTypesAndKeepsInducedEdges) {
  const auto g = fixtures::planted_taxonomy(20, 3, 4);
  const auto s = split_types(g, 0.8, 9);
  EXPECT_EQ(s.train.size(), 16u);
  EXPECT_EQ(s.validation.size(), 4u);
  EXPECT_EQ(s.train.edges.size() + s.validation.edges.size() + s.dropped_edges, g.edges.size());
  std::set<std::string> all(s.train.types.begin(), s.train.types.end());
  for (const auto& t : s.validation.types) EXPECT_TRUE(all.insert(t).second);
  EXPECT_EQ(all.size(), 20u);
  const auto again = split_types(g, 0.8, 9);
  EXPECT_EQ(again.train.types, s.train.types);
  EXPECT_THROW(split_types(chain(4)), DataError);
}

TEST(Forward, MatchesHandComputedLogit) {
  AttentionHead h;
  h.num_heads = 1;
  h.w_query = Matrix<double>::Identity(2, 2);
  h.w_key = Matrix<double>::Identity(2, 2);
  h.head_mix = Vector<double>::Ones(1);
  h.bias = -0.5;
  Matrix<double> x(2, 2);
  x << 1, 2, 3, 4;
  const auto s = forward(h, x);
  const double logit = (1 * 3 + 2 * 4) / std::sqrt(2.0) - 0.5;
  EXPECT_NEAR(s.logits(0, 1), logit, 1e-12);
  EXPECT_NEAR(s.probs(0, 1), 1 / (1 + std::exp(-logit)), 1e-12);
  EXPECT_EQ(s.probs(0, 0), 0.0);  // masked diagonal
  EXPECT_EQ(s.valid_count(), 2u);
}

TEST(Forward, RowSoftmaxRowsSumToOneOverValidEntries) {
  auto h = init_head(8, 2, 1, 0, OutputMode::row_softmax);
  Matrix<double> x = Matrix<double>::Random(5, 8);
  const auto s = forward(h, x);
  for (Eigen::Index i = 0; i < 5; ++i) {
    EXPECT_NEAR(s.probs.row(i).sum(), 1.0, 1e-12);
    EXPECT_EQ(s.probs(i, i), 0.0);
  }
}

TEST(Forward, RejectsShapeMismatch) {
  const auto h = init_head(8, 2, 1);
  Matrix<double> x = Matrix<double>::Random(4, 7);
  EXPECT_THROW(forward(h, x), DataError);
}

TEST(Init, ProjectionWidthAndSimplexMix) {
  const auto h = init_head(10, 4, 2);
  EXPECT_EQ(h.proj_dim(), 8u);
  EXPECT_EQ(h.head_dim(), 2u);
  EXPECT_NEAR(h.head_mix.sum(), 1.0, 1e-15);
  EXPECT_LE(h.w_query.cwiseAbs().maxCoeff(), 1 / std::sqrt(10.0));
  EXPECT_THROW(init_head(8, 3, 0, 8), ConfigError);
}

TEST(Loss, ClampKeepsLossFinite) {
  AttentionHead h = init_head(2, 1, 0);
  h.bias = 500;  // every p rounds to 1
  Matrix<double> x = Matrix<double>::Zero(3, 2);
  const auto s = forward(h, x);
  const double loss = bce_loss(s, Matrix<double>(Matrix<double>::Zero(3, 3)), 1.0);
  EXPECT_NEAR(loss, -std::log(kProbClamp), 1e-6);
}

TEST(Gradients, MatchCentralDifferencesAcrossRandomInstances) {
  const auto r = fixtures::gradient_oracle_sweep(24);
  EXPECT_GT(r.compared, 2000u);
  EXPECT_LE(r.max_rel_error, 1e-4) << r.worst;
}

TEST(Gradients, SingleInstancePerMode) {
  for (auto mode : {OutputMode::sigmoid, OutputMode::row_softmax}) {
    const auto c = fixtures::check_gradients(fixtures::random_gradient_instance(77, 6, 8, 2, mode));
    EXPECT_LE(c.max_rel_error, 1e-4) << to_string(mode) << " " << c.worst;
  }
}

TEST(Schedule, WarmupThenCosine) {
  EXPECT_DOUBLE_EQ(lr_schedule(0, 100, 1e-5), 1e-6);
  EXPECT_DOUBLE_EQ(lr_schedule(9, 100, 1e-5), 1e-5);
  EXPECT_DOUBLE_EQ(lr_schedule(10, 100, 1e-5), 1e-5);
  EXPECT_NEAR(lr_schedule(55, 100, 1e-5), 0.5e-5, 1e-18);
  EXPECT_NEAR(lr_schedule(99, 100, 1e-5), 3.0459e-9, 1e-13);
  for (std::size_t s = 10; s + 1 < 100; ++s) {
    EXPECT_GE(lr_schedule(s, 100, 1e-5), lr_schedule(s + 1, 100, 1e-5));
  }
  EXPECT_THROW(lr_schedule(100, 100, 1e-5), ConfigError);
}

TEST(Train, OverfitsPlantedTaxonomy) {
  const auto r = fixtures::overfit_planted();
  EXPECT_GE(r.train_auc, 0.99);
  EXPECT_LE(r.epochs, 200u);
  EXPECT_LT(r.seconds, 60.0);
}

TEST(Train, DeterministicForFixedSeed) {
  const auto g = fixtures::planted_taxonomy(12, 2, 1);
  const auto store = fixtures::random_store(g.types, 8, 2);
  TrainConfig c;
  c.epochs = 3;
  c.batch_size = 4;
  c.num_heads = 2;
  c.learning_rate = 0.01;
  c.trainable_mix = true;
  const auto a = train(g, store, c), b = train(g, store, c);
  EXPECT_EQ(a.final_head.w_query, b.final_head.w_query);
  EXPECT_EQ(a.final_head.head_mix, b.final_head.head_mix);
  EXPECT_NEAR(a.final_head.head_mix.sum(), 1.0, 1e-12);
  ASSERT_EQ(a.history.size(), 3u);
  EXPECT_DOUBLE_EQ(a.pos_weight, (12.0 * 11.0 - 10.0) / 10.0);
}

TEST(Train, ZeroEpochsIsAConfigError) {
  const auto g = fixtures::planted_taxonomy(6, 2, 1);
  const auto store = fixtures::random_store(g.types, 4, 1);
  TrainConfig c;
  c.epochs = 0;
  try {
    train(g, store, c);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_STREQ(e.what(), "epochs must be ≥ 1");
  }
}

TEST(Train, MissingEmbeddingIsADataError) {
  const auto g = fixtures::planted_taxonomy(6, 2, 1);
  const auto store = fixtures::random_store({"type0"}, 4, 1);
  EXPECT_THROW(train(g, store, TrainConfig{}), DataError);
}

TEST(Config, JsonRoundTripAndValidation) {
  TrainConfig c;
  c.learning_rate = 3e-4;
  c.pos_weight = 2.5;
  c.optimizer = Optimizer::adam;
  const auto back = train_config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  const auto autow = train_config_from_json(nlohmann::json::parse(R"({"pos_weight":"auto","epochs":2})"));
  EXPECT_FALSE(autow.pos_weight.has_value());
  EXPECT_EQ(autow.epochs, 2u);
  EXPECT_THROW(train_config_from_json(nlohmann::json::parse(R"({"epochs":-1})")), ConfigError);
  EXPECT_THROW(train_config_from_json(nlohmann::json::parse(R"({"optimizer":"lbfgs"})")), ConfigError);
}

TEST(Grid, CartesianOrderAndFirstWinsTies) {
  const auto grid = make_grid({1e-3, 1e-2}, {4}, {1, 2}, {1});
  ASSERT_EQ(grid.size(), 4u);
  EXPECT_EQ(grid[1].num_heads, 2u);
  EXPECT_EQ(grid[2].learning_rate, 1e-2);

  const auto g = fixtures::planted_taxonomy(15, 3, 6);
  const auto store = fixtures::random_store(g.types, 8, 6);
  // Identical configs give identical AUCs; the first must win.
  const auto same = make_grid({1e-3}, {4}, {2}, {2});
  const auto r = grid_search(g, store, {same[0], same[0], same[0]}, 0.8, 1);
  EXPECT_EQ(r.best_index, 0u);
  ASSERT_EQ(r.leaderboard.size(), 3u);
  const auto full = grid_search(g, store, grid, 0.8, 1);
  for (std::size_t i = 0; i < full.leaderboard.size(); ++i) {
    if (!std::isnan(full.leaderboard[i].val_auc)) {
      EXPECT_LE(full.leaderboard[i].val_auc, full.leaderboard[full.best_index].val_auc);
    }
  }
}

TEST(Threshold, SparsityMatchedGivesExactEdgeCount) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 5 + rng() % 20;
    const double density = static_cast<double>(rng() % 1000) / 4000.0;
    TaxonomyGraph g;
    for (std::size_t i = 0; i < n; ++i) g.types.push_back("t" + std::to_string(i));
    const auto store = fixtures::random_store(g.types, 8, rng());
    const auto head = init_head(8, 2, rng());
    const auto pred = predict_sparsity_matched(head, store, g.types, density);
    EXPECT_EQ(pred.edges.size(), static_cast<std::size_t>(std::llround(density * static_cast<double>(n * n))));

    // The threshold form agrees when scores are distinct.
    const auto s = score_types(head, store, g.types);
    const auto [scores, labels] = valid_pairs(s, labels_for<double>(g));
    const std::size_t k = sparsity_edge_count(density, n * n);
    const double t = sparsity_matched_threshold(scores, k);
    EXPECT_EQ(static_cast<std::size_t>(std::count_if(scores.begin(), scores.end(),
                                                     [&](double x) { return x > t; })),
              k);
  }
}

TEST(Threshold, TopKBreaksTiesInIndexOrder) {
  ScoreMatrix<double> s;
  s.probs = Matrix<double>::Constant(3, 3, 0.5);
  s.mask = diagonal_mask(3);
  const auto g = edges_from_scores(s, {"a", "b", "c"}, TopK{2});
  EXPECT_EQ(g.edges, (std::set<std::pair<std::size_t, std::size_t>>{{0, 1}, {0, 2}}));
  EXPECT_EQ(edges_from_scores(s, {"a", "b", "c"}, Threshold{0.5}).edges.size(), 0u);
  EXPECT_EQ(edges_from_scores(s, {"a", "b", "c"}, Threshold{0.4}).edges.size(), 6u);
}

TEST(Threshold, ValidationF1MatchesBruteForceScan) {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 60;
    std::vector<double> p(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = static_cast<double>(rng() % 25) / 25.0;
      y[i] = rng() % 3 == 0;
    }
    EXPECT_EQ(select_val_f1_threshold(p, y), brute_val_f1_threshold(p, y));
  }
  // No positive labels: F1 is zero everywhere, so the largest candidate.
  EXPECT_EQ(select_val_f1_threshold(std::vector<double>{0.2, 0.7}, std::vector<int>{0, 0}), 0.7);
}

TEST(Threshold, EdgeCountBounds) {
  EXPECT_EQ(sparsity_edge_count(0.0, 100), 0u);
  EXPECT_EQ(sparsity_edge_count(1.0, 100), 100u);
  EXPECT_EQ(sparsity_edge_count(0.125, 16), 2u);
  EXPECT_THROW(sparsity_edge_count(1.5, 10), ConfigError);
}

TEST(Checkpoint, BitIdenticalRoundTrip) {
  auto h = init_head(12, 3, 5);
  h.bias = 0.1234567;
  h.trainable_mix = true;
  TrainConfig c;
  c.seed = 5;
  c.num_heads = 3;
  std::stringstream buf;
  write_checkpoint(buf, h, c);
  const std::string bytes = buf.str();
  EXPECT_EQ(bytes.substr(0, 8), "XATNHD01");
  std::istringstream in(bytes);
  const auto ck = read_checkpoint(in);
  std::stringstream again;
  write_checkpoint(again, ck.head, ck.config);
  EXPECT_EQ(again.str(), bytes);
  std::istringstream in2(again.str());
  EXPECT_EQ(read_checkpoint(in2), ck);
  EXPECT_EQ(ck.head.w_query, h.w_query.cast<float>());
}

TEST(Checkpoint, CorruptInputIsRejected) {
  std::stringstream buf;
  write_checkpoint(buf, init_head(4, 2, 1), TrainConfig{});
  const std::string bytes = buf.str();
  std::istringstream truncated(bytes.substr(0, bytes.size() - 3));
  EXPECT_THROW(read_checkpoint(truncated), DataError);
  std::istringstream trailing(bytes + "x");
  EXPECT_THROW(read_checkpoint(trailing), DataError);
  std::istringstream magic("EMBSTOR1" + bytes.substr(8));
  EXPECT_THROW(read_checkpoint(magic), DataError);
}
