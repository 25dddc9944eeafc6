#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "cgtree/greedy.hpp"
#include "cgtree/rng.hpp"

using namespace cgtree;

namespace {

Dataset make(std::vector<std::vector<double>> feats, std::vector<int> targets, int classes = 2) {
  std::vector<Row> rows;
  for (std::size_t i = 0; i < feats.size(); ++i) rows.push_back({i, feats[i], targets[i], 1});
  return Dataset(rows, feats[0].size(), classes);
}

Dataset random_dataset(std::uint64_t seed, std::size_t n, std::size_t features, int levels,
                       int classes = 2) {
  Rng rng(seed);
  std::vector<std::vector<double>> feats(n, std::vector<double>(features));
  std::vector<int> targets(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : feats[i]) v = double(rng.uniform_index(levels));
    targets[i] = int(rng.uniform_index(classes));
  }
  return make(feats, targets, classes);
}

double gini_of(const Dataset& d, const std::vector<std::size_t>& rows) {
  if (rows.empty()) return 0.0;
  std::vector<double> c(d.num_classes(), 0.0);
  double w = 0.0;
  for (auto p : rows) {
    c[d.row(p).target] += double(d.row(p).weight);
    w += double(d.row(p).weight);
  }
  double g = 1.0;
  for (double x : c) g -= (x / w) * (x / w);
  return g;
}

// Every (feature, midpoint) pair scored from scratch.
std::optional<std::pair<int, double>> exhaustive_split(const Dataset& d,
                                                       const std::vector<std::size_t>& rows) {
  double total = 0.0;
  for (auto p : rows) total += double(d.row(p).weight);
  std::optional<std::pair<int, double>> best;
  double best_imp = 1e300;
  for (std::size_t f = 0; f < d.num_features(); ++f) {
    std::set<double> values;
    for (auto p : rows) values.insert(d.row(p).features[f]);
    std::vector<double> v(values.begin(), values.end());
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      const double mu = 0.5 * (v[i] + v[i + 1]);
      std::vector<std::size_t> l, r;
      double lw = 0.0, rw = 0.0;
      for (auto p : rows) {
        if (d.row(p).features[f] <= mu) {
          l.push_back(p);
          lw += double(d.row(p).weight);
        } else {
          r.push_back(p);
          rw += double(d.row(p).weight);
        }
      }
      const double imp = (lw * gini_of(d, l) + rw * gini_of(d, r)) / total;
      if (imp < best_imp - 1e-12) {
        best_imp = imp;
        best = {{int(f), mu}};
      }
    }
  }
  return best;
}

// Correct weight of a greedy tree of the given depth, by plain recursion.
Weight greedy_correct(const Dataset& d, const std::vector<std::size_t>& rows, int depth) {
  std::vector<Weight> c(d.num_classes(), 0);
  for (auto p : rows) c[d.row(p).target] += d.row(p).weight;
  const Weight majority = rows.empty() ? 0 : *std::max_element(c.begin(), c.end());
  const bool pure = std::count_if(c.begin(), c.end(), [](Weight x) { return x > 0; }) <= 1;
  if (depth == 0 || pure) return majority;
  const auto s = exhaustive_split(d, rows);
  if (!s) return majority;
  std::vector<std::size_t> l, r;
  for (auto p : rows) (d.row(p).features[s->first] <= s->second ? l : r).push_back(p);
  return greedy_correct(d, l, depth - 1) + greedy_correct(d, r, depth - 1);
}

std::vector<std::size_t> all_rows(const Dataset& d) {
  std::vector<std::size_t> v(d.size());
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

TEST(BestGiniSplit, UniqueMidpoint) {
  const Dataset d = make({{0}, {1}}, {0, 1});
  const auto s = best_gini_split(d, all_rows(d));
  ASSERT_TRUE(s);
  EXPECT_EQ(s->feature, 0);
  EXPECT_DOUBLE_EQ(s->threshold, 0.5);
}

TEST(BestGiniSplit, IdenticalRowsGiveNone) {
  const Dataset d = make({{1, 2}, {1, 2}, {1, 2}}, {0, 1, 0});
  EXPECT_FALSE(best_gini_split(d, all_rows(d)).has_value());
}

TEST(BestGiniSplit, EightRowExhaustive) {
  const Dataset d = make({{1, 5}, {2, 3}, {3, 8}, {4, 1}, {5, 7}, {6, 2}, {7, 6}, {8, 4}},
                         {0, 0, 1, 0, 1, 0, 1, 1});
  const auto s = best_gini_split(d, all_rows(d));
  const auto o = exhaustive_split(d, all_rows(d));
  ASSERT_TRUE(s && o);
  EXPECT_EQ(s->feature, o->first);
  EXPECT_DOUBLE_EQ(s->threshold, o->second);
}

TEST(BestGiniSplit, RandomAgainstExhaustive) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const Dataset d = random_dataset(seed, 8 + seed % 20, 3, 6, 2 + seed % 2);
    const auto s = best_gini_split(d, all_rows(d));
    const auto o = exhaustive_split(d, all_rows(d));
    ASSERT_EQ(s.has_value(), o.has_value());
    if (!s) continue;
    EXPECT_EQ(s->feature, o->first) << seed;
    EXPECT_DOUBLE_EQ(s->threshold, o->second) << seed;
  }
}

TEST(FitGreedy, SeparableDepthOne) {
  const Dataset d = make({{1, 0}, {2, 1}, {3, 0}, {7, 1}, {8, 0}, {9, 1}}, {0, 0, 0, 1, 1, 1});
  const DecisionTree t = fit_greedy(d, 1);
  const auto s = best_gini_split(d, all_rows(d));
  EXPECT_EQ(t.node_splits[0].feature, s->feature);
  EXPECT_DOUBLE_EQ(t.node_splits[0].threshold, s->threshold);
  EXPECT_EQ(t.leaf_targets, (std::vector<int>{0, 1}));
  EXPECT_DOUBLE_EQ(accuracy(t, d), 1.0);
}

TEST(FitGreedy, PureDatasetPadded) {
  const Dataset d = make({{1}, {2}, {3}}, {1, 1, 1});
  const DecisionTree t = fit_greedy(d, 2);
  EXPECT_EQ(t.node_splits.size(), 3u);
  EXPECT_EQ(t.leaf_targets.size(), 4u);
  EXPECT_DOUBLE_EQ(accuracy(t, d), 1.0);
}

TEST(FitGreedy, TwelveRowRecursionOracle) {
  const Dataset d = make({{1, 4}, {2, 2}, {2, 7}, {3, 5}, {4, 1}, {5, 8}, {6, 3}, {6, 6}, {7, 2},
                          {8, 9}, {9, 4}, {9, 7}},
                         {0, 1, 0, 1, 1, 0, 1, 0, 0, 1, 1, 0});
  const DecisionTree t = fit_greedy(d, 2);
  EXPECT_EQ(weighted_correct(t, d), greedy_correct(d, all_rows(d), 2));
}

TEST(FitGreedy, RandomRecursionOracle) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Dataset d = random_dataset(100 + seed, 30, 3, 5, 3);
    for (int k = 1; k <= 3; ++k) {
      EXPECT_EQ(weighted_correct(fit_greedy(d, k), d), greedy_correct(d, all_rows(d), k))
          << seed << ' ' << k;
    }
  }
}

TEST(ThresholdSampling, BudgetFormula) {
  EXPECT_EQ(candidates_per_node(4, true), 10);
  EXPECT_EQ(candidates_per_node(4, false), 6);
  EXPECT_EQ(candidates_per_node(2, true), 50);
  EXPECT_EQ(candidates_per_node(2, false), 33);
}

TEST(ThresholdSampling, ConstantDataset) {
  const Dataset d = make({{3}, {3}, {3}, {3}}, {0, 1, 0, 1});
  const auto res = threshold_sampling(d, 2, 1);
  for (const auto& s : res.candidates.per_node) EXPECT_EQ(s.size(), 1u);
}

TEST(ThresholdSampling, InvariantsAndDeterminism) {
  const Dataset d = random_dataset(42, 80, 4, 10);
  SamplingOptions opt;
  opt.runs = 40;
  opt.extra_runs = 20;
  const auto a = threshold_sampling(d, 3, 9, opt);
  const auto b = threshold_sampling(d, 3, 9, opt);
  EXPECT_EQ(a.candidates.per_node, b.candidates.per_node);
  ASSERT_EQ(a.initial_paths.size(), b.initial_paths.size());
  for (std::size_t i = 0; i < a.initial_paths.size(); ++i)
    EXPECT_TRUE(a.initial_paths[i].same_shape(b.initial_paths[i]));

  const TreeTopology topo(3);
  for (int j = 0; j < topo.num_internal(); ++j) {
    EXPECT_FALSE(a.candidates.per_node[j].empty());
    const auto& g = a.greedy_tree.node_splits[j];
    const auto id = a.candidates.universe.find(g.feature, g.threshold);
    ASSERT_TRUE(id);
    EXPECT_TRUE(a.candidates.contains(j, *id));
    const std::size_t q = candidates_per_node(3, j == 0, opt);
    EXPECT_LE(a.candidates.per_node[j].size(), q + 1);
  }
  // First 2^k paths are the full-data tree's.
  ASSERT_GE(a.initial_paths.size(), 8u);
  for (const Path& p : a.initial_paths) {
    const auto nodes = topo.path_nodes(p.leaf);
    for (std::size_t i = 0; i < nodes.size(); ++i)
      EXPECT_TRUE(a.candidates.contains(nodes[i], p.splits[i]));
  }
  EXPECT_EQ(weighted_correct(a.greedy_tree, d), weighted_correct(fit_greedy(d, 3), d));
}
