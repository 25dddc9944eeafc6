#include <gtest/gtest.h>

#include "cgtree/master.hpp"
#include "cgtree/pricing.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cgtree;

TEST(BruteForceSp, SingleAssignmentEqualsReducedCost) {
  const Dataset d({{0, {1.0}, 0, 1}, {1, {2.0}, 1, 3}, {2, {5.0}, 1, 1}}, 1, 2);
  CandidateSplits c;
  const SplitId a = c.universe.intern(0, 3.0);
  c.per_node = {{a}};
  RestrictedMaster m(d, c, 1, BetaMode::kNone);
  DualSolution s;
  s.alpha = {0.4, 0.0};
  const auto o = oracle::brute_force_sp(d, c.universe, c.per_node, 1, 1, std::nullopt,
                                        fixture::oracle_duals(m, s, 1));
  EXPECT_EQ(o.path.target, 1);
  EXPECT_NEAR(o.reduced_cost, reduced_cost(m, s, o.path), 1e-12);
  EXPECT_NEAR(o.reduced_cost, 3.0 - 0.4, 1e-12);
}

TEST(BruteForceSp, ZeroDualsMaximizeCp) {
  Rng rng(8);
  const Dataset d = fixture::random_dataset(rng, 30, 2, 4, 2);
  const auto cand = fixture::random_candidates(rng, 2, 2, 4, 3);
  const auto o = oracle::brute_force_sp(d, cand.universe, cand.per_node, 2, 5, std::nullopt, {});
  const TreeTopology topo(2);
  Weight best = 0;
  for (SplitId a : cand.per_node[0])
    for (SplitId b : cand.per_node[2])
      for (int t = 0; t < 2; ++t)
        best = std::max(best, path_correct_predictions(Path{5, {a, b}, t, 0}, d, topo, cand.universe));
  EXPECT_DOUBLE_EQ(o.reduced_cost, double(best));
}

TEST(BruteForceSp, SizeGuard) {
  CandidateSplits c;
  c.per_node.resize(7);
  for (int j = 0; j < 7; ++j)
    for (int i = 0; i < 30; ++i) c.per_node[j].push_back(c.universe.intern(j, i + 0.5));
  const Dataset d({{0, std::vector<double>(7, 0.0), 0, 1}, {1, std::vector<double>(7, 1.0), 1, 1}}, 7, 2);
  EXPECT_THROW(oracle::brute_force_sp(d, c.universe, c.per_node, 3, 7, std::nullopt, {}),
               oracle::SizeGuardError);
}

TEST(BruteForceSeparation, Examples) {
  SplitUniverse S;
  const SplitId a = S.intern(0, 1.0);
  EXPECT_EQ(oracle::brute_force_separation({}, S, 1), 0.0);
  const std::vector<oracle::WeightedPath> one{{{1, {a}, 0, 0}, 0.4}};
  EXPECT_DOUBLE_EQ(oracle::brute_force_separation(one, S, 1), 0.4);
}

TEST(BruteForceSeparation, SizeGuard) {
  SplitUniverse S;
  for (int f = 0; f < 6; ++f)
    for (int i = 0; i < 9; ++i) S.intern(f, i);
  EXPECT_THROW(oracle::brute_force_separation({}, S, 6), oracle::SizeGuardError);
}

TEST(BruteForceTree, UniqueTreeAndPure) {
  const Dataset d({{0, {1.0}, 0, 2}, {1, {2.0}, 1, 1}, {2, {5.0}, 1, 1}}, 1, 2);
  CandidateSplits c;
  const SplitId a = c.universe.intern(0, 1.5);
  c.per_node = {{a}};
  DecisionTree t;
  t.depth = 1;
  t.node_splits = {c.universe[a]};
  t.leaf_targets = {0, 1};
  EXPECT_EQ(oracle::brute_force_tree_optimum(d, c.universe, c.per_node, 1), weighted_correct(t, d));

  const Dataset pure({{0, {1.0}, 1, 3}, {1, {2.0}, 1, 1}}, 1, 2);
  EXPECT_EQ(oracle::brute_force_tree_optimum(pure, c.universe, c.per_node, 1), 4);
}

TEST(BruteForceTree, SizeGuard) {
  CandidateSplits c;
  c.per_node.resize(3);
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 50; ++i) c.per_node[j].push_back(c.universe.intern(0, i + 0.5));
  const Dataset d({{0, {0.0}, 0, 1}, {1, {1.0}, 1, 1}}, 1, 2);
  EXPECT_THROW(oracle::brute_force_tree_optimum(d, c.universe, c.per_node, 2), oracle::SizeGuardError);
}
