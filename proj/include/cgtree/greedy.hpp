#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cgtree/dataset.hpp"
#include "cgtree/tree.hpp"

namespace cgtree {

// Per-node candidate sets S_j over a shared split universe S.
struct CandidateSplits {
  SplitUniverse universe;
  std::vector<std::vector<SplitId>> per_node;  // sorted ascending, indexed by internal node

  bool contains(NodeId j, SplitId a) const;
  std::size_t max_set_size() const;
};

// Best (feature, threshold) by weighted Gini impurity over midpoints between
// consecutive distinct values. Ties: lower impurity, lower feature, lower threshold.
// Returns nullopt when no feature separates the rows. The result has id -1.
std::optional<SplitCheck> best_gini_split(const Dataset& d, std::span<const std::size_t> rows);

// Greedy top-down tree of the given depth. Branches that turn pure or unsplittable
// early are padded with the parent's split (the root falls back to a split that
// sends every row left) and inherit the node's majority target.
DecisionTree fit_greedy(const Dataset& d, std::span<const std::size_t> rows, int depth);
DecisionTree fit_greedy(const Dataset& d, int depth);

struct SamplingOptions {
  int runs = 300;
  double run_fraction = 0.9;
  int root_budget = 150;
  int other_budget = 100;
  bool extra_init = true;
  int extra_runs = 100;
  double extra_fraction = 0.8;
};

// Number of splits kept per node: floor(budget / |N_int|).
int candidates_per_node(int depth, bool root, const SamplingOptions& opt = {});

struct SamplingResult {
  CandidateSplits candidates;
  std::vector<Path> initial_paths;  // full-data greedy paths first, then extra-init paths
  DecisionTree greedy_tree;         // the full-data fit
};

SamplingResult threshold_sampling(const Dataset& d, int depth, std::uint64_t seed,
                                  const SamplingOptions& opt = {});

}  // namespace cgtree
