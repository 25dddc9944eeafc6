#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>

#include "cgtree/cuts.hpp"
#include "cgtree/dataset.hpp"
#include "cgtree/pricing.hpp"
#include "cgtree/tree.hpp"

namespace cgtree {

struct TrainConfig {
  int depth = 2;
  double time_limit = 0.0;  // seconds, 0 = none
  BetaMode beta_mode = BetaMode::kUb;
  SubproblemMode sp_mode = SubproblemMode::kMerged;
  bool extra_init = true;
  bool preprocess = false;
  std::uint64_t seed = 1;
  int heuristic_attempts = 100;
  int cut_period = 10;
  double rc_tol = 1e-6;
  double lp_tol = 1e-6;
  int threads = 1;
  std::ostream* log = nullptr;  // one key=value line per iteration when set

  void validate() const;  // throws ConfigError
};

struct TrainStats {
  int iterations = 0;
  long lp_solves = 0;
  long lp_pivots = 0;
  long lp_degenerate_pivots = 0;
  // Worst certificate residuals over every optimal restricted-master solve.
  double lp_primal_residual = 0.0;
  double lp_dual_residual = 0.0;
  double lp_duality_gap = 0.0;
  long columns_initial = 0;
  long columns_heuristic = 0;
  long columns_exact = 0;
  long cuts_labeled = 0;
  long cuts_pseudo = 0;
  long integer_nodes = 0;
  std::size_t rows = 0;         // rows in the master after optional merging
  std::size_t candidates = 0;   // |S|
  double seconds_sampling = 0.0;
  double seconds_preprocess = 0.0;
  double seconds_lp = 0.0;
  double seconds_pricing = 0.0;
  double seconds_cuts = 0.0;
  double seconds_integer = 0.0;
  double seconds_total = 0.0;
};

struct TrainedModel {
  DecisionTree tree;
  double train_accuracy = 0.0;
  double lp_bound = 0.0;      // final restricted-master LP value
  Weight integer_value = 0;   // weighted correct predictions of `tree`
  bool converged = false;     // no improving column and no violated cut remained
  bool optimal = false;       // converged and lp_bound - integer_value <= lp_tol
  bool integer_complete = false;
  DecisionTree greedy_tree;
  double greedy_accuracy = 0.0;
  TrainStats stats;
};

TrainedModel train(const TrainConfig& cfg, const Dataset& d);

}  // namespace cgtree
