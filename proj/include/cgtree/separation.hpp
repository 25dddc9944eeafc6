#pragma once

#include <chrono>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cgtree/cuts.hpp"
#include "cgtree/tree.hpp"

namespace cgtree {

struct ValuedPath {
  Path path;
  double value = 0.0;  // x*_p > 0
};

struct SeparationResult {
  double optimum = 0.0;  // max coverage over all consistent patterns, even when <= 1
  std::vector<std::pair<BranchPattern, double>> cuts;  // coverage > 1 + tol, best first
  bool exhausted = true;  // false when the deadline cut the search short
};

// Searches consistent branch patterns over the split universe for one maximizing
// the summed value of the paths it follows. Every pattern met with coverage above
// 1 + tol is collected (at most `cap`, always including the best).
SeparationResult generate_unlabeled_cuts(
    std::span<const ValuedPath> paths, const SplitUniverse& S, std::size_t num_features,
    double tol = 1e-6, std::size_t cap = 50,
    std::optional<std::chrono::steady_clock::time_point> deadline = std::nullopt);

// Value intervals implied by one direction per split of S. Throws SolverError when
// two splits on a feature disagree (a lower threshold left, a higher one right).
BranchPattern pattern_to_row(std::span<const Direction> psi, const SplitUniverse& S,
                             std::size_t num_features);

}  // namespace cgtree
