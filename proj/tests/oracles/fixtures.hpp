#pragma once

// Seeded random instances shared by unit tests and the acceptance runner.

#include <cstdint>
#include <optional>
#include <vector>

#include "cgtree/cuts.hpp"
#include "cgtree/dataset.hpp"
#include "cgtree/greedy.hpp"
#include "cgtree/master.hpp"
#include "cgtree/rng.hpp"
#include "oracles.hpp"

namespace fixture {

double uniform(cgtree::Rng& rng, double lo, double hi);

// Integer-valued features in 0..levels-1, uniform targets.
cgtree::Dataset random_dataset(cgtree::Rng& rng, std::size_t rows, std::size_t features, int levels,
                               int classes);

// Thresholds at half-integers so every split separates some grid values.
cgtree::CandidateSplits random_candidates(cgtree::Rng& rng, int depth, std::size_t features,
                                          int levels, std::size_t max_per_node);

// Random path over the candidate sets.
cgtree::Path random_path(cgtree::Rng& rng, const cgtree::CandidateSplits& cand,
                         const cgtree::TreeTopology& topo, int classes);

// Consistent branch pattern obtained from a random grid point.
cgtree::BranchPattern random_pattern(cgtree::Rng& rng, const cgtree::SplitUniverse& S,
                                     std::size_t features, int levels);

// Dual snapshot with every alpha, beta and gamma drawn from [lo, hi].
cgtree::DualSolution random_duals(cgtree::Rng& rng, const cgtree::RestrictedMaster& m, double lo,
                                  double hi);

// The same duals in the oracle's vocabulary, for one leaf.
oracle::Duals oracle_duals(const cgtree::RestrictedMaster& m, const cgtree::DualSolution& sol,
                           cgtree::NodeId leaf);

// Solve, add violated cuts (and unlabeled cuts in mode extra), repeat until clean.
// The column pool stays fixed.
cgtree::DualSolution converge_cuts(cgtree::RestrictedMaster& m, double tol = 1e-6);

}  // namespace fixture
