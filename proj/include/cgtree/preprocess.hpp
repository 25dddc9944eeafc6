#pragma once

#include <vector>

#include "cgtree/dataset.hpp"
#include "cgtree/greedy.hpp"
#include "cgtree/tree.hpp"

namespace cgtree {

// reachable[n] for every node n (internal and leaf): some assignment of candidate
// splits to the ancestors of n routes the row to n.
std::vector<bool> reachable_nodes(const Row& r, const CandidateSplits& cand,
                                  const TreeTopology& topo);

// Collapses rows with the same target, the same reachable set and the same branch
// on every candidate split of every reachable internal node. The representative
// is the lowest-id row of each group; its weight becomes the group's total.
Dataset merge_duplicate_rows(const Dataset& d, const CandidateSplits& cand,
                             const TreeTopology& topo);

}  // namespace cgtree
