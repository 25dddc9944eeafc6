#include "cgtree/preprocess.hpp"

#include <algorithm>
#include <map>

namespace cgtree {

std::vector<bool> reachable_nodes(const Row& r, const CandidateSplits& cand,
                                  const TreeTopology& topo) {
  std::vector<bool> reach(topo.num_nodes(), false);
  reach[0] = true;
  for (NodeId j = 0; j < topo.num_internal(); ++j) {
    if (!reach[j]) continue;
    for (SplitId a : cand.per_node[j]) {
      if (row_branch(r, cand.universe[a]) == Direction::kLeft) {
        reach[TreeTopology::left_child(j)] = true;
      } else {
        reach[TreeTopology::right_child(j)] = true;
      }
    }
  }
  return reach;
}

Dataset merge_duplicate_rows(const Dataset& d, const CandidateSplits& cand,
                             const TreeTopology& topo) {
  // Key: target, reachable mask, then one bit per candidate of each reachable node.
  std::map<std::vector<std::uint8_t>, std::size_t> groups;
  std::vector<Row> merged;
  std::vector<std::size_t> order(d.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d.row(a).id < d.row(b).id; });

  std::vector<std::uint8_t> key;
  for (std::size_t pos : order) {
    const Row& r = d.row(pos);
    const auto reach = reachable_nodes(r, cand, topo);
    key.clear();
    const auto t = static_cast<std::uint32_t>(r.target);
    for (int b = 0; b < 4; ++b) key.push_back(static_cast<std::uint8_t>(t >> (8 * b)));
    for (bool x : reach) key.push_back(x ? 1 : 0);
    for (NodeId j = 0; j < topo.num_internal(); ++j) {
      if (!reach[j]) continue;
      for (SplitId a : cand.per_node[j]) {
        key.push_back(row_branch(r, cand.universe[a]) == Direction::kLeft ? 0 : 1);
      }
    }
    auto [it, inserted] = groups.emplace(key, merged.size());
    if (inserted) {
      merged.push_back(r);
    } else {
      merged[it->second].weight += r.weight;
    }
  }
  return d.with_rows(std::move(merged));
}

}  // namespace cgtree
