#include "cgtree/tree.hpp"

#include <algorithm>
#include <cmath>

#include "cgtree/errors.hpp"

namespace cgtree {

SplitId SplitUniverse::intern(int feature, double threshold) {
  if (!std::isfinite(threshold)) throw ConfigError("split threshold must be finite");
  auto [it, inserted] = index_.emplace(std::make_pair(feature, threshold),
                                       static_cast<SplitId>(splits_.size()));
  if (inserted) splits_.push_back(SplitCheck{it->second, feature, threshold});
  return it->second;
}

std::optional<SplitId> SplitUniverse::find(int feature, double threshold) const {
  auto it = index_.find({feature, threshold});
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TreeTopology::TreeTopology(int depth) : depth_(depth) {
  if (depth < 1 || depth > 20) throw ConfigError("tree depth must be in 1..20");
}

int TreeTopology::level(NodeId n) {
  int h = 0;
  while (n > 0) {
    n = parent(n);
    ++h;
  }
  return h;
}

void TreeTopology::check_leaf(NodeId leaf) const {
  if (!is_leaf(leaf)) throw ConfigError("invalid leaf id " + std::to_string(leaf));
}

std::vector<NodeId> TreeTopology::path_nodes(NodeId leaf) const {
  check_leaf(leaf);
  std::vector<NodeId> nodes(depth_);
  NodeId c = leaf;
  for (int h = depth_ - 1; h >= 0; --h) {
    c = parent(c);
    nodes[h] = c;
  }
  return nodes;
}

std::vector<Direction> TreeTopology::path_directions(NodeId leaf) const {
  check_leaf(leaf);
  std::vector<Direction> dirs(depth_);
  NodeId c = leaf;
  for (int h = depth_ - 1; h >= 0; --h) {
    // Left children have odd ids.
    dirs[h] = (c % 2 == 1) ? Direction::kLeft : Direction::kRight;
    c = parent(c);
  }
  return dirs;
}

TreeTopology::BranchSets TreeTopology::branch_sets(NodeId leaf) const {
  BranchSets out;
  const auto nodes = path_nodes(leaf);
  const auto dirs = path_directions(leaf);
  for (int h = 0; h < depth_; ++h) {
    (dirs[h] == Direction::kLeft ? out.left : out.right).push_back(nodes[h]);
  }
  return out;
}

std::vector<NodeId> TreeTopology::leaves_under(NodeId j) const {
  NodeId lo = j, hi = j;
  while (!is_leaf(lo)) {
    lo = left_child(lo);
    hi = right_child(hi);
  }
  std::vector<NodeId> out;
  for (NodeId l = lo; l <= hi; ++l) out.push_back(l);
  return out;
}

bool features_follow_path(std::span<const double> features, const Path& p,
                          const TreeTopology& topo, const SplitUniverse& S) {
  const auto dirs = topo.path_directions(p.leaf);
  for (std::size_t h = 0; h < dirs.size(); ++h) {
    if (branch(features, S[p.splits[h]]) != dirs[h]) return false;
  }
  return true;
}

bool row_follows_path(const Row& r, const Path& p, const TreeTopology& topo,
                      const SplitUniverse& S) {
  return features_follow_path(r.features, p, topo, S);
}

Weight path_correct_predictions(const Path& p, const Dataset& d, const TreeTopology& topo,
                                const SplitUniverse& S) {
  Weight cp = 0;
  for (const Row& r : d.rows()) {
    if (r.target == p.target && row_follows_path(r, p, topo, S)) cp += r.weight;
  }
  return cp;
}

NodeId DecisionTree::route(std::span<const double> features) const {
  const TreeTopology topo(depth);
  NodeId n = 0;
  while (!topo.is_leaf(n)) {
    n = branch(features, node_splits[n]) == Direction::kLeft ? TreeTopology::left_child(n)
                                                              : TreeTopology::right_child(n);
  }
  return n;
}

int DecisionTree::predict(std::span<const double> features) const {
  return leaf_targets[route(features) - ((1 << depth) - 1)];
}

std::vector<Path> DecisionTree::paths(const SplitUniverse& S) const {
  const TreeTopology topo(depth);
  std::vector<Path> out;
  for (int li = 0; li < topo.num_leaves(); ++li) {
    Path p;
    p.leaf = topo.leaf_at(li);
    p.target = leaf_targets[li];
    for (NodeId j : topo.path_nodes(p.leaf)) {
      auto id = S.find(node_splits[j].feature, node_splits[j].threshold);
      if (!id) throw ConfigError("tree split not present in the split universe");
      p.splits.push_back(*id);
    }
    out.push_back(std::move(p));
  }
  return out;
}

Weight weighted_correct(const DecisionTree& t, const Dataset& d) {
  Weight w = 0;
  for (const Row& r : d.rows()) {
    if (t.predict(r) == r.target) w += r.weight;
  }
  return w;
}

double accuracy(const DecisionTree& t, const Dataset& d) {
  const Weight total = d.total_weight();
  if (total == 0) return 0.0;
  return static_cast<double>(weighted_correct(t, d)) / static_cast<double>(total);
}

int majority_class(const Dataset& d, std::span<const std::size_t> positions) {
  std::vector<Weight> tally(std::max<std::size_t>(d.num_classes(), 1), 0);
  for (std::size_t p : positions) tally[d.row(p).target] += d.row(p).weight;
  return static_cast<int>(std::max_element(tally.begin(), tally.end()) - tally.begin());
}

}  // namespace cgtree
