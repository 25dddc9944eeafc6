#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cgtree/dataset.hpp"

namespace cgtree {

using NodeId = int;
using SplitId = int;

enum class Direction { kLeft, kRight };

// Univariate test: rows with features[feature] <= threshold branch left.
struct SplitCheck {
  SplitId id = -1;
  int feature = 0;
  double threshold = 0.0;
};

inline Direction branch(std::span<const double> features, const SplitCheck& a) {
  return features[a.feature] <= a.threshold ? Direction::kLeft : Direction::kRight;
}
inline Direction row_branch(const Row& r, const SplitCheck& a) { return branch(r.features, a); }

// Global set S of split checks. Ids are dense and (feature, threshold) pairs unique.
class SplitUniverse {
 public:
  // Returns the id of (feature, threshold), adding it if new.
  SplitId intern(int feature, double threshold);
  std::optional<SplitId> find(int feature, double threshold) const;

  const SplitCheck& operator[](SplitId id) const { return splits_[id]; }
  std::size_t size() const { return splits_.size(); }
  const std::vector<SplitCheck>& all() const { return splits_; }

 private:
  std::vector<SplitCheck> splits_;
  std::map<std::pair<int, double>, SplitId> index_;
};

// Complete binary tree of depth k in level order: internal nodes 0..2^k-2,
// leaves 2^k-1..2^(k+1)-2, children of j are 2j+1 (left) and 2j+2 (right).
class TreeTopology {
 public:
  explicit TreeTopology(int depth);

  int depth() const { return depth_; }
  int num_internal() const { return (1 << depth_) - 1; }
  int num_leaves() const { return 1 << depth_; }
  int num_nodes() const { return (2 << depth_) - 1; }
  NodeId first_leaf() const { return num_internal(); }
  bool is_leaf(NodeId n) const { return n >= num_internal() && n < num_nodes(); }
  bool is_internal(NodeId n) const { return n >= 0 && n < num_internal(); }
  int leaf_index(NodeId leaf) const { return leaf - num_internal(); }
  NodeId leaf_at(int index) const { return num_internal() + index; }
  static NodeId left_child(NodeId j) { return 2 * j + 1; }
  static NodeId right_child(NodeId j) { return 2 * j + 2; }
  static NodeId parent(NodeId c) { return (c - 1) / 2; }
  static int level(NodeId n);

  // Root-first internal ancestors of a leaf.
  std::vector<NodeId> path_nodes(NodeId leaf) const;
  // Direction taken at each ancestor (same order as path_nodes).
  std::vector<Direction> path_directions(NodeId leaf) const;

  struct BranchSets {
    std::vector<NodeId> left;   // LC(l): ancestors whose left child is on the path
    std::vector<NodeId> right;  // RC(l)
  };
  BranchSets branch_sets(NodeId leaf) const;

  // Leaves in the subtree rooted at internal node j.
  std::vector<NodeId> leaves_under(NodeId j) const;

 private:
  void check_leaf(NodeId leaf) const;
  int depth_;
};

// A master column: one split per ancestor of `leaf` (root first) and a target class.
struct Path {
  NodeId leaf = 0;
  std::vector<SplitId> splits;
  int target = 0;
  Weight correct = 0;  // CP(p), weighted

  bool same_shape(const Path& o) const {
    return leaf == o.leaf && target == o.target && splits == o.splits;
  }
};

bool features_follow_path(std::span<const double> features, const Path& p,
                          const TreeTopology& topo, const SplitUniverse& S);
bool row_follows_path(const Row& r, const Path& p, const TreeTopology& topo,
                      const SplitUniverse& S);
Weight path_correct_predictions(const Path& p, const Dataset& d, const TreeTopology& topo,
                                const SplitUniverse& S);

// A complete tree: one split per internal node, one target per leaf.
struct DecisionTree {
  int depth = 1;
  std::vector<SplitCheck> node_splits;  // size 2^k - 1, level order
  std::vector<int> leaf_targets;        // size 2^k, leaf index order
  std::vector<std::string> class_names;

  TreeTopology topology() const { return TreeTopology(depth); }
  NodeId route(std::span<const double> features) const;  // leaf reached
  int predict(std::span<const double> features) const;
  int predict(const Row& r) const { return predict(r.features); }

  // The 2^k paths this tree induces; split ids resolved against S.
  std::vector<Path> paths(const SplitUniverse& S) const;
};

double accuracy(const DecisionTree& t, const Dataset& d);
Weight weighted_correct(const DecisionTree& t, const Dataset& d);

// Weighted majority class of the given rows (ties -> lower class index; empty -> 0).
int majority_class(const Dataset& d, std::span<const std::size_t> positions);

}  // namespace cgtree
