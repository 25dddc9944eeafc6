#include "cgtree/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "cgtree/errors.hpp"
#include "cgtree/rng.hpp"

namespace cgtree {

bool CandidateSplits::contains(NodeId j, SplitId a) const {
  const auto& s = per_node.at(j);
  return std::binary_search(s.begin(), s.end(), a);
}

std::size_t CandidateSplits::max_set_size() const {
  std::size_t m = 0;
  for (const auto& s : per_node) m = std::max(m, s.size());
  return m;
}

namespace {

double gini_term(const std::vector<double>& w, double total) {
  if (total <= 0.0) return 0.0;
  double sq = 0.0;
  for (double c : w) sq += (c / total) * (c / total);
  return total * (1.0 - sq);
}

}  // namespace

std::optional<SplitCheck> best_gini_split(const Dataset& d, std::span<const std::size_t> rows) {
  if (rows.empty()) return std::nullopt;
  const std::size_t T = d.num_classes();
  std::vector<double> total(T, 0.0);
  double total_w = 0.0;
  for (std::size_t p : rows) {
    total[d.row(p).target] += static_cast<double>(d.row(p).weight);
    total_w += static_cast<double>(d.row(p).weight);
  }

  std::optional<SplitCheck> best;
  double best_impurity = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> order(rows.begin(), rows.end());
  std::vector<double> left(T), right(T);
  for (std::size_t f = 0; f < d.num_features(); ++f) {
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return d.row(a).features[f] < d.row(b).features[f];
    });
    std::fill(left.begin(), left.end(), 0.0);
    double left_w = 0.0;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      const Row& r = d.row(order[i]);
      left[r.target] += static_cast<double>(r.weight);
      left_w += static_cast<double>(r.weight);
      const double v = r.features[f];
      const double next = d.row(order[i + 1]).features[f];
      if (!(next > v)) continue;
      for (std::size_t t = 0; t < T; ++t) right[t] = total[t] - left[t];
      const double impurity =
          (gini_term(left, left_w) + gini_term(right, total_w - left_w)) / total_w;
      if (impurity < best_impurity - 1e-12) {
        best_impurity = impurity;
        double mid = 0.5 * (v + next);
        // Guard against the midpoint rounding onto the upper value.
        if (!(mid < next)) mid = v;
        best = SplitCheck{-1, static_cast<int>(f), mid};
      }
    }
  }
  return best;
}

namespace {

class GreedyBuilder {
 public:
  GreedyBuilder(const Dataset& d, int depth) : d_(d), topo_(depth) {
    tree_.depth = depth;
    tree_.node_splits.resize(topo_.num_internal());
    tree_.leaf_targets.resize(topo_.num_leaves());
    tree_.class_names = d.class_names();
  }

  DecisionTree build(std::vector<std::size_t> rows) {
    grow(0, std::move(rows), std::nullopt, std::nullopt, 0);
    return std::move(tree_);
  }

 private:
  void grow(NodeId j, std::vector<std::size_t> rows, std::optional<SplitCheck> pad,
            std::optional<SplitCheck> parent_split, int inherited) {
    if (topo_.is_leaf(j)) {
      tree_.leaf_targets[topo_.leaf_index(j)] =
          (pad || rows.empty()) ? inherited : majority_class(d_, rows);
      return;
    }
    SplitCheck split;
    int target = inherited;
    bool padded = pad.has_value();
    if (padded) {
      split = *pad;
    } else {
      if (!rows.empty()) target = majority_class(d_, rows);
      std::optional<SplitCheck> found;
      if (!is_pure(rows)) found = best_gini_split(d_, rows);
      if (found) {
        split = *found;
      } else {
        padded = true;
        split = parent_split ? *parent_split : fallback_split(rows);
      }
    }
    tree_.node_splits[j] = split;
    std::vector<std::size_t> left, right;
    for (std::size_t p : rows) {
      (row_branch(d_.row(p), split) == Direction::kLeft ? left : right).push_back(p);
    }
    std::optional<SplitCheck> child_pad;
    if (padded) child_pad = split;
    grow(TreeTopology::left_child(j), std::move(left), child_pad, split, target);
    grow(TreeTopology::right_child(j), std::move(right), child_pad, split, target);
  }

  bool is_pure(const std::vector<std::size_t>& rows) const {
    for (std::size_t p : rows) {
      if (d_.row(p).target != d_.row(rows.front()).target) return false;
    }
    return true;
  }

  // Sends every row left.
  SplitCheck fallback_split(const std::vector<std::size_t>& rows) const {
    double mx = 0.0;
    bool any = false;
    for (std::size_t p : rows) {
      const double v = d_.row(p).features.empty() ? 0.0 : d_.row(p).features[0];
      mx = any ? std::max(mx, v) : v;
      any = true;
    }
    return SplitCheck{-1, 0, mx};
  }

  const Dataset& d_;
  TreeTopology topo_;
  DecisionTree tree_;
};

}  // namespace

DecisionTree fit_greedy(const Dataset& d, std::span<const std::size_t> rows, int depth) {
  if (d.num_features() == 0) throw DataError("dataset has no features");
  return GreedyBuilder(d, depth).build(std::vector<std::size_t>(rows.begin(), rows.end()));
}

DecisionTree fit_greedy(const Dataset& d, int depth) {
  std::vector<std::size_t> all(d.size());
  std::iota(all.begin(), all.end(), 0);
  return fit_greedy(d, all, depth);
}

int candidates_per_node(int depth, bool root, const SamplingOptions& opt) {
  const int internal = (1 << depth) - 1;
  return (root ? opt.root_budget : opt.other_budget) / internal;
}

SamplingResult threshold_sampling(const Dataset& d, int depth, std::uint64_t seed,
                                  const SamplingOptions& opt) {
  const TreeTopology topo(depth);
  const int internal = topo.num_internal();
  using Key = std::pair<int, double>;

  std::vector<std::map<Key, int>> tally(internal);
  auto subsample_fit = [&](std::uint64_t stream, double frac) {
    Rng rng(Rng::derive(seed, stream));
    const auto count = static_cast<std::size_t>(std::floor(frac * static_cast<double>(d.size())));
    auto rows = rng.sample_without_replacement(d.size(), std::max<std::size_t>(count, 1));
    std::sort(rows.begin(), rows.end());
    return fit_greedy(d, rows, depth);
  };

  for (int run = 0; run < opt.runs; ++run) {
    const DecisionTree t = subsample_fit(static_cast<std::uint64_t>(run), opt.run_fraction);
    for (int j = 0; j < internal; ++j) {
      ++tally[j][{t.node_splits[j].feature, t.node_splits[j].threshold}];
    }
  }

  std::vector<std::vector<Key>> chosen(internal);
  for (int j = 0; j < internal; ++j) {
    std::vector<std::pair<Key, int>> ranked(tally[j].begin(), tally[j].end());
    // std::map order already gives (feature, threshold) ascending; stable sort keeps it on ties.
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    const auto q = static_cast<std::size_t>(candidates_per_node(depth, j == 0, opt));
    for (std::size_t i = 0; i < ranked.size() && i < q; ++i) chosen[j].push_back(ranked[i].first);
  }

  SamplingResult out;
  out.greedy_tree = fit_greedy(d, depth);
  for (int j = 0; j < internal; ++j) {
    const Key k{out.greedy_tree.node_splits[j].feature, out.greedy_tree.node_splits[j].threshold};
    if (std::find(chosen[j].begin(), chosen[j].end(), k) == chosen[j].end()) {
      chosen[j].push_back(k);
    }
  }

  std::vector<Key> all;
  for (const auto& c : chosen) all.insert(all.end(), c.begin(), c.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  auto& cand = out.candidates;
  for (const Key& k : all) cand.universe.intern(k.first, k.second);
  cand.per_node.resize(internal);
  for (int j = 0; j < internal; ++j) {
    for (const Key& k : chosen[j]) cand.per_node[j].push_back(*cand.universe.find(k.first, k.second));
    std::sort(cand.per_node[j].begin(), cand.per_node[j].end());
  }

  for (Path& p : out.greedy_tree.paths(cand.universe)) out.initial_paths.push_back(std::move(p));

  if (opt.extra_init) {
    for (int run = 0; run < opt.extra_runs; ++run) {
      const DecisionTree t =
          subsample_fit(static_cast<std::uint64_t>(opt.runs + run), opt.extra_fraction);
      for (int li = 0; li < topo.num_leaves(); ++li) {
        const NodeId leaf = topo.leaf_at(li);
        Path p;
        p.leaf = leaf;
        p.target = t.leaf_targets[li];
        bool ok = true;
        for (NodeId j : topo.path_nodes(leaf)) {
          auto id = cand.universe.find(t.node_splits[j].feature, t.node_splits[j].threshold);
          if (!id || !cand.contains(j, *id)) {
            ok = false;
            break;
          }
          p.splits.push_back(*id);
        }
        if (!ok) continue;
        const bool dup = std::any_of(out.initial_paths.begin(), out.initial_paths.end(),
                                     [&](const Path& o) { return o.same_shape(p); });
        if (!dup) out.initial_paths.push_back(std::move(p));
      }
    }
  }
  return out;
}

}  // namespace cgtree
