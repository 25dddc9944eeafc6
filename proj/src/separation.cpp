#include "cgtree/separation.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "cgtree/errors.hpp"

namespace cgtree {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::vector<double>> thresholds_by_feature(const SplitUniverse& S,
                                                       std::size_t num_features) {
  std::vector<std::vector<double>> t(num_features);
  for (const SplitCheck& a : S.all()) {
    if (a.feature < 0 || static_cast<std::size_t>(a.feature) >= num_features) {
      throw ConfigError("split refers to an unknown feature");
    }
    t[a.feature].push_back(a.threshold);
  }
  for (auto& v : t) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return t;
}

struct Search {
  // Per feature searched: coarse thresholds, and per path the allowed gap range.
  struct Feature {
    int id;
    std::vector<double> cuts;
    std::vector<std::pair<int, int>> range;  // per path, inclusive gap range
  };
  std::vector<Feature> features;
  std::vector<double> value;
  double tol;
  std::size_t cap;
  std::optional<std::chrono::steady_clock::time_point> deadline;

  std::vector<int> gaps;
  double best = -kInf;
  std::vector<std::pair<std::vector<int>, double>> found;
  long visits = 0;
  bool stopped = false;

  void record(double v) {
    if (v > best) best = v;
    if (v <= 1.0 + tol) return;
    if (found.size() < cap) {
      found.emplace_back(gaps, v);
      return;
    }
    auto worst = std::min_element(found.begin(), found.end(),
                                  [](const auto& a, const auto& b) { return a.second < b.second; });
    if (v > worst->second) *worst = {gaps, v};
  }

  void dfs(std::size_t level, const std::vector<int>& alive) {
    if (stopped) return;
    if (deadline && (++visits & 1023) == 0 && std::chrono::steady_clock::now() > *deadline) {
      stopped = true;
      return;
    }
    double bound = 0.0;
    for (int p : alive) bound += value[p];
    if (level == features.size()) {
      record(bound);
      return;
    }
    if (bound <= best && !(found.size() < cap && bound > 1.0 + tol)) return;
    const Feature& f = features[level];
    const int num_gaps = static_cast<int>(f.cuts.size()) + 1;
    std::vector<std::pair<double, int>> order;
    for (int g = 0; g < num_gaps; ++g) {
      double s = 0.0;
      for (int p : alive) {
        if (f.range[p].first <= g && g <= f.range[p].second) s += value[p];
      }
      order.emplace_back(-s, g);
    }
    std::stable_sort(order.begin(), order.end());
    std::vector<int> next;
    for (const auto& [neg, g] : order) {
      next.clear();
      for (int p : alive) {
        if (f.range[p].first <= g && g <= f.range[p].second) next.push_back(p);
      }
      gaps[level] = g;
      dfs(level + 1, next);
      if (stopped) return;
    }
  }
};

}  // namespace

BranchPattern pattern_to_row(std::span<const Direction> psi, const SplitUniverse& S,
                             std::size_t num_features) {
  if (psi.size() != S.size()) throw SolverError("one direction per split is required");
  BranchPattern pat;
  pat.intervals.assign(num_features, {-kInf, kInf});
  for (std::size_t a = 0; a < S.size(); ++a) {
    const SplitCheck& s = S[static_cast<SplitId>(a)];
    auto& [lo, hi] = pat.intervals.at(s.feature);
    if (psi[a] == Direction::kLeft) {
      hi = std::min(hi, s.threshold);
    } else {
      lo = std::max(lo, s.threshold);
    }
  }
  for (const auto& [lo, hi] : pat.intervals) {
    if (lo >= hi) throw SolverError("inconsistent branch pattern");
  }
  return pat;
}

SeparationResult generate_unlabeled_cuts(
    std::span<const ValuedPath> paths, const SplitUniverse& S, std::size_t num_features,
    double tol, std::size_t cap,
    std::optional<std::chrono::steady_clock::time_point> deadline) {
  const auto fine = thresholds_by_feature(S, num_features);

  // Per path and feature: required value interval (lo, hi].
  const std::size_t n = paths.size();
  std::vector<std::vector<std::pair<double, double>>> need(
      n, std::vector<std::pair<double, double>>(num_features, {-kInf, kInf}));
  std::vector<double> involvement(num_features, 0.0);
  std::vector<std::vector<double>> coarse(num_features);
  std::vector<bool> dead(n, false);
  for (std::size_t p = 0; p < n; ++p) {
    const Path& path = paths[p].path;
    const TreeTopology topo(static_cast<int>(path.splits.size()));
    const auto dirs = topo.path_directions(path.leaf);
    for (std::size_t h = 0; h < dirs.size(); ++h) {
      const SplitCheck& a = S[path.splits[h]];
      auto& [lo, hi] = need[p][a.feature];
      if (dirs[h] == Direction::kLeft) {
        hi = std::min(hi, a.threshold);
      } else {
        lo = std::max(lo, a.threshold);
      }
      coarse[a.feature].push_back(a.threshold);
      involvement[a.feature] += paths[p].value;
    }
    for (const auto& [lo, hi] : need[p]) dead[p] = dead[p] || lo >= hi;
  }

  std::vector<int> order(num_features);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return involvement[a] > involvement[b]; });

  Search search;
  search.tol = tol;
  search.cap = cap;
  search.deadline = deadline;
  for (std::size_t p = 0; p < n; ++p) search.value.push_back(paths[p].value);
  for (int f : order) {
    if (coarse[f].empty()) continue;
    Search::Feature feat;
    feat.id = f;
    feat.cuts = coarse[f];
    std::sort(feat.cuts.begin(), feat.cuts.end());
    feat.cuts.erase(std::unique(feat.cuts.begin(), feat.cuts.end()), feat.cuts.end());
    // Gap g is (cuts[g-1], cuts[g]]; a value interval (lo, hi] admits gaps
    // strictly above lo's index and up to hi's index.
    for (std::size_t p = 0; p < n; ++p) {
      const auto& [lo, hi] = need[p][f];
      const int first = lo == -kInf ? 0
                                    : static_cast<int>(std::lower_bound(feat.cuts.begin(),
                                                                        feat.cuts.end(), lo) -
                                                       feat.cuts.begin()) + 1;
      const int last = hi == kInf ? static_cast<int>(feat.cuts.size())
                                  : static_cast<int>(std::lower_bound(feat.cuts.begin(),
                                                                      feat.cuts.end(), hi) -
                                                     feat.cuts.begin());
      feat.range.emplace_back(first, last);
    }
    search.features.push_back(std::move(feat));
  }
  search.gaps.assign(search.features.size(), 0);

  std::vector<int> alive;
  for (std::size_t p = 0; p < n; ++p) {
    if (!dead[p]) alive.push_back(static_cast<int>(p));
  }
  search.dfs(0, alive);

  SeparationResult out;
  out.optimum = std::max(0.0, search.best);
  out.exhausted = !search.stopped;
  std::stable_sort(search.found.begin(), search.found.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  for (const auto& [gaps, v] : search.found) {
    // Narrow each coarse gap to its lowest sub-interval between universe thresholds.
    std::vector<Direction> psi(S.size());
    std::vector<double> upper(num_features, kInf);
    for (std::size_t f = 0; f < num_features; ++f) {
      if (!fine[f].empty()) upper[f] = fine[f].front();
    }
    for (std::size_t i = 0; i < search.features.size(); ++i) {
      const auto& feat = search.features[i];
      const int g = gaps[i];
      if (g == 0) continue;
      const double lo = feat.cuts[g - 1];
      const auto& t = fine[feat.id];
      const auto it = std::upper_bound(t.begin(), t.end(), lo);
      upper[feat.id] = it == t.end() ? kInf : *it;
    }
    for (std::size_t a = 0; a < S.size(); ++a) {
      const SplitCheck& s = S[static_cast<SplitId>(a)];
      psi[a] = upper[s.feature] <= s.threshold ? Direction::kLeft : Direction::kRight;
    }
    out.cuts.emplace_back(pattern_to_row(psi, S, num_features), v);
  }
  return out;
}

}  // namespace cgtree
