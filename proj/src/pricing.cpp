#include "cgtree/pricing.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <atomic>
#include <future>
#include <limits>

namespace cgtree {

double reduced_cost(const RestrictedMaster& m, const DualSolution& sol, const Path& p) {
  const TreeTopology& topo = m.topology();
  const int li = topo.leaf_index(p.leaf);
  double rc = static_cast<double>(path_correct_predictions(p, m.dataset(), topo,
                                                           m.candidates().universe));
  rc -= sol.alpha[li];
  for (int h = 0; h < topo.depth(); ++h) rc -= sol.gamma(li, h, p.splits[h]);
  const auto& cuts = m.cuts();
  for (std::size_t c = 0; c < cuts.size() && c < sol.beta.size(); ++c) {
    if (m.cut_covers(cuts[c], p)) rc -= sol.beta[c];
  }
  return rc;
}

PricingContext::PricingContext(const RestrictedMaster& m, const DualSolution& sol)
    : m_(m), sol_(sol) {
  const Dataset& d = m.dataset();
  const auto& cuts = m.cuts();
  for (const Row& r : d.rows()) {
    weight_.push_back(static_cast<double>(r.weight));
    target_.push_back(r.target);
    beta_.push_back(0.0);
  }
  std::vector<const BranchPattern*> patterns;
  for (std::size_t c = 0; c < cuts.size(); ++c) {
    const double b = c < sol.beta.size() ? sol.beta[c] : 0.0;
    if (cuts[c].kind == BetaCut::Kind::kLabeledRow) {
      beta_[cuts[c].row] = b;
    } else {
      weight_.push_back(0.0);
      target_.push_back(-1);
      beta_.push_back(b);
      patterns.push_back(&cuts[c].pattern);
    }
  }
  const std::size_t n = weight_.size();
  words_ = (n + 63) / 64;
  all_.assign(words_, 0);
  for (std::size_t i = 0; i < n; ++i) all_[i / 64] |= 1ULL << (i % 64);

  const SplitUniverse& S = m.candidates().universe;
  left_.assign(S.size(), Bits(words_, 0));
  for (std::size_t a = 0; a < S.size(); ++a) {
    Bits& bits = left_[a];
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (row_branch(d.row(i), S[static_cast<SplitId>(a)]) == Direction::kLeft) {
        bits[i / 64] |= 1ULL << (i % 64);
      }
    }
    for (std::size_t k = 0; k < patterns.size(); ++k) {
      const std::size_t i = d.size() + k;
      if (patterns[k]->direction(S[static_cast<SplitId>(a)]) == Direction::kLeft) {
        bits[i / 64] |= 1ULL << (i % 64);
      }
    }
  }
}

void PricingContext::restrict(Bits& reach, SplitId a, Direction dir) const {
  const Bits& l = left_[a];
  if (dir == Direction::kLeft) {
    for (std::size_t w = 0; w < words_; ++w) reach[w] &= l[w];
  } else {
    for (std::size_t w = 0; w < words_; ++w) reach[w] &= ~l[w] & all_[w];
  }
}

PricingContext::Tally PricingContext::tally(const Bits& reach) const {
  Tally t;
  t.by_class.assign(m_.dataset().num_classes(), 0.0);
  for (std::size_t w = 0; w < words_; ++w) {
    std::uint64_t bits = reach[w];
    while (bits) {
      const std::size_t i = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
      bits &= bits - 1;
      if (target_[i] >= 0) t.by_class[target_[i]] += weight_[i];
      t.beta += beta_[i];
    }
  }
  return t;
}

// Upper bound on max_t [sum_{reached, t_r = t} W_r - sum_reached beta_r] over all
// subsets of `reach` that later nodes could leave.
double PricingContext::optimistic(const Bits& reach, std::optional<int> target) const {
  const std::size_t T = m_.dataset().num_classes();
  std::vector<double> pos(T, 0.0), neg(T, 0.0);
  double neg_total = 0.0;
  for (std::size_t w = 0; w < words_; ++w) {
    std::uint64_t bits = reach[w];
    while (bits) {
      const std::size_t i = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
      bits &= bits - 1;
      const double nb = std::max(0.0, -beta_[i]);
      neg_total += nb;
      if (target_[i] >= 0) {
        pos[target_[i]] += std::max(0.0, weight_[i] - beta_[i]);
        neg[target_[i]] += nb;
      }
    }
  }
  if (target) return pos[*target] + neg_total - neg[*target];
  double best = neg_total;
  for (std::size_t t = 0; t < T; ++t) best = std::max(best, pos[t] + neg_total - neg[t]);
  return best;
}

PricedPath PricingContext::best_path(NodeId leaf, std::optional<int> target) const {
  const TreeTopology& topo = m_.topology();
  const CandidateSplits& cand = m_.candidates();
  const int li = topo.leaf_index(leaf);
  const auto nodes = topo.path_nodes(leaf);
  const auto dirs = topo.path_directions(leaf);
  const int k = topo.depth();

  // Most favourable gamma contribution still available from level h onward.
  std::vector<double> gamma_slack(k + 1, 0.0);
  for (int h = k - 1; h >= 0; --h) {
    double best = -std::numeric_limits<double>::infinity();
    for (SplitId a : cand.per_node[nodes[h]]) best = std::max(best, -sol_.gamma(li, h, a));
    gamma_slack[h] = gamma_slack[h + 1] + best;
  }

  PricedPath best;
  best.reduced_cost = -std::numeric_limits<double>::infinity();
  std::vector<SplitId> splits(k);
  std::vector<Bits> reach(k + 1);
  reach[0] = all_;

  auto dfs = [&](auto&& self, int h, double dual_sum) -> void {
    if (h == k) {
      const Tally t = tally(reach[k]);
      int tgt;
      if (target) {
        tgt = *target;
      } else {
        tgt = static_cast<int>(std::max_element(t.by_class.begin(), t.by_class.end()) -
                               t.by_class.begin());
      }
      const double value = t.by_class[tgt] - t.beta - dual_sum;
      if (value > best.reduced_cost) {
        best.reduced_cost = value;
        best.path.leaf = leaf;
        best.path.splits = splits;
        best.path.target = tgt;
        best.path.correct = static_cast<Weight>(std::llround(t.by_class[tgt]));
      }
      return;
    }
    if (std::isfinite(best.reduced_cost) &&
        optimistic(reach[h], target) - dual_sum + gamma_slack[h] <= best.reduced_cost) {
      return;
    }
    for (SplitId a : cand.per_node[nodes[h]]) {
      splits[h] = a;
      reach[h + 1] = reach[h];
      restrict(reach[h + 1], a, dirs[h]);
      self(self, h + 1, dual_sum + sol_.gamma(li, h, a));
    }
  };
  dfs(dfs, 0, sol_.alpha[li]);
  return best;
}

std::optional<PricedPath> solve_sp_merged(const PricingContext& ctx, NodeId leaf, double tol) {
  PricedPath p = ctx.best_path(leaf);
  if (p.reduced_cost <= tol) return std::nullopt;
  return p;
}

std::optional<PricedPath> solve_sp_original(const PricingContext& ctx, NodeId leaf, int target,
                                            double tol) {
  PricedPath p = ctx.best_path(leaf, target);
  if (p.reduced_cost <= tol) return std::nullopt;
  return p;
}

std::vector<PricedPath> exact_pricing(const PricingContext& ctx, SubproblemMode mode, double tol,
                                      int threads) {
  const TreeTopology& topo = ctx.master().topology();
  struct Job {
    NodeId leaf;
    std::optional<int> target;
  };
  std::vector<Job> jobs;
  for (int li = 0; li < topo.num_leaves(); ++li) {
    if (mode == SubproblemMode::kMerged) {
      jobs.push_back({topo.leaf_at(li), std::nullopt});
    } else {
      for (int t = 0; t < static_cast<int>(ctx.master().dataset().num_classes()); ++t) {
        jobs.push_back({topo.leaf_at(li), t});
      }
    }
  }
  std::vector<std::optional<PricedPath>> results(jobs.size());
  auto run = [&](std::size_t i) {
    results[i] = jobs[i].target ? solve_sp_original(ctx, jobs[i].leaf, *jobs[i].target, tol)
                                : solve_sp_merged(ctx, jobs[i].leaf, tol);
  };
  if (threads <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) run(i);
  } else {
    std::vector<std::future<void>> workers;
    std::atomic<std::size_t> next{0};
    for (int w = 0; w < threads; ++w) {
      workers.push_back(std::async(std::launch::async, [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) run(i);
      }));
    }
    for (auto& f : workers) f.get();
  }

  std::vector<PricedPath> out;
  for (int li = 0; li < topo.num_leaves(); ++li) {
    std::vector<PricedPath> leaf_paths;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (jobs[i].leaf != topo.leaf_at(li) || !results[i]) continue;
      if (ctx.master().contains(results[i]->path)) continue;
      leaf_paths.push_back(*results[i]);
    }
    std::stable_sort(leaf_paths.begin(), leaf_paths.end(),
                     [](const auto& a, const auto& b) { return a.reduced_cost > b.reduced_cost; });
    for (auto& p : leaf_paths) out.push_back(std::move(p));
  }
  return out;
}

std::vector<PricedPath> heuristic_pricing(const PricingContext& ctx, Rng& rng, int attempts,
                                          double tol) {
  std::vector<PricedPath> kept;
  const RestrictedMaster& m = ctx.master();
  const TreeTopology& topo = m.topology();
  const CandidateSplits& cand = m.candidates();
  const DualSolution& sol = ctx.duals();
  for (int attempt = 0; attempt < attempts; ++attempt) {
    const int li = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(topo.num_leaves())));
    const NodeId leaf = topo.leaf_at(li);
    const auto nodes = topo.path_nodes(leaf);
    const auto dirs = topo.path_directions(leaf);
    Path p;
    p.leaf = leaf;
    PricingContext::Bits reach = ctx.all_;
    double dual_sum = sol.alpha[li];
    bool ok = true;
    for (std::size_t h = 0; h < nodes.size(); ++h) {
      std::vector<SplitId> options;
      for (SplitId a : cand.per_node[nodes[h]]) {
        if (std::find(p.splits.begin(), p.splits.end(), a) == p.splits.end()) options.push_back(a);
      }
      if (options.empty()) {
        ok = false;
        break;
      }
      const SplitId a = options[rng.uniform_index(options.size())];
      p.splits.push_back(a);
      ctx.restrict(reach, a, dirs[h]);
      dual_sum += sol.gamma(li, static_cast<int>(h), a);
    }
    if (!ok) continue;
    const auto t = ctx.tally(reach);
    p.target = static_cast<int>(std::max_element(t.by_class.begin(), t.by_class.end()) -
                                t.by_class.begin());
    p.correct = static_cast<Weight>(std::llround(t.by_class[p.target]));
    const double rc = t.by_class[p.target] - t.beta - dual_sum;
    if (rc <= tol || m.contains(p)) continue;
    const bool seen = std::any_of(kept.begin(), kept.end(),
                                  [&](const PricedPath& q) { return q.path.same_shape(p); });
    if (!seen) kept.push_back({std::move(p), rc});
  }
  return kept;
}

}  // namespace cgtree
