#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cgtree/master.hpp"
#include "cgtree/rng.hpp"

namespace cgtree {

struct PricedPath {
  Path path;  // correct = CP(p) on the master's dataset
  double reduced_cost = 0.0;
};

// Reduced cost of any path under a dual snapshot, computed directly:
// CP(p) - alpha_l - sum_j gamma_{l,j,s_p(j)} - sum_{cuts covering p} beta_c.
double reduced_cost(const RestrictedMaster& m, const DualSolution& sol, const Path& p);

// Immutable pricing view of one dual snapshot: every labeled row and every pseudo-row
// cut becomes a pricing row with weight W (0 for pseudo-rows), target (-1 for
// pseudo-rows) and beta (0 when the row has no cut). Branch directions are
// precomputed as one bitset per split.
class PricingContext {
 public:
  PricingContext(const RestrictedMaster& m, const DualSolution& sol);

  const RestrictedMaster& master() const { return m_; }
  const DualSolution& duals() const { return sol_; }

  // Exact maximum reduced cost over all split assignments (and all targets when
  // target is nullopt) for one leaf, regardless of sign.
  PricedPath best_path(NodeId leaf, std::optional<int> target = std::nullopt) const;

  std::size_t num_pricing_rows() const { return weight_.size(); }

 private:
  friend std::vector<PricedPath> heuristic_pricing(const PricingContext&, Rng&, int, double);

  using Bits = std::vector<std::uint64_t>;
  struct Tally {
    std::vector<double> by_class;  // weighted count per class among reached rows
    double beta = 0.0;             // sum of beta over reached rows
  };
  Tally tally(const Bits& reach) const;
  double optimistic(const Bits& reach, std::optional<int> target) const;
  void restrict(Bits& reach, SplitId a, Direction dir) const;

  const RestrictedMaster& m_;
  const DualSolution& sol_;
  std::size_t words_ = 0;
  std::vector<double> weight_;
  std::vector<int> target_;
  std::vector<double> beta_;
  std::vector<Bits> left_;  // per split: rows branching left
  Bits all_;
};

// Model with the target chosen inside the subproblem (one per leaf).
std::optional<PricedPath> solve_sp_merged(const PricingContext& ctx, NodeId leaf,
                                          double tol = 1e-6);
// Model with a fixed target (one per leaf and class).
std::optional<PricedPath> solve_sp_original(const PricingContext& ctx, NodeId leaf, int target,
                                            double tol = 1e-6);

enum class SubproblemMode { kMerged, kOriginal };

// Runs the exact subproblems of every leaf (every leaf and class in original mode),
// optionally on several threads. Results are in leaf order, then by descending
// reduced cost; columns already pooled are dropped.
std::vector<PricedPath> exact_pricing(const PricingContext& ctx, SubproblemMode mode,
                                      double tol = 1e-6, int threads = 1);

// Random paths: uniform leaf, then per node a uniform split not yet used on this
// path; the target maximizes correct weight over the rows reaching the leaf. Keeps
// paths with reduced cost > tol that are neither pooled nor repeated.
std::vector<PricedPath> heuristic_pricing(const PricingContext& ctx, Rng& rng,
                                          int attempts = 100, double tol = 1e-6);

}  // namespace cgtree
