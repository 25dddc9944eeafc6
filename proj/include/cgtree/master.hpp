#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "cgtree/cuts.hpp"
#include "cgtree/dataset.hpp"
#include "cgtree/greedy.hpp"
#include "cgtree/simplex.hpp"
#include "cgtree/tree.hpp"

namespace cgtree {

// Snapshot of one restricted-master LP solve. Immutable once returned.
struct DualSolution {
  lp::Status status = lp::Status::kOptimal;
  double objective = 0.0;
  std::vector<double> alpha;  // per leaf index
  std::vector<double> beta;   // per cut
  std::vector<double> x;      // per column
  std::map<std::pair<NodeId, SplitId>, double> rho;
  lp::Certificate certificate;

  // gamma_{l,j,a} for the ancestor of `leaf_index` at `level`; 0 for absent rows.
  double gamma(int leaf_index, int level, SplitId a) const;

  int depth = 0;
  std::size_t universe_size = 0;
  std::vector<double> gamma_table;  // [(leaf_index * depth + level) * |S| + a]
};

struct IntegerSolution {
  DecisionTree tree;
  Weight objective = 0;
  double bound = 0.0;                // valid upper bound on the pooled integer optimum
  bool complete = false;             // search finished within budget
  long nodes = 0;
  std::vector<int> selected;         // one column per leaf index
  std::vector<SplitId> node_assignment;  // rho_{j,a} = 1 split per internal node
};

// Restricted master LP over path columns:
//   max sum CP(p) x_p
//   sum_{p in DP_l} x_p = 1                          per leaf
//   sum_{p in DP_l : s_p(j) = a} x_p - rho_{j,a} = 0 per (l, j, a)
//   sum_{p : r follows p} x_p (<=, >=, =) 1          per active beta cut
// Consistency rows for (j, a) are created for every leaf under j as soon as any
// column uses split a at node j, so a split chosen at j is forced on all of them.
//
// Holds references to the dataset and candidates; both must outlive the master.
class RestrictedMaster {
 public:
  RestrictedMaster(const Dataset& rows, const CandidateSplits& cand, int depth, BetaMode mode);

  const TreeTopology& topology() const { return topo_; }
  const CandidateSplits& candidates() const { return cand_; }
  const Dataset& dataset() const { return data_; }
  BetaMode mode() const { return mode_; }

  // Computes CP(p) on the master's dataset. Returns nullopt for a duplicate
  // (leaf, splits, target); throws ConfigError for a split outside S_j.
  std::optional<int> add_column(Path p);
  const std::vector<Path>& columns() const { return columns_; }
  bool contains(const Path& p) const;

  // Adds a beta cut; returns its index. Labeled-row cuts are unique per row.
  int add_cut(BetaCut cut);
  const std::vector<BetaCut>& cuts() const { return cuts_; }
  bool has_row_cut(std::size_t row) const { return row_cut_[row] >= 0; }
  // Equality cut for every row (mode all).
  void install_all_row_cuts();

  bool cut_covers(const BetaCut& c, const Path& p) const;

  DualSolution solve_lp(const lp::SolveLimits& limits = {});

  // Best tree from pooled columns: branch-and-bound over rho with depth-first
  // search, fix-to-1 child first. `hint` seeds the incumbent when its paths are pooled.
  IntegerSolution solve_integer(std::optional<std::chrono::steady_clock::time_point> deadline,
                                const DecisionTree* hint = nullptr);

  std::string lp_dump() const { return lp_.to_lp_format(); }
  const lp::SimplexSolver& lp() const { return lp_; }

 private:
  int rho_column(NodeId j, SplitId a);
  DualSolution snapshot(lp::Status status) const;
  bool try_tree(const std::vector<SplitId>& assignment, IntegerSolution& best) const;

  const Dataset& data_;
  const CandidateSplits& cand_;
  TreeTopology topo_;
  BetaMode mode_;
  lp::SimplexSolver lp_;

  std::vector<Path> columns_;
  std::vector<int> column_lp_;  // column -> LP column
  std::map<std::tuple<NodeId, std::vector<SplitId>, int>, int> column_index_;
  std::vector<int> alpha_row_;  // per leaf index
  std::map<std::pair<NodeId, SplitId>, int> rho_col_;
  std::map<std::tuple<NodeId, NodeId, SplitId>, int> gamma_row_;  // (leaf, node, split)
  std::vector<BetaCut> cuts_;
  std::vector<int> cut_row_;
  std::vector<int> row_cut_;  // dataset row -> cut index or -1
};

// Rows (without a cut yet) whose coverage sum_{p: r follows p} x*_p violates the
// mode's sense by more than tol.
std::vector<BetaCut> violated_row_cuts(const RestrictedMaster& m, const DualSolution& sol,
                                       double tol = 1e-6);

}  // namespace cgtree
