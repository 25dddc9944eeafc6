#include "cgtree/master.hpp"

#include <algorithm>
#include <cmath>

#include "cgtree/errors.hpp"

namespace cgtree {

double DualSolution::gamma(int leaf_index, int level, SplitId a) const {
  if (gamma_table.empty()) return 0.0;
  return gamma_table[(static_cast<std::size_t>(leaf_index) * depth + level) * universe_size + a];
}

RestrictedMaster::RestrictedMaster(const Dataset& rows, const CandidateSplits& cand, int depth,
                                   BetaMode mode)
    : data_(rows), cand_(cand), topo_(depth), mode_(mode), row_cut_(rows.size(), -1) {
  if (cand_.per_node.size() != static_cast<std::size_t>(topo_.num_internal())) {
    throw ConfigError("candidate sets do not match the tree depth");
  }
  for (int li = 0; li < topo_.num_leaves(); ++li) {
    alpha_row_.push_back(lp_.add_row(lp::RowSense::kEqual, 1.0, {}));
  }
}

bool RestrictedMaster::contains(const Path& p) const {
  return column_index_.count({p.leaf, p.splits, p.target}) > 0;
}

int RestrictedMaster::rho_column(NodeId j, SplitId a) {
  auto it = rho_col_.find({j, a});
  if (it != rho_col_.end()) return it->second;
  std::vector<lp::Entry> entries;
  for (NodeId leaf : topo_.leaves_under(j)) {
    const int row = lp_.add_row(lp::RowSense::kEqual, 0.0, {});
    gamma_row_.emplace(std::make_tuple(leaf, j, a), row);
    entries.emplace_back(row, -1.0);
  }
  const int col = lp_.add_column(0.0, 0.0, lp::kInf, entries);
  rho_col_.emplace(std::make_pair(j, a), col);
  return col;
}

std::optional<int> RestrictedMaster::add_column(Path p) {
  if (!topo_.is_leaf(p.leaf)) throw ConfigError("column has an invalid leaf");
  if (p.splits.size() != static_cast<std::size_t>(topo_.depth())) {
    throw ConfigError("column does not assign one split per ancestor");
  }
  if (p.target < 0 || static_cast<std::size_t>(p.target) >= data_.num_classes()) {
    throw ConfigError("column target out of range");
  }
  const auto nodes = topo_.path_nodes(p.leaf);
  for (std::size_t h = 0; h < nodes.size(); ++h) {
    if (!cand_.contains(nodes[h], p.splits[h])) {
      throw ConfigError("column uses split " + std::to_string(p.splits[h]) +
                        " outside the candidate set of node " + std::to_string(nodes[h]));
    }
  }
  if (contains(p)) return std::nullopt;

  p.correct = path_correct_predictions(p, data_, topo_, cand_.universe);
  std::vector<lp::Entry> entries;
  entries.emplace_back(alpha_row_[topo_.leaf_index(p.leaf)], 1.0);
  for (std::size_t h = 0; h < nodes.size(); ++h) {
    rho_column(nodes[h], p.splits[h]);
    entries.emplace_back(gamma_row_.at({p.leaf, nodes[h], p.splits[h]}), 1.0);
  }
  for (std::size_t c = 0; c < cuts_.size(); ++c) {
    if (cut_covers(cuts_[c], p)) entries.emplace_back(cut_row_[c], 1.0);
  }
  const int id = static_cast<int>(columns_.size());
  column_lp_.push_back(lp_.add_column(static_cast<double>(p.correct), 0.0, lp::kInf, entries));
  column_index_.emplace(std::make_tuple(p.leaf, p.splits, p.target), id);
  columns_.push_back(std::move(p));
  return id;
}

bool RestrictedMaster::cut_covers(const BetaCut& c, const Path& p) const {
  if (c.kind == BetaCut::Kind::kLabeledRow) {
    return row_follows_path(data_.row(c.row), p, topo_, cand_.universe);
  }
  return c.pattern.follows(p, topo_, cand_.universe);
}

int RestrictedMaster::add_cut(BetaCut cut) {
  if (cut.kind == BetaCut::Kind::kLabeledRow) {
    if (cut.row >= data_.size()) throw ConfigError("cut references unknown row");
    if (row_cut_[cut.row] >= 0) return row_cut_[cut.row];
  } else if (cut.pattern.intervals.size() != data_.num_features()) {
    throw ConfigError("pattern cut has the wrong number of features");
  }
  std::vector<lp::Entry> entries;
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (cut_covers(cut, columns_[c])) entries.emplace_back(column_lp_[c], 1.0);
  }
  const int id = static_cast<int>(cuts_.size());
  cut_row_.push_back(lp_.add_row(cut.sense, 1.0, entries));
  if (cut.kind == BetaCut::Kind::kLabeledRow) row_cut_[cut.row] = id;
  cuts_.push_back(std::move(cut));
  return id;
}

void RestrictedMaster::install_all_row_cuts() {
  for (std::size_t r = 0; r < data_.size(); ++r) {
    BetaCut c;
    c.kind = BetaCut::Kind::kLabeledRow;
    c.row = r;
    c.sense = lp::RowSense::kEqual;
    c.origin = BetaCut::Origin::kInitial;
    add_cut(std::move(c));
  }
}

DualSolution RestrictedMaster::snapshot(lp::Status status) const {
  DualSolution s;
  s.status = status;
  s.objective = lp_.objective();
  for (int row : alpha_row_) s.alpha.push_back(lp_.dual(row));
  for (int row : cut_row_) s.beta.push_back(lp_.dual(row));
  for (int col : column_lp_) s.x.push_back(lp_.value(col));
  for (const auto& [key, col] : rho_col_) s.rho.emplace(key, lp_.value(col));
  s.depth = topo_.depth();
  s.universe_size = cand_.universe.size();
  s.gamma_table.assign(static_cast<std::size_t>(topo_.num_leaves()) * s.depth * s.universe_size,
                       0.0);
  for (const auto& [key, row] : gamma_row_) {
    const auto& [leaf, node, split] = key;
    const int level = TreeTopology::level(node);
    s.gamma_table[(static_cast<std::size_t>(topo_.leaf_index(leaf)) * s.depth + level) *
                      s.universe_size +
                  split] = lp_.dual(row);
  }
  s.certificate = lp_.verify();
  return s;
}

DualSolution RestrictedMaster::solve_lp(const lp::SolveLimits& limits) {
  std::vector<bool> covered(topo_.num_leaves(), false);
  for (const Path& p : columns_) covered[topo_.leaf_index(p.leaf)] = true;
  if (std::find(covered.begin(), covered.end(), false) != covered.end()) {
    throw SolverError("restricted master needs at least one column per leaf");
  }
  const lp::Status st = lp_.solve(limits);
  if (st == lp::Status::kInfeasible) throw SolverError("restricted master LP is infeasible");
  if (st == lp::Status::kUnbounded) throw SolverError("restricted master LP is unbounded");
  return snapshot(st);
}

bool RestrictedMaster::try_tree(const std::vector<SplitId>& assignment,
                                IntegerSolution& best) const {
  std::vector<int> selected;
  Weight value = 0;
  for (int li = 0; li < topo_.num_leaves(); ++li) {
    const NodeId leaf = topo_.leaf_at(li);
    std::vector<SplitId> splits;
    for (NodeId j : topo_.path_nodes(leaf)) splits.push_back(assignment[j]);
    int pick = -1;
    for (int t = 0; t < static_cast<int>(data_.num_classes()); ++t) {
      auto it = column_index_.find({leaf, splits, t});
      if (it == column_index_.end()) continue;
      if (pick < 0 || columns_[it->second].correct > columns_[pick].correct ||
          (columns_[it->second].correct == columns_[pick].correct && it->second < pick)) {
        pick = it->second;
      }
    }
    if (pick < 0) return false;
    selected.push_back(pick);
    value += columns_[pick].correct;
  }
  const bool better = value > best.objective ||
                      (value == best.objective && assignment < best.node_assignment);
  if (!better) return false;
  best.objective = value;
  best.selected = std::move(selected);
  best.node_assignment = assignment;
  return true;
}

IntegerSolution RestrictedMaster::solve_integer(
    std::optional<std::chrono::steady_clock::time_point> deadline, const DecisionTree* hint) {
  IntegerSolution best;
  best.objective = -1;
  const int internal = topo_.num_internal();

  if (hint != nullptr && hint->depth == topo_.depth()) {
    std::vector<SplitId> assignment(internal, -1);
    bool ok = true;
    for (NodeId j = 0; j < internal && ok; ++j) {
      auto id = cand_.universe.find(hint->node_splits[j].feature, hint->node_splits[j].threshold);
      ok = id && cand_.contains(j, *id);
      if (ok) assignment[j] = *id;
    }
    if (ok) try_tree(assignment, best);
  }

  std::vector<std::optional<SplitId>> fixed(internal);
  std::vector<std::vector<SplitId>> banned(internal);
  std::vector<double> current_ub(columns_.size(), lp::kInf);
  std::vector<std::vector<NodeId>> nodes_of_leaf(topo_.num_leaves());
  for (int li = 0; li < topo_.num_leaves(); ++li) nodes_of_leaf[li] = topo_.path_nodes(topo_.leaf_at(li));

  auto apply_fixings = [&] {
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      const Path& p = columns_[c];
      const auto& nodes = nodes_of_leaf[topo_.leaf_index(p.leaf)];
      bool allowed = true;
      for (std::size_t h = 0; h < nodes.size() && allowed; ++h) {
        const NodeId j = nodes[h];
        if (fixed[j] && *fixed[j] != p.splits[h]) allowed = false;
        const auto& b = banned[j];
        if (std::find(b.begin(), b.end(), p.splits[h]) != b.end()) allowed = false;
      }
      const double ub = allowed ? lp::kInf : 0.0;
      if (ub != current_ub[c]) {
        lp_.set_column_bounds(column_lp_[c], 0.0, ub);
        current_ub[c] = ub;
      }
    }
  };

  bool complete = true;
  double root_bound = lp::kInf;
  auto out_of_time = [&] {
    return deadline && std::chrono::steady_clock::now() >= *deadline;
  };

  auto dfs = [&](auto&& self) -> void {
    ++best.nodes;
    if (out_of_time()) {
      complete = false;
      return;
    }
    apply_fixings();
    lp::SolveLimits limits;
    limits.deadline = deadline;
    const lp::Status st = lp_.solve(limits);
    if (st == lp::Status::kInfeasible) return;
    if (st != lp::Status::kOptimal) {
      complete = false;
      return;
    }
    const double z = lp_.objective();
    if (!std::isfinite(root_bound)) root_bound = z;
    auto pruned = [&] {
      return best.objective >= 0 && z < static_cast<double>(best.objective) + 1.0 - 1e-6;
    };
    if (pruned()) return;

    // Rounding: largest x per leaf, accepted when the picks agree on shared nodes.
    {
      std::vector<int> pick(topo_.num_leaves(), -1);
      std::vector<double> pick_x(topo_.num_leaves(), -1.0);
      for (std::size_t c = 0; c < columns_.size(); ++c) {
        const int li = topo_.leaf_index(columns_[c].leaf);
        const double xv = lp_.value(column_lp_[c]);
        if (xv > pick_x[li] + 1e-9) {
          pick_x[li] = xv;
          pick[li] = static_cast<int>(c);
        }
      }
      std::vector<SplitId> assignment(internal, -1);
      bool consistent = true;
      for (int li = 0; li < topo_.num_leaves() && consistent; ++li) {
        const auto& nodes = nodes_of_leaf[li];
        for (std::size_t h = 0; h < nodes.size(); ++h) {
          const SplitId a = columns_[pick[li]].splits[h];
          if (assignment[nodes[h]] < 0) {
            assignment[nodes[h]] = a;
          } else if (assignment[nodes[h]] != a) {
            consistent = false;
            break;
          }
        }
      }
      if (consistent) try_tree(assignment, best);
      if (pruned()) return;
    }

    std::optional<std::pair<NodeId, SplitId>> branch;
    double best_frac = 1e-6;
    std::vector<SplitId> assignment(internal, -1);
    for (const auto& [key, col] : rho_col_) {
      const double v = lp_.value(col);
      const double frac = std::min(v, 1.0 - v);
      if (frac > best_frac) {
        best_frac = frac;
        branch = key;
      }
      if (v > 1.0 - 1e-6) assignment[key.first] = key.second;
    }
    if (!branch) {
      if (std::find(assignment.begin(), assignment.end(), -1) == assignment.end()) {
        try_tree(assignment, best);
      }
      return;
    }
    const auto [j, a] = *branch;
    fixed[j] = a;
    self(self);
    fixed[j].reset();
    banned[j].push_back(a);
    self(self);
    banned[j].pop_back();
  };
  dfs(dfs);

  // Leave the master LP as it was.
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (current_ub[c] != lp::kInf) lp_.set_column_bounds(column_lp_[c], 0.0, lp::kInf);
  }

  if (best.objective < 0) {
    throw SolverError("integer master found no tree within the budget and no hint was usable");
  }
  best.complete = complete;
  best.bound = complete ? static_cast<double>(best.objective) : root_bound;

  DecisionTree& t = best.tree;
  t.depth = topo_.depth();
  t.class_names = data_.class_names();
  t.node_splits.resize(internal);
  for (NodeId j = 0; j < internal; ++j) t.node_splits[j] = cand_.universe[best.node_assignment[j]];
  t.leaf_targets.resize(topo_.num_leaves());
  for (int li = 0; li < topo_.num_leaves(); ++li) {
    t.leaf_targets[li] = columns_[best.selected[li]].target;
  }
  return best;
}

std::vector<BetaCut> violated_row_cuts(const RestrictedMaster& m, const DualSolution& sol,
                                       double tol) {
  std::vector<BetaCut> out;
  const auto sense = cut_sense(m.mode());
  if (!sense || m.mode() == BetaMode::kAll) return out;
  const Dataset& d = m.dataset();
  std::vector<double> load(d.size(), 0.0);
  const auto& cols = m.columns();
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (sol.x[c] <= 1e-9) continue;
    for (std::size_t r = 0; r < d.size(); ++r) {
      if (m.has_row_cut(r)) continue;
      if (row_follows_path(d.row(r), cols[c], m.topology(), m.candidates().universe)) {
        load[r] += sol.x[c];
      }
    }
  }
  for (std::size_t r = 0; r < d.size(); ++r) {
    if (m.has_row_cut(r)) continue;
    bool violated = false;
    switch (*sense) {
      case lp::RowSense::kLessEqual: violated = load[r] > 1.0 + tol; break;
      case lp::RowSense::kGreaterEqual: violated = load[r] < 1.0 - tol; break;
      case lp::RowSense::kEqual: violated = std::abs(load[r] - 1.0) > tol; break;
    }
    if (!violated) continue;
    BetaCut c;
    c.kind = BetaCut::Kind::kLabeledRow;
    c.row = r;
    c.sense = *sense;
    c.origin = BetaCut::Origin::kInspection;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace cgtree
