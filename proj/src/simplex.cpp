#include "cgtree/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cgtree/errors.hpp"

namespace cgtree::lp {

const char* to_string(Status s) {
  switch (s) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
    case Status::kIterationLimit: return "iteration_limit";
    case Status::kTimeLimit: return "time_limit";
  }
  return "unknown";
}

int SimplexSolver::add_variable(double cost, double lb, double ub, bool logical, int index) {
  if (lb > ub) throw SolverError("variable lower bound exceeds upper bound");
  const int v = static_cast<int>(cost_.size());
  cost_.push_back(cost);
  lower_.push_back(lb);
  upper_.push_back(ub);
  is_logical_.push_back(logical);
  var_index_.push_back(index);
  basis_pos_.push_back(-1);
  if (std::isfinite(lb)) {
    state_.push_back(VarState::kAtLower);
    x_.push_back(lb);
  } else if (std::isfinite(ub)) {
    state_.push_back(VarState::kAtUpper);
    x_.push_back(ub);
  } else {
    throw SolverError("free variables are not supported");
  }
  return v;
}

int SimplexSolver::add_column(double cost, double lb, double ub, std::span<const Entry> rows) {
  const int col = num_structural_++;
  const int v = add_variable(cost, lb, ub, false, col);
  col_var_.push_back(v);
  auto& entries = col_entries_.emplace_back();
  for (const auto& [row, coef] : rows) {
    if (row < 0 || row >= num_rows()) throw SolverError("column references unknown row");
    if (coef != 0.0) entries.emplace_back(row, coef);
  }
  if (x_[v] != 0.0) values_dirty_ = true;
  return col;
}

int SimplexSolver::add_row(RowSense sense, double rhs, std::span<const Entry> columns) {
  const int row = num_rows();
  rows_.push_back({sense, rhs});
  for (const auto& [col, coef] : columns) {
    if (col < 0 || col >= num_structural_) throw SolverError("row references unknown column");
    if (coef != 0.0) col_entries_[col].emplace_back(row, coef);
  }
  double lb = 0.0, ub = 0.0;
  if (sense == RowSense::kLessEqual) ub = kInf;
  if (sense == RowSense::kGreaterEqual) lb = -kInf;
  const int v = add_variable(0.0, lb, ub, true, row);
  row_var_.push_back(v);
  y_.push_back(0.0);

  // The new logical becomes basic in the new row.
  state_[v] = VarState::kBasic;
  basis_pos_[v] = row;
  basis_.push_back(v);
  x_[v] = rhs - row_activity(row);
  factor_.valid = false;
  return row;
}

void SimplexSolver::set_column_bounds(int col, double lb, double ub) {
  if (lb > ub) throw SolverError("column lower bound exceeds upper bound");
  const int v = col_var_.at(col);
  lower_[v] = lb;
  upper_[v] = ub;
  if (state_[v] == VarState::kBasic) return;
  if (state_[v] == VarState::kAtUpper && std::isfinite(ub)) {
    x_[v] = ub;
  } else if (std::isfinite(lb)) {
    state_[v] = VarState::kAtLower;
    x_[v] = lb;
  } else if (std::isfinite(ub)) {
    state_[v] = VarState::kAtUpper;
    x_[v] = ub;
  } else {
    throw SolverError("free variables are not supported");
  }
  values_dirty_ = true;
}

double SimplexSolver::row_activity(int row) const {
  double a = 0.0;
  for (int c = 0; c < num_structural_; ++c) {
    const double xv = x_[col_var_[c]];
    if (xv == 0.0) continue;
    for (const auto& [r, coef] : col_entries_[c]) {
      if (r == row) a += coef * xv;
    }
  }
  return a;
}

Eigen::SparseMatrix<double> SimplexSolver::basis_matrix() const {
  const int m = num_rows();
  std::vector<Eigen::Triplet<double>> entries;
  for (int i = 0; i < m; ++i) {
    const int v = basis_[i];
    if (is_logical_[v]) {
      entries.emplace_back(var_index_[v], i, 1.0);
    } else {
      for (const auto& [r, coef] : col_entries_[var_index_[v]]) entries.emplace_back(r, i, coef);
    }
  }
  Eigen::SparseMatrix<double> B(m, m);
  B.setFromTriplets(entries.begin(), entries.end());
  B.makeCompressed();
  return B;
}

// Swaps dependent basic columns for the logicals of the rows they leave uncovered.
// Basic logicals cover their own rows, so only the structural columns restricted to
// the remaining rows need a rank test.
bool SimplexSolver::repair_basis(double threshold) {
  const int m = num_rows();
  std::vector<int> free_row(m, -1), structural;
  int rows_left = 0;
  std::vector<bool> covered(m, false);
  for (int i = 0; i < m; ++i) {
    if (is_logical_[basis_[i]]) covered[var_index_[basis_[i]]] = true;
    else structural.push_back(i);
  }
  std::vector<int> row_of;
  for (int r = 0; r < m; ++r) {
    if (!covered[r]) {
      free_row[r] = rows_left++;
      row_of.push_back(r);
    }
  }
  const int n = static_cast<int>(structural.size());
  if (n == 0) return false;
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(rows_left, n);
  for (int k = 0; k < n; ++k) {
    for (const auto& [r, coef] : col_entries_[var_index_[basis_[structural[k]]]]) {
      if (free_row[r] >= 0) S(free_row[r], k) = coef;
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
  lu.setThreshold(threshold);
  const int rank = static_cast<int>(lu.rank());
  if (rank == n) return false;
  // Row k of P*S is row Pinv[k] of S; column k of S*Q is column Q[k].
  const Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> Pinv = lu.permutationP().inverse();
  const auto& P = Pinv.indices();
  const auto& Q = lu.permutationQ().indices();
  for (int k = rank; k < n; ++k) {
    const int pos = structural[Q[k]];
    const int out = basis_[pos];
    const int in = row_var_[row_of[P[k]]];
    basis_pos_[out] = -1;
    if (std::isfinite(lower_[out])) {
      state_[out] = VarState::kAtLower;
      x_[out] = lower_[out];
    } else {
      state_[out] = VarState::kAtUpper;
      x_[out] = upper_[out];
    }
    basis_[pos] = in;
    basis_pos_[in] = pos;
    state_[in] = VarState::kBasic;
  }
  ++stats_.basis_repairs;
  return true;
}

void SimplexSolver::refactor() {
  const int m = num_rows();
  factor_.lu = std::make_unique<Factor::LU>();
  if (m > 0) {
    Eigen::SparseMatrix<double> B = basis_matrix();
    factor_.lu->analyzePattern(B);
    factor_.lu->factorize(B);
    // Near-singular bases get progressively stricter rank tests.
    for (double threshold = 1e-9; factor_.lu->info() != Eigen::Success; threshold *= 100.0) {
      if (threshold > 1e-2) {
        throw SolverError("singular basis during refactorization");
      }
      if (!repair_basis(threshold)) continue;
      B = basis_matrix();
      factor_.lu->analyzePattern(B);
      factor_.lu->factorize(B);
    }
  }
  factor_.etas.clear();
  factor_.valid = true;
  values_dirty_ = true;
  ++stats_.refactorizations;
}

void SimplexSolver::compute_basic_values() {
  const int m = num_rows();
  Eigen::VectorXd rhs(m);
  for (int i = 0; i < m; ++i) rhs[i] = rows_[i].rhs;
  for (int c = 0; c < num_structural_; ++c) {
    const int v = col_var_[c];
    if (state_[v] == VarState::kBasic || x_[v] == 0.0) continue;
    for (const auto& [r, coef] : col_entries_[c]) rhs[r] -= coef * x_[v];
  }
  for (int i = 0; i < m; ++i) {
    const int v = row_var_[i];
    if (state_[v] != VarState::kBasic) rhs[i] -= x_[v];
  }
  Eigen::VectorXd xb = num_rows() > 0 ? Eigen::VectorXd(factor_.lu->solve(rhs)) : rhs;
  for (const Eta& e : factor_.etas) {
    const double p = xb[e.pos] / e.pivot;
    xb[e.pos] = p;
    if (p != 0.0) {
      for (const auto& [i, a] : e.others) xb[i] -= a * p;
    }
  }
  if (!xb.allFinite()) throw SolverError("basis solve produced non-finite values");
  for (int i = 0; i < m; ++i) x_[basis_[i]] = xb[i];
  values_dirty_ = false;
}

void SimplexSolver::btran(Eigen::VectorXd& w) const {
  for (auto it = factor_.etas.rbegin(); it != factor_.etas.rend(); ++it) {
    double s = w[it->pos];
    for (const auto& [i, a] : it->others) s -= w[i] * a;
    w[it->pos] = s / it->pivot;
  }
  if (w.size() > 0) w = factor_.lu->transpose().solve(w);
}

void SimplexSolver::compute_duals(const std::vector<double>& basic_costs) {
  const int m = num_rows();
  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(basic_costs.data(), m);
  btran(w);
  for (int i = 0; i < m; ++i) y_[i] = w[i];
}

double SimplexSolver::pricing_dj(int var, double cost) const {
  if (is_logical_[var]) return cost - y_[var_index_[var]];
  double d = cost;
  for (const auto& [r, coef] : col_entries_[var_index_[var]]) d -= y_[r] * coef;
  return d;
}

void SimplexSolver::column_times_binv(int var, Eigen::VectorXd& out) const {
  const int m = num_rows();
  out.setZero(m);
  if (m == 0) return;
  Eigen::VectorXd a = Eigen::VectorXd::Zero(m);
  if (is_logical_[var]) {
    a[var_index_[var]] = 1.0;
  } else {
    for (const auto& [r, coef] : col_entries_[var_index_[var]]) a[r] += coef;
  }
  out = factor_.lu->solve(a);
  for (const Eta& e : factor_.etas) {
    const double p = out[e.pos] / e.pivot;
    out[e.pos] = p;
    if (p != 0.0) {
      for (const auto& [i, al] : e.others) out[i] -= al * p;
    }
  }
}

void SimplexSolver::pivot(int leave_row, int enter_var, const Eigen::VectorXd& alpha) {
  Eta e{leave_row, alpha[leave_row], {}};
  for (int i = 0; i < alpha.size(); ++i) {
    if (i != leave_row && alpha[i] != 0.0) e.others.emplace_back(i, alpha[i]);
  }
  factor_.etas.push_back(std::move(e));
  const int leave_var = basis_[leave_row];
  basis_pos_[leave_var] = -1;
  basis_[leave_row] = enter_var;
  basis_pos_[enter_var] = leave_row;
  state_[enter_var] = VarState::kBasic;
}

Status SimplexSolver::solve(const SolveLimits& limits) {
  const int m = num_rows();
  if (!factor_.valid) refactor();
  if (values_dirty_) compute_basic_values();

  const int nvars = static_cast<int>(cost_.size());
  std::vector<double> basic_costs(m);
  Eigen::VectorXd alpha(m), rho(m);
  // Phase-2 reduced costs are updated from the pivot row between full
  // recomputations; the Devex weights use the same row.
  std::vector<double> dj(nvars, 0.0), weight(nvars, 1.0);
  bool dj_valid = false;
  long degenerate_run = 0;
  double mark = -kInf;
  bool mark_phase1 = false;
  bool bland = false;
  bool perturbed = false;
  int perturbations_left = kMaxPerturbations;
  std::vector<double> saved_lower, saved_upper;
  std::vector<char> widened;
  std::uint64_t state = 0x2545f4914f6cdd1dULL;

  // Basic variables get their bounds widened by small pseudo-random amounts,
  // and so does every variable entering the basis while perturbed, so ties in
  // the ratio test become unlikely.
  auto widen = [&](int v) {
    if (widened[v]) return;
    widened[v] = 1;
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    const double u = static_cast<double>(state >> 11) * 0x1.0p-53;
    const double delta = kPerturbation * (1.0 + u);
    if (std::isfinite(lower_[v])) lower_[v] -= delta * (1.0 + std::abs(lower_[v]));
    if (std::isfinite(upper_[v])) upper_[v] += delta * (1.0 + std::abs(upper_[v]));
  };
  auto perturb = [&] {
    saved_lower = lower_;
    saved_upper = upper_;
    widened.assign(nvars, 0);
    for (int i = 0; i < m; ++i) widen(basis_[i]);
    perturbed = true;
    --perturbations_left;
    degenerate_run = 0;
    ++stats_.perturbations;
  };
  auto restore = [&] {
    lower_ = std::move(saved_lower);
    upper_ = std::move(saved_upper);
    for (std::size_t v = 0; v < x_.size(); ++v) {
      if (state_[v] == VarState::kAtLower) x_[v] = lower_[v];
      if (state_[v] == VarState::kAtUpper) x_[v] = upper_[v];
    }
    compute_basic_values();
    perturbed = false;
    degenerate_run = 0;
    mark = -kInf;
  };
  // Candidates whose column showed no usable pivot; cleared after every step.
  std::vector<char> rejected(nvars, 0);
  bool any_rejected = false;

  auto update_pricing = [&](int leave, int enter) {
    rho.setZero(m);
    rho[leave] = 1.0;
    btran(rho);
    const double ar = alpha[leave];
    const double wq = weight[enter];
    const double theta = dj_valid ? dj[enter] / ar : 0.0;
    double wmax = 0.0;
    for (int v = 0; v < nvars; ++v) {
      if (state_[v] == VarState::kBasic || v == enter) continue;
      double a = 0.0;
      if (is_logical_[v]) {
        a = rho[var_index_[v]];
      } else {
        for (const auto& [r, coef] : col_entries_[var_index_[v]]) a += rho[r] * coef;
      }
      if (a == 0.0) continue;
      const double ratio = a / ar;
      weight[v] = std::max(weight[v], ratio * ratio * wq);
      wmax = std::max(wmax, weight[v]);
      if (dj_valid) dj[v] -= theta * a;
    }
    const int lv = basis_[leave];
    weight[lv] = std::max(wq / (ar * ar), 1.0);
    if (dj_valid) {
      dj[lv] = -theta;
      dj[enter] = 0.0;
    }
    if (std::max(wmax, weight[lv]) > kDevexReset) std::fill(weight.begin(), weight.end(), 1.0);
  };

  for (long it = 0;; ++it) {
    if (it >= limits.max_iterations) {
      if (perturbed) restore();
      return Status::kIterationLimit;
    }
    if (limits.deadline && (it & 15) == 0 &&
        std::chrono::steady_clock::now() >= *limits.deadline) {
      if (perturbed) restore();
      return Status::kTimeLimit;
    }
    if (static_cast<int>(factor_.etas.size()) >= kRefactorPeriod) {
      refactor();
      compute_basic_values();
      dj_valid = false;
    }

    bool phase1 = false;
    for (int i = 0; i < m; ++i) {
      const int v = basis_[i];
      if (x_[v] < lower_[v] - primal_tolerance) {
        basic_costs[i] = 1.0;
        phase1 = true;
      } else if (x_[v] > upper_[v] + primal_tolerance) {
        basic_costs[i] = -1.0;
        phase1 = true;
      } else {
        basic_costs[i] = 0.0;
      }
    }
    if (phase1 || !dj_valid) {
      if (!phase1) {
        for (int i = 0; i < m; ++i) basic_costs[i] = cost_[basis_[i]];
      }
      compute_duals(basic_costs);
      for (int v = 0; v < nvars; ++v) {
        dj[v] = state_[v] == VarState::kBasic ? 0.0 : pricing_dj(v, phase1 ? 0.0 : cost_[v]);
      }
      dj_valid = !phase1;
    }

    int enter = -1;
    double best = 0.0;
    for (int v = 0; v < nvars; ++v) {
      if (state_[v] == VarState::kBasic || lower_[v] == upper_[v] || rejected[v]) continue;
      const double d = dj[v];
      const bool attractive = (state_[v] == VarState::kAtLower && d > dual_tolerance) ||
                              (state_[v] == VarState::kAtUpper && d < -dual_tolerance);
      if (!attractive) continue;
      if (bland) {
        enter = v;
        break;
      }
      const double score = d * d / weight[v];
      if (score > best) {
        best = score;
        enter = v;
      }
    }

    if (enter < 0) {
      if (!factor_.etas.empty()) {
        // Confirm on a fresh factorization before declaring the outcome.
        refactor();
        compute_basic_values();
        dj_valid = false;
        if (any_rejected) {
          std::fill(rejected.begin(), rejected.end(), 0);
          any_rejected = false;
        }
        continue;
      }
      if (perturbed) {
        restore();
        dj_valid = false;
        continue;
      }
      if (phase1) return Status::kInfeasible;
      // Final duals are the phase-2 ones computed above.
      return Status::kOptimal;
    }

    const double dir = state_[enter] == VarState::kAtLower ? 1.0 : -1.0;
    column_times_binv(enter, alpha);
    const double range = upper_[enter] - lower_[enter];

    int leave = -1;
    double step = kInf;
    bool leave_to_upper = false;
    {
      double best_ratio = kInf;
      double best_pivot = 0.0;
      for (int i = 0; i < m; ++i) {
        const double a = alpha[i];
        if (std::abs(a) <= pivot_tolerance) continue;
        const double g = -dir * a;
        const int v = basis_[i];
        const double xv = x_[v];
        double r;
        bool to_upper;
        if (phase1 && xv < lower_[v] - primal_tolerance) {
          if (g <= 0) continue;
          r = (lower_[v] - xv) / g;
          to_upper = false;
        } else if (phase1 && xv > upper_[v] + primal_tolerance) {
          if (g >= 0) continue;
          r = (xv - upper_[v]) / -g;
          to_upper = true;
        } else if (g < 0 && std::isfinite(lower_[v])) {
          r = std::max(xv - lower_[v], 0.0) / -g;
          to_upper = false;
        } else if (g > 0 && std::isfinite(upper_[v])) {
          r = std::max(upper_[v] - xv, 0.0) / g;
          to_upper = true;
        } else {
          continue;
        }
        bool take = false;
        if (r < best_ratio - 1e-12) {
          take = true;
        } else if (r <= best_ratio + 1e-12) {
          take = bland ? (leave >= 0 && v < basis_[leave]) : std::abs(a) > best_pivot;
        }
        if (take) {
          best_ratio = r;
          best_pivot = std::abs(a);
          leave = i;
          leave_to_upper = to_upper;
        }
      }
      step = best_ratio;
      if (range <= step) {
        step = range;
        leave = -1;
      }
    }

    if (!std::isfinite(step)) {
      // Recheck the entering direction from the column itself; a ray that only
      // exists through rounding is skipped instead of reported.
      double d = phase1 ? 0.0 : cost_[enter];
      for (int i = 0; i < m; ++i) d -= basic_costs[i] * alpha[i];
      if (!phase1 && dir * d > 1e3 * dual_tolerance) {
        if (perturbed) restore();
        return Status::kUnbounded;
      }
      rejected[enter] = 1;
      any_rejected = true;
      continue;
    }

    if (step > 0.0) {
      for (int i = 0; i < m; ++i) x_[basis_[i]] += -dir * alpha[i] * step;
      x_[enter] += dir * step;
    }
    if (leave < 0) {
      state_[enter] = dir > 0 ? VarState::kAtUpper : VarState::kAtLower;
      x_[enter] = dir > 0 ? upper_[enter] : lower_[enter];
    } else {
      const int lv = basis_[leave];
      update_pricing(leave, enter);
      if (perturbed) widen(enter);
      pivot(leave, enter, alpha);
      const double bound = leave_to_upper ? upper_[lv] : lower_[lv];
      state_[lv] = leave_to_upper ? VarState::kAtUpper : VarState::kAtLower;
      const double snap = std::abs(x_[lv] - bound);
      x_[lv] = bound;
      // Moving the leaving variable onto its bound breaks A x = b unless the
      // basic values follow.
      if (snap > 1e-12) compute_basic_values();
    }
    ++stats_.iterations;
    if (any_rejected) {
      std::fill(rejected.begin(), rejected.end(), 0);
      any_rejected = false;
    }
    if (bland) ++stats_.bland_pivots;
    // Progress is a real step or a measurable gain on the phase objective; steps
    // at rounding level count as stalling.
    double current = 0.0;
    if (phase1) {
      for (int i = 0; i < m; ++i) {
        const int v = basis_[i];
        current -= std::max(0.0, lower_[v] - x_[v]) + std::max(0.0, x_[v] - upper_[v]);
      }
    } else {
      current = objective();
    }
    if (phase1 != mark_phase1 || step > kMinStep ||
        current > mark + 1e-9 * (1.0 + std::abs(mark))) {
      mark = current;
      mark_phase1 = phase1;
      degenerate_run = 0;
      bland = false;
    } else {
      ++stats_.degenerate_pivots;
      ++degenerate_run;
      if (!perturbed && perturbations_left > 0 && degenerate_run > kPerturbAfter) perturb();
      if (degenerate_run > kDegenerateLimit) bland = true;
    }
  }
}

double SimplexSolver::objective() const {
  double z = 0.0;
  for (int c = 0; c < num_structural_; ++c) z += cost_[col_var_[c]] * x_[col_var_[c]];
  return z;
}

double SimplexSolver::reduced_cost(int col) const {
  return pricing_dj(col_var_.at(col), cost_[col_var_.at(col)]);
}

std::vector<double> SimplexSolver::values() const {
  std::vector<double> out(num_structural_);
  for (int c = 0; c < num_structural_; ++c) out[c] = x_[col_var_[c]];
  return out;
}

Certificate SimplexSolver::verify() const {
  Certificate cert;
  const int m = num_rows();
  std::vector<double> activity(m, 0.0);
  for (int c = 0; c < num_structural_; ++c) {
    const int v = col_var_[c];
    cert.primal_infeasibility =
        std::max({cert.primal_infeasibility, lower_[v] - x_[v], x_[v] - upper_[v]});
    for (const auto& [r, coef] : col_entries_[c]) activity[r] += coef * x_[v];
  }
  for (int i = 0; i < m; ++i) {
    const double b = rows_[i].rhs;
    double viol = 0.0;
    switch (rows_[i].sense) {
      case RowSense::kLessEqual: viol = activity[i] - b; break;
      case RowSense::kGreaterEqual: viol = b - activity[i]; break;
      case RowSense::kEqual: viol = std::abs(activity[i] - b); break;
    }
    cert.primal_infeasibility = std::max(cert.primal_infeasibility, viol);
  }

  // Lagrangian bound L(y) = b'y + max_{box} (c - A'y)'x + max_{box} (-y)'s.
  double dual = 0.0;
  auto box_term = [&](double d, double lb, double ub) {
    if (std::abs(d) <= dual_tolerance) return 0.0;
    return d > 0 ? d * ub : d * lb;
  };
  for (int i = 0; i < m; ++i) dual += rows_[i].rhs * y_[i];
  for (int v = 0; v < static_cast<int>(cost_.size()); ++v) {
    const double d = pricing_dj(v, cost_[v]);
    dual += box_term(d, lower_[v], upper_[v]);
    const bool can_rise = x_[v] < upper_[v] - primal_tolerance;
    const bool can_fall = x_[v] > lower_[v] + primal_tolerance;
    if (can_rise) cert.dual_infeasibility = std::max(cert.dual_infeasibility, d);
    if (can_fall) cert.dual_infeasibility = std::max(cert.dual_infeasibility, -d);
  }
  cert.primal_objective = objective();
  cert.dual_objective = dual;
  return cert;
}

std::string SimplexSolver::to_lp_format() const {
  std::ostringstream out;
  out.precision(17);
  auto term = [&](std::ostringstream& o, double coef, const std::string& name, bool first) {
    if (coef < 0) {
      o << (first ? "- " : " - ") << -coef << ' ' << name;
    } else {
      o << (first ? "" : " + ") << coef << ' ' << name;
    }
  };
  out << "Maximize\n obj:";
  bool first = true;
  for (int c = 0; c < num_structural_; ++c) {
    const double cc = cost_[col_var_[c]];
    if (cc == 0.0) continue;
    out << ' ';
    term(out, cc, "c" + std::to_string(c), first);
    first = false;
  }
  if (first) out << " 0 c0";
  out << "\nSubject To\n";
  std::vector<std::vector<Entry>> by_row(rows_.size());
  for (int c = 0; c < num_structural_; ++c) {
    for (const auto& [r, coef] : col_entries_[c]) by_row[r].emplace_back(c, coef);
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    out << " r" << i << ":";
    bool f = true;
    for (const auto& [c, coef] : by_row[i]) {
      out << ' ';
      term(out, coef, "c" + std::to_string(c), f);
      f = false;
    }
    if (f) out << " 0 c0";
    const char* op = rows_[i].sense == RowSense::kLessEqual      ? "<="
                     : rows_[i].sense == RowSense::kGreaterEqual ? ">="
                                                                 : "=";
    out << ' ' << op << ' ' << rows_[i].rhs << '\n';
  }
  out << "Bounds\n";
  for (int c = 0; c < num_structural_; ++c) {
    const int v = col_var_[c];
    out << ' ';
    if (std::isfinite(lower_[v])) out << lower_[v]; else out << "-inf";
    out << " <= c" << c << " <= ";
    if (std::isfinite(upper_[v])) out << upper_[v]; else out << "+inf";
    out << '\n';
  }
  out << "End\n";
  return out.str();
}

}  // namespace cgtree::lp
