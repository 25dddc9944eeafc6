#pragma once

#include <chrono>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <memory>

#include <Eigen/Dense>
#include <Eigen/SparseLU>

namespace cgtree::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { kLessEqual, kGreaterEqual, kEqual };
enum class Status { kOptimal, kInfeasible, kUnbounded, kIterationLimit, kTimeLimit };

const char* to_string(Status s);

// (index, coefficient); index is a row for columns and a column for rows.
using Entry = std::pair<int, double>;

struct SolveLimits {
  std::optional<std::chrono::steady_clock::time_point> deadline;
  long max_iterations = 5'000'000;
};

struct Certificate {
  double primal_infeasibility = 0.0;  // max row or bound violation
  double dual_infeasibility = 0.0;    // max reduced-cost or row-dual sign violation
  double primal_objective = 0.0;
  double dual_objective = 0.0;        // Lagrangian bound from the row duals alone
  double duality_gap() const { return std::abs(primal_objective - dual_objective); }
  bool ok(double tol) const {
    return primal_infeasibility <= tol && dual_infeasibility <= tol && duality_gap() <= tol;
  }
};

struct SolverStats {
  long iterations = 0;
  long degenerate_pivots = 0;
  long bland_pivots = 0;
  long refactorizations = 0;
  long basis_repairs = 0;
  long perturbations = 0;
};

// Maximizes c'x subject to sense-constrained rows and lb <= x <= ub with a
// bounded-variable primal simplex. Phase 1 minimizes the sum of bound violations
// of the basic variables, so the current basis is kept as a warm start when rows
// or columns are appended or bounds change. Each row i carries a logical s_i with
// a_i x + s_i = b_i whose bounds encode the sense.
//
// The basis is held as a sparse LU factorization followed by a product-form
// eta file, refactored every kRefactorPeriod pivots.
// Devex pricing, textbook ratio test. A run of kPerturbAfter pivots without
// progress widens the basic bounds slightly (at most kMaxPerturbations times per
// solve, undone before returning) and restarts the count. A run longer than
// kDegenerateLimit that no perturbation interrupts switches to Bland's rule until
// the objective moves.
class SimplexSolver {
 public:
  static constexpr long kDegenerateLimit = 1000;
  static constexpr long kPerturbAfter = 1000;
  static constexpr int kMaxPerturbations = 3;
  static constexpr double kMinStep = 1e-11;
  static constexpr double kDevexReset = 1e6;
  static constexpr double kPerturbation = 1e-6;
  static constexpr int kRefactorPeriod = 100;

  int add_column(double cost, double lb, double ub, std::span<const Entry> rows);
  int add_row(RowSense sense, double rhs, std::span<const Entry> columns);
  void set_column_bounds(int col, double lb, double ub);

  int num_rows() const { return static_cast<int>(rows_.size()); }
  int num_columns() const { return num_structural_; }
  double column_lower(int col) const { return lower_[col_var_[col]]; }
  double column_upper(int col) const { return upper_[col_var_[col]]; }

  Status solve(const SolveLimits& limits = {});

  double objective() const;
  double value(int col) const { return x_[col_var_[col]]; }
  double dual(int row) const { return y_[row]; }
  double reduced_cost(int col) const;
  std::vector<double> values() const;

  Certificate verify() const;
  const SolverStats& stats() const { return stats_; }

  // CPLEX LP text format with generated names c<j> and r<i>.
  std::string to_lp_format() const;

  double primal_tolerance = 1e-7;
  double dual_tolerance = 1e-7;
  double pivot_tolerance = 1e-7;

 private:
  enum class VarState : unsigned char { kBasic, kAtLower, kAtUpper };
  struct RowInfo {
    RowSense sense;
    double rhs;
  };

  int add_variable(double cost, double lb, double ub, bool logical, int index);
  Eigen::SparseMatrix<double> basis_matrix() const;
  bool repair_basis(double threshold);
  void refactor();
  void compute_basic_values();
  void btran(Eigen::VectorXd& w) const;
  void compute_duals(const std::vector<double>& basic_costs);
  double pricing_dj(int var, double cost) const;
  void column_times_binv(int var, Eigen::VectorXd& out) const;
  void pivot(int leave_row, int enter_var, const Eigen::VectorXd& alpha);
  double row_activity(int row) const;

  // Variables: structural columns and row logicals share one index space.
  std::vector<double> cost_, lower_, upper_, x_;
  std::vector<VarState> state_;
  std::vector<bool> is_logical_;
  std::vector<int> var_index_;  // column index or row index
  std::vector<int> col_var_;    // column -> variable
  std::vector<int> row_var_;    // row -> logical variable
  std::vector<std::vector<Entry>> col_entries_;  // per column: (row, coef)
  std::vector<RowInfo> rows_;
  int num_structural_ = 0;

  std::vector<int> basis_;  // basis position -> variable
  std::vector<int> basis_pos_;  // variable -> basis position or -1

  // B = B0 E_1 ... E_t. Copies start without a factorization.
  struct Eta {
    int pos;
    double pivot;
    std::vector<Entry> others;  // (basis position, alpha) off the pivot
  };
  struct Factor {
    using LU = Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>;
    std::unique_ptr<LU> lu;
    std::vector<Eta> etas;
    bool valid = false;

    Factor() = default;
    Factor(const Factor&) {}
    Factor& operator=(const Factor&) {
      lu.reset();
      etas.clear();
      valid = false;
      return *this;
    }
    Factor(Factor&&) = default;
    Factor& operator=(Factor&&) = default;
  };
  Factor factor_;

  std::vector<double> y_;
  bool values_dirty_ = true;
  SolverStats stats_;
};

}  // namespace cgtree::lp
