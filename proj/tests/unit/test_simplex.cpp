#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "cgtree/rng.hpp"
#include "cgtree/simplex.hpp"

using namespace cgtree;
using namespace cgtree::lp;

namespace {

constexpr double kTol = 1e-6;

double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * double(rng.next() >> 11) * 0x1.0p-53;
}

struct DenseLp {
  Eigen::MatrixXd A;
  Eigen::VectorXd b, c, u;  // A x <= b, 0 <= x <= u
};

// Best objective over all basic feasible points (n active constraints).
std::optional<double> vertex_enumeration(const DenseLp& lp) {
  const int m = int(lp.A.rows()), n = int(lp.A.cols());
  // Constraint list: rows of A, then x_i >= 0 (as -x_i <= 0), then x_i <= u_i.
  Eigen::MatrixXd G(m + 2 * n, n);
  Eigen::VectorXd h(m + 2 * n);
  G.topRows(m) = lp.A;
  h.head(m) = lp.b;
  G.middleRows(m, n) = -Eigen::MatrixXd::Identity(n, n);
  h.segment(m, n).setZero();
  G.bottomRows(n) = Eigen::MatrixXd::Identity(n, n);
  h.tail(n) = lp.u;
  const int total = int(G.rows());
  std::optional<double> best;
  std::vector<int> pick(n);
  for (int i = 0; i < n; ++i) pick[i] = i;
  while (true) {
    Eigen::MatrixXd M(n, n);
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) {
      M.row(i) = G.row(pick[i]);
      rhs(i) = h(pick[i]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    if (lu.rank() == n) {
      const Eigen::VectorXd x = lu.solve(rhs);
      if (((G * x - h).array() <= 1e-9).all()) {
        const double v = lp.c.dot(x);
        if (!best || v > *best) best = v;
      }
    }
    int k = n - 1;
    while (k >= 0 && pick[k] == total - n + k) --k;
    if (k < 0) break;
    ++pick[k];
    for (int i = k + 1; i < n; ++i) pick[i] = pick[i - 1] + 1;
  }
  return best;
}

SimplexSolver build(const DenseLp& lp) {
  SimplexSolver s;
  for (int i = 0; i < lp.A.rows(); ++i) s.add_row(RowSense::kLessEqual, lp.b(i), {});
  for (int j = 0; j < lp.A.cols(); ++j) {
    std::vector<Entry> col;
    for (int i = 0; i < lp.A.rows(); ++i)
      if (lp.A(i, j) != 0.0) col.push_back({i, lp.A(i, j)});
    s.add_column(lp.c(j), 0.0, lp.u(j), col);
  }
  return s;
}

}  // namespace

TEST(Simplex, TextbookMaximum) {
  // max 3x + 5y; x <= 4; 2y <= 12; 3x + 2y <= 18 -> (2, 6), 36
  SimplexSolver s;
  s.add_row(RowSense::kLessEqual, 4, {});
  s.add_row(RowSense::kLessEqual, 12, {});
  s.add_row(RowSense::kLessEqual, 18, {});
  const std::vector<Entry> x{{0, 1}, {2, 3}}, y{{1, 2}, {2, 2}};
  s.add_column(3, 0, kInf, x);
  s.add_column(5, 0, kInf, y);
  ASSERT_EQ(s.solve(), Status::kOptimal);
  EXPECT_NEAR(s.objective(), 36, kTol);
  EXPECT_NEAR(s.value(0), 2, kTol);
  EXPECT_NEAR(s.value(1), 6, kTol);
  EXPECT_NEAR(s.dual(1), 1.5, kTol);
  EXPECT_NEAR(s.dual(2), 1.0, kTol);
  EXPECT_TRUE(s.verify().ok(kTol));
}

TEST(Simplex, EqualityAndGreaterRows) {
  // max x + y; x + y = 3; x - y >= 1; x <= 2.5 -> objective 3
  SimplexSolver s;
  const std::vector<Entry> r0{}, r1{};
  s.add_row(RowSense::kEqual, 3, r0);
  s.add_row(RowSense::kGreaterEqual, 1, r1);
  const std::vector<Entry> x{{0, 1}, {1, 1}}, y{{0, 1}, {1, -1}};
  s.add_column(1, 0, 2.5, x);
  s.add_column(2, 0, kInf, y);
  ASSERT_EQ(s.solve(), Status::kOptimal);
  // max x + 2y with x + y = 3 and x - y >= 1 -> y = 1, x = 2, objective 4
  EXPECT_NEAR(s.objective(), 4, kTol);
  EXPECT_TRUE(s.verify().ok(kTol));
}

TEST(Simplex, Infeasible) {
  SimplexSolver s;
  s.add_row(RowSense::kGreaterEqual, 5, {});
  const std::vector<Entry> x{{0, 1}};
  s.add_column(1, 0, 2, x);
  EXPECT_EQ(s.solve(), Status::kInfeasible);
}

TEST(Simplex, Unbounded) {
  SimplexSolver s;
  s.add_row(RowSense::kGreaterEqual, 1, {});
  const std::vector<Entry> x{{0, 1}};
  s.add_column(1, 0, kInf, x);
  EXPECT_EQ(s.solve(), Status::kUnbounded);
}

TEST(Simplex, WarmStartAfterAppending) {
  SimplexSolver s;
  s.add_row(RowSense::kLessEqual, 10, {});
  const std::vector<Entry> x{{0, 1}}, y{{0, 2}};
  s.add_column(1, 0, kInf, x);
  ASSERT_EQ(s.solve(), Status::kOptimal);
  EXPECT_NEAR(s.objective(), 10, kTol);
  s.add_column(3, 0, kInf, y);
  ASSERT_EQ(s.solve(), Status::kOptimal);
  EXPECT_NEAR(s.objective(), 15, kTol);
  const std::vector<Entry> cut{{1, 1}};
  s.add_row(RowSense::kLessEqual, 2, cut);
  ASSERT_EQ(s.solve(), Status::kOptimal);
  EXPECT_NEAR(s.objective(), 2 * 3 + 6, kTol);
  s.set_column_bounds(0, 0, 1);
  ASSERT_EQ(s.solve(), Status::kOptimal);
  EXPECT_NEAR(s.objective(), 1 + 6, kTol);
  EXPECT_TRUE(s.verify().ok(kTol));
}

TEST(Simplex, DegenerateBeale) {
  // Beale's cycling example for the textbook rule, written as a maximization.
  SimplexSolver s;
  s.add_row(RowSense::kLessEqual, 0, {});
  s.add_row(RowSense::kLessEqual, 0, {});
  s.add_row(RowSense::kLessEqual, 1, {});
  const std::vector<Entry> c1{{0, 0.25}, {1, 0.5}}, c2{{0, -8}, {1, -12}}, c3{{0, -1}, {1, -0.5}, {2, 1}},
      c4{{0, 9}, {1, 3}};
  s.add_column(0.75, 0, kInf, c1);
  s.add_column(-20, 0, kInf, c2);
  s.add_column(0.5, 0, kInf, c3);
  s.add_column(-6, 0, kInf, c4);
  ASSERT_EQ(s.solve(), Status::kOptimal);
  EXPECT_NEAR(s.objective(), 1.25, kTol);
  EXPECT_TRUE(s.verify().ok(kTol));
}

TEST(Simplex, RandomAgainstVertexEnumeration) {
  Rng rng(2024);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 2 + int(rng.uniform_index(3)), m = 1 + int(rng.uniform_index(4));
    DenseLp lp{Eigen::MatrixXd(m, n), Eigen::VectorXd(m), Eigen::VectorXd(n), Eigen::VectorXd(n)};
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) lp.A(i, j) = rng.uniform_index(4) == 0 ? 0.0 : uniform(rng, -2, 3);
    for (int i = 0; i < m; ++i) lp.b(i) = uniform(rng, -1, 5);
    for (int j = 0; j < n; ++j) {
      lp.c(j) = uniform(rng, -3, 3);
      lp.u(j) = uniform(rng, 0.5, 4);
    }
    const auto expect = vertex_enumeration(lp);
    SimplexSolver s = build(lp);
    const Status st = s.solve();
    if (!expect) {
      EXPECT_EQ(st, Status::kInfeasible) << trial;
      continue;
    }
    ASSERT_EQ(st, Status::kOptimal) << trial;
    EXPECT_NEAR(s.objective(), *expect, 1e-6) << trial;
    EXPECT_TRUE(s.verify().ok(1e-6)) << trial;
  }
}

TEST(Simplex, HighlyDegenerateAssignment) {
  // Assignment polytope: every vertex is degenerate.
  const int n = 8;
  Rng rng(7);
  SimplexSolver s;
  for (int i = 0; i < 2 * n; ++i) s.add_row(RowSense::kEqual, 1, {});
  std::vector<std::vector<double>> w(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      w[i][j] = double(rng.uniform_index(5));
      const std::vector<Entry> col{{i, 1}, {n + j, 1}};
      s.add_column(w[i][j], 0, kInf, col);
    }
  ASSERT_EQ(s.solve(), Status::kOptimal);
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  double best = -1;
  do {
    double v = 0;
    for (int i = 0; i < n; ++i) v += w[i][perm[i]];
    best = std::max(best, v);
  } while (std::next_permutation(perm.begin(), perm.end()));
  EXPECT_NEAR(s.objective(), best, kTol);
  EXPECT_TRUE(s.verify().ok(kTol));
}

TEST(Simplex, LpFormatMentionsEverything) {
  SimplexSolver s;
  s.add_row(RowSense::kLessEqual, 4, {});
  const std::vector<Entry> x{{0, 1}};
  s.add_column(2, 0, 3, x);
  const std::string text = s.to_lp_format();
  EXPECT_NE(text.find("Maximize"), std::string::npos);
  EXPECT_NE(text.find("c0"), std::string::npos);
  EXPECT_NE(text.find("r0"), std::string::npos);
}
