/*
 Copyright 2026 The dualmpc Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include <filesystem>
#include <random>

#include "dualmpc/error.hpp"
#include "dualmpc/qp.hpp"
#include "dualmpc/verify.hpp"
#include "test_util.hpp"

using namespace dualmpc;
using dualmpc::testing::randn;

namespace {

CondensedQP two_by_two() {
  MatrixXd P = 2.0 * MatrixXd::Identity(2, 2);
  VectorXd q(2);
  q << -2, -4;
  return CondensedQP::unconstrained(P, q);
}

CondensedQP random_qp(std::mt19937_64& g, int n, int p, int m) {
  const MatrixXd L = randn(g, n, n);
  CondensedQP qp;
  qp.P = L * L.transpose() + MatrixXd::Identity(n, n);
  qp.q = randn(g, n, 1);
  qp.E = randn(g, p, n);
  qp.c = randn(g, p, 1);
  qp.G = randn(g, m, n);
  // Feasible by construction: slack around a known point.
  const VectorXd u0 = randn(g, n, 1);
  qp.c = qp.E * u0;
  qp.h = qp.G * u0 + VectorXd::Constant(m, 0.5);
  return qp;
}

void expect_kkt(const CondensedQP& qp, const QPSolution& s, double tol) {
  EXPECT_LE(kkt_residual(qp, s.u_star, s.eq_duals, s.ineq_duals), tol);
  if (qp.num_ineq() > 0) {
    EXPECT_GE(s.ineq_duals.minCoeff(), -1e-9);
    EXPECT_LE((qp.G * s.u_star - qp.h).maxCoeff(), tol);
  }
  if (qp.num_eq() > 0) EXPECT_LE((qp.E * s.u_star - qp.c).cwiseAbs().maxCoeff(), tol);
}

}  // namespace

TEST(PositiveDefinite, Cases) {
  EXPECT_TRUE(check_positive_definite(MatrixXd::Identity(3, 3)));
  EXPECT_FALSE(check_positive_definite(Eigen::Vector2d(1, 0).asDiagonal().toDenseMatrix()));
  MatrixXd A(2, 2);
  A << 1, 0.5, 0, 1;
  try {
    check_positive_definite(A);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AsymmetricInput);
  }
}

TEST(Solve, Unconstrained) {
  const QPSolution s = solve(two_by_two());
  EXPECT_MAT_NEAR(s.u_star, Eigen::Vector2d(1, 2), 1e-9);
}

TEST(Solve, Equality) {
  CondensedQP qp = two_by_two();
  qp.E = Eigen::RowVector2d(1, 1);
  qp.c = VectorXd::Constant(1, 1.0);
  const QPSolution s = solve(qp);
  EXPECT_MAT_NEAR(s.u_star, Eigen::Vector2d(0, 1), 1e-9);
  EXPECT_NEAR(s.eq_duals[0], 2.0, 1e-7);
}

TEST(Solve, ActiveInequality) {
  CondensedQP qp = two_by_two();
  qp.G = Eigen::RowVector2d(0, 1);
  qp.h = VectorXd::Constant(1, 0.5);
  const QPSolution s = solve(qp);
  EXPECT_MAT_NEAR(s.u_star, Eigen::Vector2d(1, 0.5), 1e-8);
  EXPECT_NEAR(s.ineq_duals[0], 3.0, 1e-6);
}

TEST(Solve, InconsistentEqualitiesAreInfeasible) {
  CondensedQP qp = two_by_two();
  qp.E = MatrixXd(2, 2);
  qp.E << 1, 1, 1, 1;
  qp.c = Eigen::Vector2d(0, 1);
  try {
    solve(qp);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Infeasible);
  }
}

TEST(Solve, EmptyBoxIsInfeasible) {
  CondensedQP qp = two_by_two();
  qp.G = MatrixXd(2, 2);
  qp.G << 1, 0, -1, 0;
  qp.h = Eigen::Vector2d(-1, -1);  // u1 <= -1 and u1 >= 1
  EXPECT_THROW(solve(qp), Error);
}

TEST(Solve, RandomMixedKkt) {
  std::mt19937_64 g(11);
  for (int t = 0; t < 30; ++t) {
    const CondensedQP qp = random_qp(g, 12, 3, 10);
    expect_kkt(qp, solve(qp), 1e-6);
  }
}

TEST(Solve, EqualityHandlingAgrees) {
  std::mt19937_64 g(5);
  for (int t = 0; t < 10; ++t) {
    const CondensedQP qp = random_qp(g, 10, 4, 8);
    QpOptions a, b;
    a.equalities = EqualityHandling::Eliminate;
    b.equalities = EqualityHandling::KeepInKkt;
    EXPECT_MAT_NEAR(QpSolver(a).solve(qp).u_star, QpSolver(b).solve(qp).u_star, 1e-6);
  }
}

TEST(Solve, WarmStartsAgree) {
  std::mt19937_64 g(8);
  const CondensedQP qp = random_qp(g, 8, 2, 6);
  QpSolver cold;
  const VectorXd ref = cold.solve(qp).u_star;
  for (int t = 0; t < 5; ++t) {
    QpSolver warm;
    EXPECT_MAT_NEAR(warm.solve(qp, ref + 0.3 * randn(g, 8, 1)).u_star, ref, 1e-5);
  }
}

TEST(Solve, NoFeasibleDescent) {
  std::mt19937_64 g(21);
  const CondensedQP qp = random_qp(g, 6, 1, 6);
  const QPSolution s = solve(qp);
  const double J = qp.objective(s.u_star);
  // Random perturbations kept on the equality plane and inside the inequalities.
  const MatrixXd Z = Eigen::FullPivLU<MatrixXd>(qp.E).kernel();
  int checked = 0;
  for (int t = 0; t < 100; ++t) {
    VectorXd d = Z * randn(g, Z.cols(), 1);
    d *= 1e-3 / d.norm();
    const VectorXd u = s.u_star + d;
    if ((qp.G * u - qp.h).maxCoeff() > 0.0) continue;
    ++checked;
    EXPECT_GE(qp.objective(u), J - 1e-9);
  }
  EXPECT_GT(checked, 0);
}

TEST(Solve, OracleSmallBoxes) {
  std::mt19937_64 g(2);
  std::uniform_real_distribution<double> U(0.1, 1.0);
  for (int t = 0; t < 40; ++t) {
    const int n = 1 + t % 4;
    const MatrixXd L = randn(g, n, n);
    CondensedQP qp = CondensedQP::unconstrained(L * L.transpose() + 0.1 * MatrixXd::Identity(n, n),
                                                2.0 * randn(g, n, 1));
    qp.G.resize(2 * n, n);
    qp.G << MatrixXd::Identity(n, n), -MatrixXd::Identity(n, n);
    qp.h.resize(2 * n);
    for (int i = 0; i < 2 * n; ++i) qp.h[i] = U(g);
    const auto ref = verify::enumerate_active_sets(qp.P, qp.q, qp.G, qp.h);
    ASSERT_TRUE(ref.feasible);
    EXPECT_MAT_NEAR(solve(qp).u_star, ref.u, 1e-6);
  }
}

TEST(Dump, CsvRoundTrip) {
  std::mt19937_64 g(4);
  const CondensedQP qp = random_qp(g, 5, 2, 3);
  const auto dir = std::filesystem::temp_directory_path() / "dualmpc_qp_dump_test";
  std::filesystem::remove_all(dir);
  dump_csv(qp, dir, "x");
  EXPECT_TRUE(std::filesystem::exists(dir / "x_P.csv"));
  const CondensedQP back = load_csv(dir, "x");
  EXPECT_MAT_NEAR(back.P, qp.P, 0.0);
  EXPECT_MAT_NEAR(back.h, qp.h, 0.0);
  EXPECT_EQ(back.E.rows(), 2);
  std::filesystem::remove_all(dir);
}

TEST(Validate, RejectsBadShapes) {
  CondensedQP qp = two_by_two();
  qp.q.resize(3);
  EXPECT_THROW(qp.validate(), Error);
  CondensedQP nan = two_by_two();
  nan.q[0] = std::nan("");
  EXPECT_THROW(nan.validate(), Error);
}
