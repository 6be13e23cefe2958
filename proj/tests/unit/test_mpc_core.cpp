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

#include <random>

#include "dualmpc/error.hpp"
#include "dualmpc/mpc_core.hpp"
#include "dualmpc/qp.hpp"
#include "test_util.hpp"

using namespace dualmpc;
using dualmpc::testing::randn;

namespace {

StateMatrixPair random_pair(std::mt19937_64& g, int n, int m) {
  return {MatrixXd::Identity(n, n) + 0.1 * randn(g, n, n), randn(g, n, m)};
}

}  // namespace

TEST(Condense, OneAndTwoSteps) {
  std::mt19937_64 g(1);
  const StateMatrixPair d = random_pair(g, 4, 2);
  const CondensedPrediction p1 = condense(d, 1);
  EXPECT_MAT_NEAR(p1.A_qp, d.A, 0.0);
  EXPECT_MAT_NEAR(p1.B_qp, d.B, 0.0);
  const CondensedPrediction p2 = condense(d, 2);
  MatrixXd A(8, 4), B = MatrixXd::Zero(8, 4);
  A << d.A, d.A * d.A;
  B.block(0, 0, 4, 2) = d.B;
  B.block(4, 0, 4, 2) = d.A * d.B;
  B.block(4, 2, 4, 2) = d.B;
  EXPECT_MAT_NEAR(p2.A_qp, A, 1e-14);
  EXPECT_MAT_NEAR(p2.B_qp, B, 1e-14);
}

TEST(Condense, MatchesRollout) {
  std::mt19937_64 g(2);
  const StateMatrixPair d = random_pair(g, kStateDim, kInputDim);
  const CondensedPrediction p = condense(d, 5);
  const VectorXd x0 = randn(g, kStateDim, 1), U = randn(g, 5 * kInputDim, 1);
  const VectorXd X = p.A_qp * x0 + p.B_qp * U;
  VectorXd x = x0;
  for (int k = 0; k < 5; ++k) {
    x = d.A * x + d.B * U.segment(k * kInputDim, kInputDim);
    EXPECT_MAT_NEAR(X.segment(k * kStateDim, kStateDim), x, 1e-10);
  }
}

TEST(Cost, PureInputRegularization) {
  std::mt19937_64 g(3);
  const int N = 3;
  const CondensedPrediction p = condense(random_pair(g, kStateDim, kInputDim), N);
  const HorizonWeights w = HorizonWeights::constant(N, VectorXd::Zero(kStateDim), VectorXd::Ones(kInputDim));
  const VectorXd x0 = randn(g, kStateDim, 1), Xd = randn(g, N * kStateDim, 1);
  const QuadraticCost c0 = build_cost(p, w, x0, Xd, VectorXd::Zero(N * kInputDim));
  EXPECT_MAT_NEAR(c0.P, 2.0 * MatrixXd::Identity(N * kInputDim, N * kInputDim), 1e-14);
  EXPECT_MAT_NEAR(c0.q, VectorXd::Zero(N * kInputDim), 1e-14);
  const VectorXd target = randn(g, N * kInputDim, 1);
  const QuadraticCost c1 = build_cost(p, w, x0, Xd, target);
  EXPECT_MAT_NEAR(VectorXd(c1.P.ldlt().solve(-c1.q)), target, 1e-12);
}

TEST(Cost, MatchesStageSumUpToConstant) {
  std::mt19937_64 g(4);
  const int N = 3;
  const StateMatrixPair d = random_pair(g, kStateDim, kInputDim);
  const CondensedPrediction p = condense(d, N);
  HorizonWeights w;
  std::uniform_real_distribution<double> U(0.0, 5.0);
  for (int k = 0; k < N; ++k) {
    VectorXd Q(kStateDim), R(kInputDim);
    for (auto& v : Q) v = U(g);
    for (auto& v : R) v = U(g) + 0.1;
    w.Q.push_back(Q);
    w.R.push_back(R);
  }
  const VectorXd x0 = randn(g, kStateDim, 1), Xd = randn(g, N * kStateDim, 1), Ud = randn(g, N * kInputDim, 1);
  const QuadraticCost c = build_cost(p, w, x0, Xd, Ud);
  auto stage = [&](const VectorXd& Uv) {
    VectorXd x = x0;
    double J = 0.0;
    for (int k = 0; k < N; ++k) {
      const VectorXd u = Uv.segment(k * kInputDim, kInputDim);
      x = d.A * x + d.B * u;
      const VectorXd ex = x - Xd.segment(k * kStateDim, kStateDim), eu = u - Ud.segment(k * kInputDim, kInputDim);
      J += ex.dot(w.Q[k].cwiseProduct(ex)) + eu.dot(w.R[k].cwiseProduct(eu));
    }
    return J;
  };
  const VectorXd zero = VectorXd::Zero(N * kInputDim);
  const double constant = stage(zero);
  for (int t = 0; t < 20; ++t) {
    const VectorXd Uv = randn(g, N * kInputDim, 1);
    EXPECT_NEAR(0.5 * Uv.dot(c.P * Uv) + c.q.dot(Uv) + constant, stage(Uv), 1e-8 * std::max(1.0, stage(Uv)));
  }
}

TEST(Cost, HessianPositiveDefinite) {
  std::mt19937_64 g(5);
  for (int N = 1; N <= 5; ++N) {
    const CondensedPrediction p = condense(random_pair(g, kStateDim, kInputDim), N);
    const QuadraticCost c = build_cost(p, HorizonWeights::grf_default(N), randn(g, kStateDim, 1),
                                       randn(g, N * kStateDim, 1), randn(g, N * kInputDim, 1));
    EXPECT_TRUE(check_positive_definite(c.P));
  }
}

TEST(Weights, DefaultsAndValidation) {
  const VectorXd Q = default_state_weights();
  ASSERT_EQ(Q.size(), kStateDim);
  EXPECT_EQ(Q[2], 50.0);
  EXPECT_EQ(Q[6], 400.0);
  EXPECT_EQ(Q[12], 0.0);
  EXPECT_EQ(HorizonWeights::footstep_default(4).R[3][0], 1e-3);
  EXPECT_EQ(HorizonWeights::grf_default(4).R[0][11], 1e-6);
  HorizonWeights bad = HorizonWeights::grf_default(2);
  bad.R[1][0] = 0.0;
  EXPECT_THROW(bad.validate(), Error);
  bad = HorizonWeights::grf_default(2);
  bad.Q[0][0] = -1.0;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(Reference, AdvancesPositionAndYaw) {
  BodyState d;
  d.p = Vec3(1, 2, 0.3);
  d.p_dot = Vec3(0.5, -0.1, 0);
  d.theta = Vec3(0, 0, 0.2);
  d.omega = Vec3(0, 0, 0.4);
  const VectorXd X = reference_trajectory(d, 3, 0.025);
  ASSERT_EQ(X.size(), 3 * kStateDim);
  EXPECT_NEAR(X[2 * kStateDim + 0], 1.0 + 3 * 0.025 * 0.5, 1e-15);
  EXPECT_NEAR(X[2 * kStateDim + 8], 0.2 + 3 * 0.025 * 0.4, 1e-15);
  EXPECT_EQ(X[kStateDim + 12], 1.0);
}
