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

#include "dualmpc/grf_mpc.hpp"

#include <cmath>

#include "dualmpc/error.hpp"

namespace dualmpc {

PyramidRows pyramid_rows(double mu, double fz_max) {
  if (!(mu > 0.0)) throw Error(ErrorCode::InvalidArgument, "pyramid_rows: mu must be positive");
  PyramidRows r;
  r.G << 1, 0, -mu,
        -1, 0, -mu,
         0, 1, -mu,
         0, -1, -mu,
         0, 0, -1,
         0, 0, 1;
  r.h << 0, 0, 0, 0, 0, fz_max;
  return r;
}

double fz_max(const RobotParams& params) {
  return kFzMaxFactor * params.mass * params.gravity.norm();
}

GRFProblem build_grf_problem(const RobotParams& params, const HorizonWeights& weights,
                             const GaitSchedule& schedule, double mpc_dt, const BodyState& state,
                             const BodyState& desired, const FootPositions& feet, double mu) {
  const int N = schedule.horizon();
  if (weights.horizon() != N) {
    throw Error(ErrorCode::InvalidArgument, "GRF problem: weights and schedule disagree on N");
  }
  GRFProblem gp;
  gp.schedule = schedule;
  gp.mu = mu;
  gp.fz_max = fz_max(params);
  const PyramidRows pyr = pyramid_rows(mu, gp.fz_max);

  const StateMatrixPair disc = discretize_zoh(grf_dynamics(params, state, feet), mpc_dt);
  const CondensedPrediction pred = condense(disc, N);

  const double weight = params.mass * params.gravity.norm();
  VectorXd Ud = VectorXd::Zero(kInputDim * N);
  int n_stance = 0;
  for (int k = 0; k < N; ++k) {
    const int count = schedule.stance_count(k);
    n_stance += count;
    for (int leg = 0; leg < kNumLegs; ++leg) {
      if (schedule.contact[k][leg]) Ud[kInputDim * k + 3 * leg + 2] = weight / count;
    }
  }
  const QuadraticCost cost =
      build_cost(pred, weights, state, reference_trajectory(desired, N, mpc_dt), Ud);

  const Eigen::Index n = kInputDim * N;
  const Eigen::Index n_swing = kNumLegs * N - n_stance;
  CondensedQP& qp = gp.qp;
  qp.P = cost.P;
  qp.q = cost.q;
  qp.E = MatrixXd::Zero(3 * n_swing, n);
  qp.c = VectorXd::Zero(3 * n_swing);
  qp.G = MatrixXd::Zero(6 * n_stance, n);
  qp.h = VectorXd::Zero(6 * n_stance);
  Eigen::Index re = 0, ri = 0;
  for (int k = 0; k < N; ++k) {
    for (int leg = 0; leg < kNumLegs; ++leg) {
      const Eigen::Index col = kInputDim * k + 3 * leg;
      if (schedule.contact[k][leg]) {
        qp.G.block<6, 3>(ri, col) = pyr.G;
        qp.h.segment<6>(ri) = pyr.h;
        ri += 6;
      } else {
        qp.E.block<3, 3>(re, col).setIdentity();
        re += 3;
      }
    }
  }
  return gp;
}

GRFProblem build_grf_problem(const RobotParams& params, const HorizonWeights& weights,
                             const GaitSchedule& schedule, double mpc_dt, const BodyState& state,
                             const BodyState& desired, const FootPositions& feet) {
  return build_grf_problem(params, weights, schedule, mpc_dt, state, desired, feet,
                           params.mu_mpc);
}

GRFSolution solve_grf(const GRFProblem& problem, QpSolver& solver) {
  GRFSolution sol;
  sol.qp = solver.solve(problem.qp);
  sol.U_f = sol.qp.u_star;
  sol.block = committed_block(problem.schedule);
  sol.u_f_now = unstack(sol.U_f.head<kInputDim>());
  sol.u_f_at_M = unstack(sol.U_f.segment<kInputDim>(kInputDim * sol.block));
  return sol;
}

GRFSolution solve_grf(const GRFProblem& problem) {
  QpSolver solver;
  return solve_grf(problem, solver);
}

}  // namespace dualmpc
