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

#include "dualmpc/footstep_mpc.hpp"

#include <cmath>

#include "dualmpc/error.hpp"

namespace dualmpc {
namespace {

// Rows [S; -S] R' with S selecting body x and y.
Eigen::Matrix<double, 4, 3> band_rows(const Mat3& R) {
  const Mat3 Rt = R.transpose();
  Eigen::Matrix<double, 4, 3> A;
  A.topRows<2>() = Rt.topRows<2>();
  A.bottomRows<2>() = -Rt.topRows<2>();
  return A;
}

// lo <= S R'(p_b - p) - offset <= hi.
HalfSpaces body_band(const Mat3& R, const Vec3& p, const Eigen::Vector2d& offset,
                     const Eigen::Vector2d& lo, const Eigen::Vector2d& hi) {
  HalfSpaces hs;
  hs.A = band_rows(R);
  const Eigen::Vector2d p_b = (R.transpose() * p).head<2>();
  hs.b.head<2>() = hi + offset + p_b;
  hs.b.tail<2>() = -lo - offset - p_b;
  return hs;
}

}  // namespace

std::array<HalfSpaces, kNumLegs> cp_inequality(const RobotParams& params, const BodyState& state) {
  if (!(state.p.z() > 0.0)) {
    throw Error(ErrorCode::NonPositiveHeight, "cp_inequality: body height must be positive");
  }
  const Mat3 R = rot_zyx(state.theta);
  const double c = std::sqrt(state.p.z() / params.gravity.norm());
  const Eigen::Vector2d offset = c * (R.transpose() * state.p_dot).head<2>();
  std::array<HalfSpaces, kNumLegs> out;
  for (int i = 0; i < kNumLegs; ++i) {
    const Box3& d = params.cp_bounds[i];
    // -max <= x <= -min
    out[i] = body_band(R, state.p, offset, -d.max.head<2>(), -d.min.head<2>());
  }
  return out;
}

std::array<HalfSpaces, kNumLegs> workspace_inequality(const RobotParams& params,
                                                      const BodyState& state) {
  const Mat3 R = rot_zyx(state.theta);
  std::array<HalfSpaces, kNumLegs> out;
  for (int i = 0; i < kNumLegs; ++i) {
    const Box3& w = params.workspace_bounds[i];
    out[i] = body_band(R, state.p, Eigen::Vector2d::Zero(), w.min.head<2>(), w.max.head<2>());
  }
  return out;
}

FootstepProblem build_footstep_problem(const RobotParams& params, const HorizonWeights& weights,
                                       const GaitSchedule& schedule, double mpc_dt,
                                       const BodyState& state, const BodyState& desired,
                                       const LegForces& forces_at_M,
                                       const FootPositions& current_feet,
                                       const LegVectors& heuristic_targets) {
  const int N = schedule.horizon();
  if (weights.horizon() != N) {
    throw Error(ErrorCode::InvalidArgument, "footstep problem: weights and schedule disagree on N");
  }
  FootstepProblem fp;
  fp.schedule = schedule;
  fp.current_feet = current_feet;
  fp.heuristic_targets = heuristic_targets;
  fp.pinned.assign(N, ContactRow{false, false, false, false});

  for (int leg = 0; leg < kNumLegs; ++leg) {
    int k = 0;
    while (k < N && schedule.contact[k][leg]) fp.pinned[k++][leg] = true;
    while (k < N) {
      SwingGroup g{kAllLegs[leg], k, k};
      while (g.last + 1 < N && !schedule.contact[g.last + 1][leg]) ++g.last;
      while (g.last + 1 < N && schedule.contact[g.last + 1][leg]) ++g.last;
      fp.groups.push_back(g);
      k = g.last + 1;
    }
  }

  const StateMatrixPair disc =
      discretize_zoh(footstep_dynamics(params, state, forces_at_M), mpc_dt);
  const CondensedPrediction pred = condense(disc, N);

  VectorXd Ud(kInputDim * N);
  for (int k = 0; k < N; ++k) {
    for (int leg = 0; leg < kNumLegs; ++leg) {
      Ud.segment<3>(kInputDim * k + 3 * leg) =
          fp.pinned[k][leg] ? current_feet[leg] : heuristic_targets[leg];
    }
  }
  const QuadraticCost cost =
      build_cost(pred, weights, state, reference_trajectory(desired, N, mpc_dt), Ud);

  int n_pinned = 0, n_ties = 0;
  for (const ContactRow& row : fp.pinned) {
    for (bool b : row) n_pinned += b ? 1 : 0;
  }
  for (const SwingGroup& g : fp.groups) n_ties += g.last - g.first;
  const Eigen::Index n = kInputDim * N;
  const Eigen::Index p = 3 * n_pinned + 3 * n_ties + static_cast<Eigen::Index>(fp.groups.size());
  const Eigen::Index m = 8 * static_cast<Eigen::Index>(fp.groups.size());

  CondensedQP& qp = fp.qp;
  qp.P = cost.P;
  qp.q = cost.q;
  qp.E = MatrixXd::Zero(p, n);
  qp.c = VectorXd::Zero(p);
  qp.G = MatrixXd::Zero(m, n);
  qp.h = VectorXd::Zero(m);

  Eigen::Index r = 0;
  for (int k = 0; k < N; ++k) {
    for (int leg = 0; leg < kNumLegs; ++leg) {
      if (!fp.pinned[k][leg]) continue;
      const Eigen::Index col = kInputDim * k + 3 * leg;
      qp.E.block<3, 3>(r, col).setIdentity();
      qp.c.segment<3>(r) = current_feet[leg];
      r += 3;
    }
  }

  const auto cp = cp_inequality(params, state);
  const auto ws = workspace_inequality(params, state);
  Eigen::Index g_row = 0;
  for (const SwingGroup& g : fp.groups) {
    const int leg = index(g.leg);
    const Eigen::Index first = kInputDim * g.first + 3 * leg;
    qp.E(r, first + 2) = 1.0;
    qp.c[r] = heuristic_targets[leg].z();
    ++r;
    for (int k = g.first + 1; k <= g.last; ++k) {
      const Eigen::Index col = kInputDim * k + 3 * leg;
      qp.E.block<3, 3>(r, col).setIdentity();
      qp.E.block<3, 3>(r, first) = -Mat3::Identity();
      r += 3;
    }
    qp.G.block<4, 3>(g_row, first) = cp[leg].A;
    qp.h.segment<4>(g_row) = cp[leg].b;
    qp.G.block<4, 3>(g_row + 4, first) = ws[leg].A;
    qp.h.segment<4>(g_row + 4) = ws[leg].b;
    g_row += 8;
  }
  return fp;
}

FootstepSolution solve_footstep(const FootstepProblem& problem, QpSolver& solver) {
  FootstepSolution sol;
  sol.qp = solver.solve(problem.qp);
  sol.U_p = sol.qp.u_star;
  sol.block = committed_block(problem.schedule);
  sol.u_p_at_M = unstack(sol.U_p.segment<kInputDim>(kInputDim * sol.block));
  return sol;
}

FootstepSolution solve_footstep(const FootstepProblem& problem) {
  QpSolver solver;
  return solve_footstep(problem, solver);
}

}  // namespace dualmpc
