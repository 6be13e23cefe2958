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

#pragma once

#include <array>
#include <vector>

#include "dualmpc/gait.hpp"
#include "dualmpc/mpc_core.hpp"
#include "dualmpc/qp.hpp"

namespace dualmpc {

/// Four half-spaces A p_b <= b on one world-frame foot position.
struct HalfSpaces {
  Eigen::Matrix<double, 4, 3> A = Eigen::Matrix<double, 4, 3>::Zero();
  Eigen::Vector4d b = Eigen::Vector4d::Zero();

  bool contains(const Vec3& p_b, double tol = 0.0) const {
    return ((A * p_b - b).array() <= tol).all();
  }
  double max_violation(const Vec3& p_b) const { return (A * p_b - b).maxCoeff(); }
};

/// Capture-point band in world form, x and y body axes only:
///   A_q R' p_b <= b_q + A_q R' p.
std::array<HalfSpaces, kNumLegs> cp_inequality(const RobotParams& params, const BodyState& state);

/// Kinematic box around the hips, body x and y axes, in the same world form.
std::array<HalfSpaces, kNumLegs> workspace_inequality(const RobotParams& params,
                                                      const BodyState& state);

/// One touchdown variable shared by consecutive horizon blocks of a leg.
struct SwingGroup {
  Leg leg = Leg::RF;
  int first = 0;  // block carrying the constraints
  int last = 0;   // inclusive
};

struct FootstepProblem {
  GaitSchedule schedule;
  FootPositions current_feet{};
  LegVectors heuristic_targets{};
  /// pinned[k][leg]: block k of that leg is fixed to current_feet.
  std::vector<ContactRow> pinned;
  std::vector<SwingGroup> groups;
  CondensedQP qp;
};

struct FootstepSolution {
  VectorXd U_p;
  FootPositions u_p_at_M{};
  int block = 0;
  QPSolution qp;
};

FootstepProblem build_footstep_problem(const RobotParams& params, const HorizonWeights& weights,
                                       const GaitSchedule& schedule, double mpc_dt,
                                       const BodyState& state, const BodyState& desired,
                                       const LegForces& forces_at_M,
                                       const FootPositions& current_feet,
                                       const LegVectors& heuristic_targets);

FootstepSolution solve_footstep(const FootstepProblem& problem, QpSolver& solver);
FootstepSolution solve_footstep(const FootstepProblem& problem);

}  // namespace dualmpc
