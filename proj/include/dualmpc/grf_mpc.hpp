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

#include <cmath>

#include "dualmpc/gait.hpp"
#include "dualmpc/mpc_core.hpp"
#include "dualmpc/qp.hpp"

namespace dualmpc {

inline constexpr double kFzMaxFactor = 1.5;  // f_z cap as a multiple of m |g|

/// Pyramid rows G f <= h for one stance leg-step:
///   +-f_x - mu f_z <= 0, +-f_y - mu f_z <= 0, -f_z <= 0, f_z <= fz_max.
struct PyramidRows {
  Eigen::Matrix<double, 6, 3> G;
  Eigen::Matrix<double, 6, 1> h;

  bool satisfied(const Vec3& f, double tol = 0.0) const {
    return ((G * f - h).array() <= tol).all();
  }
  double max_violation(const Vec3& f) const { return (G * f - h).maxCoeff(); }
};

PyramidRows pyramid_rows(double mu, double fz_max = HUGE_VAL);

double fz_max(const RobotParams& params);

struct GRFProblem {
  GaitSchedule schedule;
  double mu = 0.0;
  double fz_max = 0.0;
  CondensedQP qp;
};

struct GRFSolution {
  VectorXd U_f;
  LegForces u_f_now{};
  LegForces u_f_at_M{};
  int block = 0;
  QPSolution qp;
};

/// feet enter the moment arms of every horizon step.
GRFProblem build_grf_problem(const RobotParams& params, const HorizonWeights& weights,
                             const GaitSchedule& schedule, double mpc_dt, const BodyState& state,
                             const BodyState& desired, const FootPositions& feet, double mu);
GRFProblem build_grf_problem(const RobotParams& params, const HorizonWeights& weights,
                             const GaitSchedule& schedule, double mpc_dt, const BodyState& state,
                             const BodyState& desired, const FootPositions& feet);

GRFSolution solve_grf(const GRFProblem& problem, QpSolver& solver);
GRFSolution solve_grf(const GRFProblem& problem);

}  // namespace dualmpc
