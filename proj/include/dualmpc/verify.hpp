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

#include <cstdint>
#include <string>
#include <vector>

#include "dualmpc/footstep_mpc.hpp"

namespace dualmpc::verify {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Pinned tolerances and sizes of the acceptance checks.
struct Budget {
  std::uint64_t seed = 20260;
  int reps_hessian = 500;
  int reps_oracle = 200;
  int reps_rollout = 100;
  int reps_gradient = 50;
  int brute_force_states = 20;
  int bench_reps = 400;
  int seeds = 5;
};

// One function per acceptance criterion, numbered as in the README table.
CriterionResult check_cost_hessian(const Budget& b = {});
CriterionResult check_qp_oracle(const Budget& b = {});
CriterionResult check_condensation(const Budget& b = {});
CriterionResult check_cost_gradient(const Budget& b = {});
CriterionResult check_closed_loop_constraints(const Budget& b = {});
CriterionResult check_hover_fixed_point(const Budget& b = {});
CriterionResult check_asym_friction(const Budget& b = {});
CriterionResult check_wrench(const Budget& b = {});
CriterionResult check_footstep_brute_force(const Budget& b = {});
CriterionResult check_timing(const Budget& b = {});
CriterionResult check_sim_order(const Budget& b = {});
CriterionResult check_determinism(const Budget& b = {});

inline constexpr int kNumCriteria = 12;

CriterionResult run_criterion(int id, const Budget& b = {});
/// Runs the listed criteria (all when empty) in order.
std::vector<CriterionResult> run_all(const std::vector<int>& ids = {}, const Budget& b = {});

/// "[PASS] C01 name: detail (1.23 s)".
std::string format(const CriterionResult& r);

/// Exhaustive active-set solution of min 1/2 u'Pu + q'u s.t. G u <= h, for
/// small m: every subset's KKT system is solved and the best feasible point kept.
struct EnumeratedSolution {
  bool feasible = false;
  VectorXd u;
  double objective = 0.0;
};
EnumeratedSolution enumerate_active_sets(const MatrixXd& P, const VectorXd& q, const MatrixXd& G,
                                         const VectorXd& h);

/// Best QP objective over a world x-y grid of the single free footstep of
/// `problem` (one swing group), feasible points only; +inf when none is.
double footstep_grid_minimum(const FootstepProblem& problem, double spacing);

/// Body position and attitude after 1 s of an open-loop four-contact
/// trajectory integrated with step dt, stacked as [p, vec(R)].
VectorXd reference_hover_trajectory(double dt);

}  // namespace dualmpc::verify
