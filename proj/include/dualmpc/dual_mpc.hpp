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

#include <memory>
#include <string>

#include "dualmpc/footstep_mpc.hpp"
#include "dualmpc/gait.hpp"
#include "dualmpc/grf_mpc.hpp"
#include "dualmpc/heuristic.hpp"
#include "dualmpc/mpc_core.hpp"
#include "dualmpc/qp.hpp"

namespace dualmpc {

enum class ControllerMode { Dual, Baseline };

/// Where the footstep QP starts its horizon: at the measured state, or at the
/// state the GRF plan predicts for block M, when the swing legs touch down.
enum class FootstepOrigin { Current, Predicted };

FootstepOrigin parse_footstep_origin(const std::string& name);
const char* to_string(FootstepOrigin origin);

struct ControllerConfig {
  RobotParams params = go1_params();
  GaitConfig gait = GaitConfig::trot();
  HorizonWeights footstep_weights = HorizonWeights::footstep_default(10);
  HorizonWeights grf_weights = HorizonWeights::grf_default(10);
  HeuristicGains gains;
  QpOptions qp;
  HeightQuery height;
  FootstepOrigin footstep_origin = FootstepOrigin::Predicted;
  /// Retain the assembled QPs in the command (for dumps and checks).
  bool keep_problems = false;

  /// Default weights resized to the gait horizon.
  static ControllerConfig with_gait(const GaitConfig& gait, RobotParams params = go1_params());
  void validate() const;
};

struct QpDiagnostics {
  bool solved = false;
  int iterations = 0;
  double kkt_residual = 0.0;
  double solve_time = 0.0;  // QP build + solve wall time [s]
};

struct ControlCommand {
  LegForces forces{};
  FootPositions footsteps{};
  GaitSchedule schedule;
  int M = 0;
  LegForces forces_at_M{};
  LegVectors heuristic_targets{};
  QpDiagnostics grf;
  QpDiagnostics footstep;
  bool grf_relaxed = false;
  bool grf_fallback = false;
  bool footstep_fallback = false;
  VectorXd U_f;
  VectorXd U_p;
  std::shared_ptr<const GRFProblem> grf_problem;
  std::shared_ptr<const FootstepProblem> footstep_problem;

  bool any_fallback() const { return grf_fallback || footstep_fallback; }

  /// Force to apply `elapsed` seconds after the tick: the planned block
  /// covering that instant, or `forces` when no plan is available.
  LegForces forces_at(double elapsed, double mpc_dt) const;
};

struct DualMpcState {
  FootPositions last_footsteps{};
  LegForces last_forces_at_M{};
  LegForces last_forces{};
  long tick_count = 0;

  /// Seeds the footholds from the measured contact points and the forces
  /// with an even weight share.
  static DualMpcState initial(const RobotParams& params, const FootPositions& feet);
};

struct TickResult {
  ControlCommand command;
  DualMpcState state;
};

/// One pass: GRF QP, heuristic targets, footstep QP fed with the GRF
/// solution at the transition block, commitment of the touchdown targets.
TickResult tick(const DualMpcState& ctx, const ControllerConfig& config, double t,
                const BodyState& x0, const BodyState& x_desired, const FootPositions& current_feet);

/// Heuristic footholds (clipped to the workspace) with the same GRF QP.
TickResult baseline_tick(const DualMpcState& ctx, const ControllerConfig& config, double t,
                         const BodyState& x0, const BodyState& x_desired,
                         const FootPositions& current_feet);

TickResult controller_tick(ControllerMode mode, const DualMpcState& ctx,
                           const ControllerConfig& config, double t, const BodyState& x0,
                           const BodyState& x_desired, const FootPositions& current_feet);

/// Moves the x, y of target into the leg's workspace box (body axes) at fixed z.
Vec3 clip_to_workspace(const RobotParams& params, const BodyState& state, Leg leg,
                       const Vec3& target);

}  // namespace dualmpc
