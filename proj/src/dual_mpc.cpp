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

#include "dualmpc/dual_mpc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "dualmpc/error.hpp"

namespace dualmpc {
namespace {

using Clock = std::chrono::steady_clock;

constexpr double kMuRelaxation = 1.1;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool recoverable(const Error& e) {
  return e.code() == ErrorCode::Infeasible || e.code() == ErrorCode::MaxIterations ||
         e.code() == ErrorCode::RankDeficientEqualities;
}

QpDiagnostics diagnostics(const QPSolution& s, double wall) {
  return {true, s.iterations, s.kkt_residual, wall};
}

struct GrfStage {
  GRFSolution solution;
  bool relaxed = false;
  bool fallback = false;
  QpDiagnostics diag;
  std::shared_ptr<const GRFProblem> problem;
};

GrfStage run_grf(const DualMpcState& ctx, const ControllerConfig& cfg, const GaitSchedule& sched,
                 const BodyState& x0, const BodyState& xd) {
  GrfStage out;
  QpSolver solver(cfg.qp);
  const auto t0 = Clock::now();
  double mu = cfg.params.mu_mpc;
  for (int attempt = 0; attempt < 2; ++attempt) {
    try {
      auto problem = std::make_shared<GRFProblem>(build_grf_problem(
          cfg.params, cfg.grf_weights, sched, cfg.gait.mpc_dt, x0, xd, ctx.last_footsteps, mu));
      out.solution = solve_grf(*problem, solver);
      out.diag = diagnostics(out.solution.qp, seconds_since(t0));
      if (cfg.keep_problems) out.problem = std::move(problem);
      return out;
    } catch (const Error& e) {
      if (!recoverable(e)) throw;
      mu *= kMuRelaxation;
      out.relaxed = true;
    }
  }
  // Hold the previous forces, never pushing on a swinging leg.
  out.fallback = true;
  out.solution.block = committed_block(sched);
  out.solution.u_f_now = ctx.last_forces;
  out.solution.u_f_at_M = ctx.last_forces_at_M;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    if (!sched.contact[0][leg]) out.solution.u_f_now[leg].setZero();
    if (!sched.contact[out.solution.block][leg]) out.solution.u_f_at_M[leg].setZero();
  }
  out.diag.solve_time = seconds_since(t0);
  return out;
}

ControlCommand start_command(const GrfStage& grf, const GaitSchedule& sched,
                             const LegVectors& targets) {
  ControlCommand cmd;
  cmd.schedule = sched;
  cmd.M = sched.M;
  cmd.forces = grf.solution.u_f_now;
  cmd.forces_at_M = grf.solution.u_f_at_M;
  cmd.U_f = grf.solution.U_f;
  cmd.grf = grf.diag;
  cmd.grf_relaxed = grf.relaxed;
  cmd.grf_fallback = grf.fallback;
  cmd.grf_problem = grf.problem;
  cmd.heuristic_targets = targets;
  return cmd;
}

DualMpcState next_state(const DualMpcState& ctx, const ControlCommand& cmd) {
  DualMpcState s = ctx;
  s.last_footsteps = cmd.footsteps;
  s.last_forces = cmd.forces;
  s.last_forces_at_M = cmd.forces_at_M;
  ++s.tick_count;
  return s;
}

// Rolls the GRF model forward over the first `blocks` planned force blocks.
BodyState predict_state(const ControllerConfig& cfg, const BodyState& x0, const FootPositions& feet,
                        const VectorXd& U_f, int blocks) {
  const StateMatrixPair d = discretize_zoh(grf_dynamics(cfg.params, x0, feet), cfg.gait.mpc_dt);
  VectorXd x = x0.to_vector();
  for (int k = 0; k < blocks; ++k) x = d.A * x + d.B * U_f.segment<kInputDim>(kInputDim * k);
  return BodyState::from_vector(x);
}

BodyState advance_desired(const BodyState& xd, double dt) {
  BodyState out = xd;
  out.p.head<2>() += dt * xd.p_dot.head<2>();
  out.theta.z() += dt * xd.omega.z();
  return out;
}

LegVectors targets_for(const ControllerConfig& cfg, const BodyState& x0, const BodyState& xd) {
  return heuristic_footsteps(cfg.params, cfg.gains, x0, xd, cfg.gait.t_s, cfg.height);
}

}  // namespace

LegForces ControlCommand::forces_at(double elapsed, double mpc_dt) const {
  if (U_f.size() == 0 || !(mpc_dt > 0.0)) return forces;
  const long blocks = U_f.size() / kInputDim;
  const long k = std::clamp(static_cast<long>(std::floor(elapsed / mpc_dt + 1e-9)), 0L, blocks - 1);
  LegForces f;
  for (int leg = 0; leg < kNumLegs; ++leg) f[leg] = U_f.segment<3>(kInputDim * k + 3 * leg);
  return f;
}

FootstepOrigin parse_footstep_origin(const std::string& name) {
  if (name == "current") return FootstepOrigin::Current;
  if (name == "predicted") return FootstepOrigin::Predicted;
  throw Error(ErrorCode::ConfigParse, "unknown footstep origin '" + name + "'");
}

const char* to_string(FootstepOrigin origin) {
  return origin == FootstepOrigin::Current ? "current" : "predicted";
}

ControllerConfig ControllerConfig::with_gait(const GaitConfig& gait, RobotParams params) {
  ControllerConfig c;
  c.params = std::move(params);
  c.gait = gait;
  c.footstep_weights = HorizonWeights::footstep_default(gait.horizon);
  c.grf_weights = HorizonWeights::grf_default(gait.horizon);
  return c;
}

void ControllerConfig::validate() const {
  params.validate();
  gait.validate();
  footstep_weights.validate();
  grf_weights.validate();
  if (footstep_weights.horizon() != gait.horizon || grf_weights.horizon() != gait.horizon) {
    throw Error(ErrorCode::InvalidArgument, "controller weights must match the gait horizon");
  }
}

DualMpcState DualMpcState::initial(const RobotParams& params, const FootPositions& feet) {
  DualMpcState s;
  s.last_footsteps = feet;
  const Vec3 share(0.0, 0.0, params.mass * params.gravity.norm() / kNumLegs);
  s.last_forces.fill(share);
  s.last_forces_at_M.fill(share);
  return s;
}

Vec3 clip_to_workspace(const RobotParams& params, const BodyState& state, Leg leg,
                       const Vec3& target) {
  const Mat3 Rt = rot_zyx(state.theta).transpose();
  const Box3& box = params.workspace_bounds[index(leg)];
  // Body x, y of a world point with fixed z is affine in its world x, y.
  const Eigen::Matrix2d M2 = Rt.topLeftCorner<2, 2>();
  const Eigen::Vector2d shift = Rt.topRightCorner<2, 1>() * target.z() -
                                (Rt * state.p).head<2>();
  Eigen::Vector2d rel = M2 * target.head<2>() + shift;
  rel = rel.cwiseMax(box.min.head<2>()).cwiseMin(box.max.head<2>());
  Vec3 out = target;
  out.head<2>() = M2.inverse() * (rel - shift);
  return out;
}

TickResult tick(const DualMpcState& ctx, const ControllerConfig& cfg, double t,
                const BodyState& x0, const BodyState& xd, const FootPositions& current_feet) {
  const GaitSchedule sched = schedule_at(cfg.gait, t);
  const GrfStage grf = run_grf(ctx, cfg, sched, x0, xd);
  const LegVectors targets = targets_for(cfg, x0, xd);
  ControlCommand cmd = start_command(grf, sched, targets);

  FootPositions committed{};
  const auto t0 = Clock::now();
  try {
    QpSolver solver(cfg.qp);
    BodyState xs = x0, xds = xd;
    if (cfg.footstep_origin == FootstepOrigin::Predicted && grf.solution.U_f.size() > 0) {
      const int M = committed_block(sched);
      const BodyState xm =
          predict_state(cfg, x0, ctx.last_footsteps, grf.solution.U_f, M);
      // A plan that sinks the body is no basis for a footstep.
      if (xm.p.z() > 0.0) {
        xs = xm;
        xds = advance_desired(xd, M * cfg.gait.mpc_dt);
      }
    }
    auto problem = std::make_shared<FootstepProblem>(build_footstep_problem(
        cfg.params, cfg.footstep_weights, sched, cfg.gait.mpc_dt, xs, xds,
        grf.solution.u_f_at_M, current_feet, targets));
    const FootstepSolution fs = solve_footstep(*problem, solver);
    committed = fs.u_p_at_M;
    cmd.U_p = fs.U_p;
    cmd.footstep = diagnostics(fs.qp, seconds_since(t0));
    if (cfg.keep_problems) cmd.footstep_problem = std::move(problem);
  } catch (const Error& e) {
    if (!recoverable(e)) throw;
    cmd.footstep_fallback = true;
    cmd.footstep.solve_time = seconds_since(t0);
    for (Leg leg : kAllLegs) {
      committed[index(leg)] = clip_to_workspace(cfg.params, x0, leg, targets[index(leg)]);
    }
  }
  for (int leg = 0; leg < kNumLegs; ++leg) {
    cmd.footsteps[leg] = sched.contact[0][leg] ? current_feet[leg] : committed[leg];
  }
  return {cmd, next_state(ctx, cmd)};
}

TickResult baseline_tick(const DualMpcState& ctx, const ControllerConfig& cfg, double t,
                         const BodyState& x0, const BodyState& xd,
                         const FootPositions& current_feet) {
  const GaitSchedule sched = schedule_at(cfg.gait, t);
  const GrfStage grf = run_grf(ctx, cfg, sched, x0, xd);
  const LegVectors targets = targets_for(cfg, x0, xd);
  ControlCommand cmd = start_command(grf, sched, targets);
  for (Leg leg : kAllLegs) {
    const int i = index(leg);
    cmd.footsteps[i] = sched.contact[0][i] ? current_feet[i]
                                           : clip_to_workspace(cfg.params, x0, leg, targets[i]);
  }
  return {cmd, next_state(ctx, cmd)};
}

TickResult controller_tick(ControllerMode mode, const DualMpcState& ctx,
                           const ControllerConfig& config, double t, const BodyState& x0,
                           const BodyState& x_desired, const FootPositions& current_feet) {
  return mode == ControllerMode::Dual ? tick(ctx, config, t, x0, x_desired, current_feet)
                                      : baseline_tick(ctx, config, t, x0, x_desired, current_feet);
}

}  // namespace dualmpc
