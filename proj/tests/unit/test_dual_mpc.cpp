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

#include <cmath>

#include "dualmpc/dual_mpc.hpp"
#include "dualmpc/error.hpp"
#include "test_util.hpp"

using namespace dualmpc;

namespace {

const RobotParams kP = go1_params();

BodyState hover() {
  BodyState s;
  s.p = Vec3(0, 0, kP.nominal_height);
  return s;
}

struct Rig {
  ControllerConfig cfg;
  FootPositions feet = nominal_feet(kP);
  DualMpcState ctx = DualMpcState::initial(kP, nominal_feet(kP));

  explicit Rig(const GaitConfig& g) : cfg(ControllerConfig::with_gait(g)) { cfg.keep_problems = true; }
};

}  // namespace

TEST(Tick, HoverFixedPoint) {
  Rig r(GaitConfig::stand());
  const BodyState x = hover();
  const TickResult a = tick(r.ctx, r.cfg, 0.0, x, x, r.feet);
  const TickResult b = tick(a.state, r.cfg, 0.05, x, x, r.feet);
  for (int leg = 0; leg < kNumLegs; ++leg) {
    EXPECT_NEAR(a.command.forces[leg].z(), kP.mass * 9.81 / 4, 0.01 * kP.mass * 9.81 / 4);
    EXPECT_MAT_NEAR(a.command.footsteps[leg], r.feet[leg], 1e-8);
    EXPECT_MAT_NEAR(a.command.forces[leg], b.command.forces[leg], 1e-8);
    EXPECT_MAT_NEAR(a.command.footsteps[leg], b.command.footsteps[leg], 1e-8);
  }
  EXPECT_FALSE(a.command.any_fallback());
  EXPECT_EQ(a.state.tick_count, 1);
}

TEST(Tick, CommittedFootstepsInsideBands) {
  Rig r(GaitConfig::trot());
  BodyState x = hover(), xd = hover();
  x.p_dot = xd.p_dot = Vec3(0.5, 0, 0);
  for (double t : {0.0, 0.05, 0.1, 0.15, 0.2, 0.3}) {
    const TickResult res = tick(r.ctx, r.cfg, t, x, xd, r.feet);
    ASSERT_TRUE(res.command.footstep_problem);
    const FootstepProblem& fp = *res.command.footstep_problem;
    EXPECT_LE((fp.qp.G * res.command.U_p - fp.qp.h).maxCoeff(), 1e-6);
    for (int leg = 0; leg < kNumLegs; ++leg) {
      if (res.command.schedule.contact[0][leg]) EXPECT_MAT_NEAR(res.command.footsteps[leg], r.feet[leg], 0.0);
      else EXPECT_MAT_NEAR(res.command.footsteps[leg],
                           res.command.U_p.segment<3>(kInputDim * committed_block(res.command.schedule) + 3 * leg), 1e-12);
    }
  }
}

TEST(Tick, QpBeatsHeuristicUnderRollRate) {
  Rig r(GaitConfig::trot());
  BodyState x = hover();
  x.omega = Vec3(0.8, 0, 0);
  const TickResult res = tick(r.ctx, r.cfg, 0.6 * 0.25, x, hover(), r.feet);
  const FootstepProblem& fp = *res.command.footstep_problem;
  VectorXd U = res.command.U_p;
  for (const SwingGroup& g : fp.groups)
    for (int k = g.first; k <= g.last; ++k) U.segment<3>(kInputDim * k + 3 * index(g.leg)) = fp.heuristic_targets[index(g.leg)];
  EXPECT_LT(fp.qp.objective(res.command.U_p), fp.qp.objective(U));
  double shift = 0.0;
  for (Leg leg : {Leg::LF, Leg::RH}) shift += (res.command.footsteps[index(leg)] - res.command.heuristic_targets[index(leg)]).norm();
  EXPECT_GT(shift, 1e-4);
}

TEST(Baseline, MatchesGrfBranchAndHeuristic) {
  {
    Rig r(GaitConfig::stand());
    const BodyState x = hover();
    const TickResult d = tick(r.ctx, r.cfg, 0.0, x, x, r.feet);
    const TickResult b = baseline_tick(r.ctx, r.cfg, 0.0, x, x, r.feet);
    for (int leg = 0; leg < kNumLegs; ++leg) EXPECT_MAT_NEAR(d.command.forces[leg], b.command.forces[leg], 0.0);
  }
  Rig r(GaitConfig::trot());
  BodyState x = hover(), xd = hover();
  x.p_dot = Vec3(0.25, 0.05, 0);
  xd.p_dot = Vec3(0.3, 0, 0);
  const TickResult b = baseline_tick(r.ctx, r.cfg, 0.1, x, xd, r.feet);
  const LegVectors h = heuristic_footsteps(kP, r.cfg.gains, x, xd, 0.25);
  for (Leg leg : {Leg::LF, Leg::RH}) EXPECT_MAT_NEAR(b.command.footsteps[index(leg)], h[index(leg)], 0.0);
  EXPECT_EQ(b.command.footstep.solve_time, 0.0);
  EXPECT_FALSE(b.command.footstep_problem);
}

TEST(Tick, FootstepFallbackToClippedHeuristic) {
  Rig r(GaitConfig::trot());
  BodyState x = hover();
  x.p_dot = Vec3(3.0, 0, 0);
  r.cfg.footstep_origin = FootstepOrigin::Current;
  const TickResult res = tick(r.ctx, r.cfg, 0.0, x, x, r.feet);
  EXPECT_TRUE(res.command.footstep_fallback);
  for (Leg leg : {Leg::LF, Leg::RH}) {
    const Vec3 want = clip_to_workspace(kP, x, leg, res.command.heuristic_targets[index(leg)]);
    EXPECT_MAT_NEAR(res.command.footsteps[index(leg)], want, 1e-12);
  }
}

TEST(ClipToWorkspace, RespectsYaw) {
  BodyState x = hover();
  x.theta.z() = M_PI / 2;
  const Vec3 far(5.0, 5.0, 0.0);
  const Vec3 c = clip_to_workspace(kP, x, Leg::RF, far);
  const Vec3 body = rot_z(M_PI / 2).transpose() * (c - x.p);
  const Box3& w = kP.workspace_bounds[index(Leg::RF)];
  EXPECT_NEAR(body.x(), w.max.x(), 1e-12);
  EXPECT_NEAR(body.y(), w.min.y(), 1e-12);
  EXPECT_EQ(c.z(), 0.0);
}

TEST(ForcesAt, PicksThePlannedBlock) {
  ControlCommand c;
  c.forces.fill(Vec3(1, 1, 1));
  EXPECT_MAT_NEAR(c.forces_at(0.03, 0.025)[0], Vec3(1, 1, 1), 0.0);
  c.U_f = VectorXd::LinSpaced(3 * kInputDim, 0, 3 * kInputDim - 1);
  EXPECT_EQ(c.forces_at(0.0, 0.025)[0].x(), 0.0);
  EXPECT_EQ(c.forces_at(0.03, 0.025)[0].x(), 12.0);
  EXPECT_EQ(c.forces_at(0.05, 0.025)[1].x(), 27.0);  // exactly on a block edge
  EXPECT_EQ(c.forces_at(9.0, 0.025)[0].x(), 24.0);   // clamped to the last block
}

TEST(FootstepOrigin, Parse) {
  EXPECT_EQ(parse_footstep_origin("current"), FootstepOrigin::Current);
  EXPECT_STREQ(to_string(parse_footstep_origin("predicted")), "predicted");
  EXPECT_THROW(parse_footstep_origin("later"), Error);
}

TEST(Config, HorizonMismatchRejected) {
  ControllerConfig c = ControllerConfig::with_gait(GaitConfig::trot());
  c.grf_weights = HorizonWeights::grf_default(5);
  EXPECT_THROW(c.validate(), Error);
}
