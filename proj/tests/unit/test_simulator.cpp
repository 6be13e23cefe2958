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

#include "dualmpc/error.hpp"
#include "dualmpc/simulator.hpp"
#include "test_util.hpp"

using namespace dualmpc;

namespace {

const RobotParams kP = go1_params();

SimConfig stand_cfg() {
  SimConfig c;
  c.gait = GaitConfig::stand();
  return c;
}

LegForces share() {
  LegForces f;
  f.fill(Vec3(0, 0, kP.mass * 9.81 / 4));
  return f;
}

double mech_energy(const SimState& s) { return kinetic_energy(s, kP) + potential_energy(s, kP); }

}  // namespace

TEST(ClampSlip, Examples) {
  SlipResult a = clamp_slip(Vec3(0.3, 0, 1), 0.4);
  EXPECT_MAT_NEAR(a.applied, Vec3(0.3, 0, 1), 0.0);
  EXPECT_FALSE(a.slipped);
  SlipResult b = clamp_slip(Vec3(0.8, 0, 1), 0.4);
  EXPECT_MAT_NEAR(b.applied, Vec3(0.4, 0, 1), 1e-15);
  EXPECT_TRUE(b.slipped);
  SlipResult c = clamp_slip(Vec3(0.2, -0.1, 0), 0.4);
  EXPECT_MAT_NEAR(c.applied, Vec3::Zero(), 0.0);
  EXPECT_TRUE(c.slipped);
  EXPECT_THROW(clamp_slip(Vec3(NAN, 0, 1), 0.4), Error);
}

TEST(Step, FreeFall) {
  const Terrain t = Terrain::flat();
  SimState s = initial_state(kP, t, 0.3);
  s.omega = Vec3(0, 0, 0.5);
  const SimConfig cfg = stand_cfg();
  for (int k = 0; k < 100; ++k) {
    const SimState n = step(s, kP, zero_legs(), s.feet(), t, {}, cfg);
    // Linear momentum changes by -m g dt every step.
    EXPECT_NEAR(kP.mass * (n.p_dot.z() - s.p_dot.z()), -kP.mass * 9.81 * cfg.dt, 1e-9);
    EXPECT_MAT_NEAR(n.omega, Vec3(0, 0, 0.5), 1e-15);
    s = n;
  }
  EXPECT_NEAR(s.p_dot.z(), -9.81 * 0.1, 1e-12);
}

TEST(Step, HoverHolds) {
  const Terrain t = Terrain::flat();
  SimState s = initial_state(kP, t, 0.3);
  const SimState s0 = s;
  for (int k = 0; k < 1000; ++k) s = step(s, kP, share(), s.feet(), t, {}, stand_cfg());
  EXPECT_LE((s.p_dot - s0.p_dot).norm(), 1e-3);
  EXPECT_LE((s.omega - s0.omega).norm(), 1e-3);
  EXPECT_LE((s.p - s0.p).norm(), 1e-3);
  EXPECT_FALSE(has_fallen(s, t, stand_cfg()));
}

TEST(Step, PureYawTorque) {
  const Terrain t = Terrain::flat();
  SimState s = initial_state(kP, t, 0.3);
  Disturbance d;
  d.torque = Vec3(0, 0, 0.9);
  for (int k = 0; k < 100; ++k) s = step(s, kP, share(), s.feet(), t, {d}, stand_cfg());
  EXPECT_NEAR(s.omega.z(), 0.9 * 0.1 / 0.3, 1e-6);
}

TEST(Step, DisturbanceWindowAndOffset) {
  Disturbance d;
  d.force = Vec3(0, 0, -10);
  d.offset = Vec3(0.1, 0, 0);
  d.t_start = 0.5;
  d.t_end = 0.6;
  EXPECT_FALSE(d.active(0.4));
  EXPECT_TRUE(d.active(0.5));
  EXPECT_FALSE(d.active(0.6));
  const Terrain t = Terrain::flat();
  SimState s = initial_state(kP, t, 0.3);
  s.t = 0.5;
  const SimState n = step(s, kP, share(), s.feet(), t, {d}, stand_cfg());
  // offset x force = (0.1,0,0) x (0,0,-10) = (0, 1, 0)
  EXPECT_NEAR(n.omega.y(), 1.0 / 0.25 * 1e-3, 1e-12);
  Disturbance bad;
  bad.t_start = 2.0;
  bad.t_end = 1.0;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(Step, RotationStaysOrthonormal) {
  const Terrain t = Terrain::flat();
  SimState s = initial_state(kP, t, 0.3);
  s.omega = Vec3(3.0, -2.0, 5.0);
  for (int k = 0; k < 200; ++k) {
    s = step(s, kP, share(), s.feet(), t, {}, stand_cfg());
    EXPECT_LE((s.R_wb.transpose() * s.R_wb - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Step, GroundPenetrationThrows) {
  const Terrain t = Terrain::flat();
  SimState s = initial_state(kP, t, 0.3);
  try {
    for (int k = 0; k < 2000; ++k) s = step(s, kP, zero_legs(), s.feet(), t, {}, stand_cfg());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BodyGroundPenetration);
  }
}

TEST(Step, RejectsLargeDt) {
  const Terrain t = Terrain::flat();
  SimConfig c = stand_cfg();
  c.dt = 5e-3;
  const SimState s = initial_state(kP, t, 0.3);
  EXPECT_THROW(step(s, kP, share(), s.feet(), t, {}, c), Error);
}

TEST(Step, SwingFollowsGaitAndLandsOnTarget) {
  const Terrain t = Terrain::flat();
  SimConfig c;  // trot: LF, RH lift at t = 0
  SimState s = initial_state(kP, t, 0.3);
  FootPositions targets = s.feet();
  targets[index(Leg::LF)] += Vec3(0.05, 0.01, 0);
  s = step(s, kP, share(), targets, t, {}, c);
  EXPECT_FALSE(s.foot[index(Leg::LF)].contact);
  EXPECT_TRUE(s.foot[index(Leg::RF)].contact);
  while (s.t < 0.2) s = step(s, kP, share(), targets, t, {}, c);
  EXPECT_GT(s.foot[index(Leg::LF)].pos.z(), 0.0);
  while (s.t < 0.2505) s = step(s, kP, share(), targets, t, {}, c);
  EXPECT_TRUE(s.foot[index(Leg::LF)].contact);
  EXPECT_MAT_NEAR(s.foot[index(Leg::LF)].pos, targets[index(Leg::LF)], 1e-12);
}

TEST(Step, SlipDriftIsMonotoneInFriction) {
  LegForces f = share();
  for (Vec3& v : f) v.x() = 0.5 * v.z();
  double last = HUGE_VAL;
  for (double mu : {0.2, 0.4, 0.6}) {
    const Terrain t = Terrain::flat(mu);
    SimState s = initial_state(kP, t, 0.3);
    for (int k = 0; k < 200; ++k) s = step(s, kP, f, s.feet(), t, {}, stand_cfg());
    EXPECT_LE(s.total_slip(), last);
    last = s.total_slip();
  }
  EXPECT_EQ(last, 0.0);
}

TEST(Touchdown, RegionHeights) {
  Terrain t;
  TerrainRegion a;
  a.x_min = 0.0;
  a.x_max = 1.0;
  a.height = 0.05;
  t.regions = {a};
  SimState s = initial_state(kP, Terrain::flat(), 0.3);
  const SimState in = touchdown(s, Leg::RF, Vec3(0.5, 0, 0.3), t);
  EXPECT_EQ(in.foot[0].pos.z(), 0.05);
  EXPECT_FALSE(in.foot[0].outside_terrain);
  const SimState out = touchdown(s, Leg::RF, Vec3(3.0, 0, 0.3), t);
  EXPECT_EQ(out.foot[0].pos.z(), 0.05);
  EXPECT_TRUE(out.foot[0].outside_terrain);
}

TEST(Compliance, StaticDeflection) {
  const Terrain t = [] {
    Terrain x;
    TerrainRegion r;
    r.stiffness = 5000.0;
    r.damping = 150.0;
    x.regions = {r};
    return x;
  }();
  SimState s = initial_state(kP, t, 0.3);
  for (int k = 0; k < 1000; ++k) s = step(s, kP, share(), s.feet(), t, {}, stand_cfg());
  const double F = kP.mass * 9.81 / 4;
  for (const FootState& f : s.foot) {
    EXPECT_NEAR(f.deflection, F / 5000.0, 1e-9);
    EXPECT_NEAR(f.pos.z(), -F / 5000.0, 1e-9);
  }
}

TEST(Compliance, EnergyNonIncreasingWithoutCommand) {
  TerrainRegion r;
  r.stiffness = 4000.0;
  r.damping = 100.0;
  Terrain t;
  t.regions = {r};
  SimState s = initial_state(kP, t, 0.3);
  for (FootState& f : s.foot) f.deflection = 0.01;
  auto energy = [&](const SimState& x) {
    double e = mech_energy(x);
    for (const FootState& f : x.foot) e += 0.5 * r.stiffness * f.deflection * f.deflection;
    return e;
  };
  for (int k = 0; k < 100; ++k) {
    const SimState n = step(s, kP, zero_legs(), s.feet(), t, {}, stand_cfg());
    EXPECT_LE(energy(n), energy(s) + 1e-12);
    s = n;
  }
}

TEST(Terrain, NearestRegionOutside) {
  Terrain t;
  TerrainRegion a, b;
  a.x_max = 0.0;
  a.height = 0.1;
  b.x_min = 2.0;
  b.height = 0.3;
  t.regions = {a, b};
  bool outside = false;
  EXPECT_EQ(t.at(1.5, 0.0, &outside).height, 0.3);
  EXPECT_TRUE(outside);
  EXPECT_EQ(t.height(-1.0, 0.0), 0.1);
  Terrain bad;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(BodyState, FromSim) {
  SimState s = initial_state(kP, Terrain::flat(), 0.3, Vec3(1, 2, 0), 0.4);
  const BodyState b = body_state(s);
  EXPECT_MAT_NEAR(b.p, Vec3(1, 2, 0.3), 1e-15);
  EXPECT_NEAR(b.theta.z(), 0.4, 1e-12);
}
