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
#include "dualmpc/grf_mpc.hpp"
#include "test_util.hpp"

using namespace dualmpc;

namespace {

const RobotParams kP = go1_params();
const double kWeight = 12.0 * 9.81;

BodyState hover() {
  BodyState s;
  s.p = Vec3(0, 0, kP.nominal_height);
  return s;
}

GRFSolution solve_at(const GaitSchedule& s, const BodyState& x0, const BodyState& xd, double mu = 0.5) {
  return solve_grf(build_grf_problem(kP, HorizonWeights::grf_default(s.horizon()), s, 0.025, x0, xd,
                                     nominal_feet(kP), mu));
}

const GaitSchedule kStand = schedule_at(GaitConfig::stand(), 0.0);

}  // namespace

TEST(Pyramid, Rows) {
  const PyramidRows r = pyramid_rows(0.4);
  EXPECT_TRUE(r.satisfied(Vec3(0.3, 0, 1)));
  EXPECT_FALSE(r.satisfied(Vec3(0.5, 0, 1)));
  EXPECT_NEAR(r.max_violation(Vec3(0.5, 0, 1)), 0.1, 1e-15);
  EXPECT_FALSE(r.satisfied(Vec3(0, 0, -1)));
  const PyramidRows capped = pyramid_rows(0.4, 50.0);
  EXPECT_FALSE(capped.satisfied(Vec3(0, 0, 51)));
  EXPECT_THROW(pyramid_rows(0.0), Error);
  EXPECT_NEAR(fz_max(kP), 1.5 * kWeight, 1e-12);
}

TEST(Grf, HoverStandShares) {
  const GRFSolution s = solve_at(kStand, hover(), hover());
  Vec3 sum = Vec3::Zero();
  for (const Vec3& f : s.u_f_now) {
    EXPECT_MAT_NEAR(f, Vec3(0, 0, kWeight / 4), 1e-3 * kWeight);
    sum += f;
  }
  EXPECT_NEAR(sum.z(), kWeight, 0.01 * kWeight);
}

TEST(Grf, SwingLegsCarryNothing) {
  const GaitSchedule s = schedule_at(GaitConfig::trot(), 0.0);  // LF, RH swing
  const GRFSolution sol = solve_at(s, hover(), hover());
  for (int k = 0; k < s.horizon(); ++k) {
    EXPECT_EQ(sol.U_f.segment<3>(kInputDim * k + 3 * index(Leg::LF)).norm(), 0.0);
    EXPECT_EQ(sol.U_f.segment<3>(kInputDim * k + 3 * index(Leg::RH)).norm(), 0.0);
  }
  EXPECT_GT(sol.u_f_now[index(Leg::RF)].z(), 0.0);
}

TEST(Grf, FlightIsAllZero) {
  const GaitSchedule s = GaitSchedule::from_table(std::vector<ContactRow>(4, ContactRow{}));
  const GRFSolution sol = solve_at(s, hover(), hover());
  EXPECT_EQ(sol.U_f.norm(), 0.0);
}

TEST(Grf, TangentialShrinksWithFriction) {
  BodyState xd = hover();
  xd.p_dot = Vec3(0, 0.6, 0);
  double last = HUGE_VAL;
  for (double mu : {0.5, 0.1, 0.02}) {
    const GRFSolution s = solve_at(kStand, hover(), xd, mu);
    double tangential = 0.0;
    for (const Vec3& f : s.u_f_now) tangential += f.head<2>().norm();
    EXPECT_LT(tangential, last) << "mu " << mu;
    for (const Vec3& f : s.u_f_now) EXPECT_LE(std::abs(f.y()), mu * f.z() + 1e-6);
    last = tangential;
  }
}

TEST(Grf, PitchCommandShiftsLoad) {
  BodyState xd = hover();
  xd.theta.y() = 0.1;  // nose down in Z-Y-X angles: needs +y moment
  const GRFSolution s = solve_at(kStand, hover(), xd);
  for (Leg front : {Leg::RF, Leg::LF}) EXPECT_LT(s.u_f_now[index(front)].z(), kWeight / 4);
  for (Leg hind : {Leg::RH, Leg::LH}) EXPECT_GT(s.u_f_now[index(hind)].z(), kWeight / 4);
}

TEST(Grf, CommittedBlock) {
  const GaitSchedule s = schedule_at(GaitConfig::trot(), 0.6 * 0.25);
  const GRFSolution sol = solve_at(s, hover(), hover());
  EXPECT_EQ(sol.block, 4);
  for (int leg = 0; leg < kNumLegs; ++leg)
    EXPECT_MAT_NEAR(sol.u_f_at_M[leg], sol.U_f.segment<3>(kInputDim * 4 + 3 * leg), 0.0);
}

TEST(Grf, EveryStanceBlockInsidePyramid) {
  BodyState x0 = hover();
  x0.p_dot = Vec3(0.4, -0.2, 0.05);
  x0.omega = Vec3(0.5, -0.3, 0.2);
  const GaitSchedule s = schedule_at(GaitConfig::trot(), 0.37);
  const GRFProblem gp = build_grf_problem(kP, HorizonWeights::grf_default(10), s, 0.025, x0, hover(),
                                          nominal_feet(kP), 0.5);
  const GRFSolution sol = solve_grf(gp);
  const PyramidRows r = pyramid_rows(gp.mu, gp.fz_max);
  for (int k = 0; k < 10; ++k)
    for (int leg = 0; leg < kNumLegs; ++leg)
      if (s.contact[k][leg]) EXPECT_LE(r.max_violation(sol.U_f.segment<3>(kInputDim * k + 3 * leg)), 1e-6);
}
