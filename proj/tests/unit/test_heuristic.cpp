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

#include "dualmpc/heuristic.hpp"
#include "test_util.hpp"

using namespace dualmpc;

namespace {

// Hip of RF at (0.2, -0.15, 0.3) with the body at the origin's height.
RobotParams rig() {
  RobotParams p = go1_params();
  p.hip_offsets[index(Leg::RF)] = Vec3(0.2, -0.15, 0.0);
  return p;
}

BodyState moving(double vx) {
  BodyState s;
  s.p = Vec3(0, 0, 0.3);
  s.p_dot = Vec3(vx, 0, 0);
  return s;
}

}  // namespace

TEST(Heuristic, FeedforwardOnly) {
  const Vec3 f = heuristic_footstep(rig(), {}, moving(0.5), moving(0.5), 0.25, Leg::RF);
  EXPECT_MAT_NEAR(f, Vec3(0.2625, -0.15, 0), 1e-15);
}

TEST(Heuristic, AtRestProjectsHip) {
  const Vec3 f = heuristic_footstep(rig(), {}, moving(0.0), moving(0.0), 0.25, Leg::RF);
  EXPECT_MAT_NEAR(f, Vec3(0.2, -0.15, 0), 1e-15);
}

TEST(Heuristic, YawRateTerm) {
  BodyState d = moving(0.5);
  d.omega.z() = 1.0;
  const Vec3 f = heuristic_footstep(rig(), {}, moving(0.5), d, 0.25, Leg::RF);
  const double dy = -0.5 * std::sqrt(0.3 / 9.81) * 0.5;
  EXPECT_NEAR(dy, -0.0437, 1e-4);
  EXPECT_MAT_NEAR(f, Vec3(0.2625, -0.15 + dy, 0), 1e-15);
}

TEST(Heuristic, VelocityFeedback) {
  HeuristicGains k;
  const Vec3 slow = heuristic_footstep(rig(), k, moving(0.3), moving(0.5), 0.25, Leg::RF);
  EXPECT_NEAR(slow.x(), 0.2 + 0.125 * 0.3 + 0.03 * 0.2, 1e-15);
}

TEST(Heuristic, QueriedHeight) {
  HeuristicGains k;
  k.touchdown_height_mode = TouchdownHeight::QueriedHeight;
  const HeightQuery h = [](double x, double) { return 0.1 * x; };
  const Vec3 f = heuristic_footstep(rig(), k, moving(0.0), moving(0.0), 0.25, Leg::RF, h);
  EXPECT_NEAR(f.z(), 0.02, 1e-15);
  HeuristicGains flat;
  EXPECT_EQ(heuristic_footstep(rig(), flat, moving(0.0), moving(0.0), 0.25, Leg::RF, h).z(), 0.0);
}

TEST(Heuristic, FollowsBodyRotation) {
  BodyState s = moving(0.0);
  s.theta.z() = M_PI / 2;
  const Vec3 f = heuristic_footstep(rig(), {}, s, s, 0.25, Leg::RF);
  EXPECT_MAT_NEAR(f, Vec3(0.15, 0.2, 0), 1e-12);
}
