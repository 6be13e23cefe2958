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
#include <cmath>
#include <string>
#include <vector>

#include "dualmpc/dual_mpc.hpp"
#include "dualmpc/gait.hpp"
#include "dualmpc/model.hpp"

namespace dualmpc {

/// Axis-aligned patch of ground. stiffness == 0 means rigid.
struct TerrainRegion {
  double x_min = -HUGE_VAL, x_max = HUGE_VAL;
  double y_min = -HUGE_VAL, y_max = HUGE_VAL;
  double mu = 0.8;
  double height = 0.0;
  double stiffness = 0.0;  // N/m
  double damping = 0.0;    // N s/m

  bool contains(double x, double y) const {
    return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
  }
  bool compliant() const { return stiffness > 0.0; }
};

struct Terrain {
  /// First matching region wins.
  std::vector<TerrainRegion> regions;

  static Terrain flat(double mu = 0.8);

  /// Region under (x, y); the nearest region when none contains the point.
  const TerrainRegion& at(double x, double y, bool* outside = nullptr) const;
  double height(double x, double y) const { return at(x, y).height; }
  void validate() const;
};

/// Constant wrench at a body-frame offset from the CoM, body-frame axes.
struct Disturbance {
  Vec3 force = Vec3::Zero();
  Vec3 torque = Vec3::Zero();
  Vec3 offset = Vec3::Zero();
  double t_start = 0.0;
  double t_end = HUGE_VAL;

  bool active(double t) const { return t >= t_start && t < t_end; }
  void validate() const;
};

/// How the runner feeds forces between controller ticks: the planned force
/// sequence block by block, or the first block held for the whole tick.
enum class ForceHold { Plan, FirstBlock };

ForceHold parse_force_hold(const std::string& name);
const char* to_string(ForceHold hold);

struct SimConfig {
  double dt = 1e-3;
  double slip_velocity = 0.2;  // anchor drift while slipping [m/s]
  double swing_height = 0.05;
  double fall_clearance = 0.05;
  double fall_angle = 0.6;
  ForceHold force_hold = ForceHold::Plan;
  GaitConfig gait = GaitConfig::trot();

  void validate() const;
};

struct FootState {
  Vec3 pos = Vec3::Zero();
  bool contact = true;
  Vec3 swing_start = Vec3::Zero();
  double swing_start_t = 0.0;
  double deflection = 0.0;  // compliant sink below the surface
  Vec3 applied = Vec3::Zero();
  bool slipped = false;
  double slip_distance = 0.0;
  bool outside_terrain = false;
};

struct SimState {
  Vec3 p = Vec3::Zero();
  Vec3 p_dot = Vec3::Zero();
  Mat3 R_wb = Mat3::Identity();
  Vec3 omega = Vec3::Zero();  // world frame
  std::array<FootState, kNumLegs> foot{};
  double t = 0.0;

  FootPositions feet() const;
  ContactRow foot_contact() const;
  double total_slip() const;
};

/// Level body at `height` above the ground under it, feet under the hips.
SimState initial_state(const RobotParams& params, const Terrain& terrain, double height,
                       const Vec3& xy = Vec3::Zero(), double yaw = 0.0);

struct SlipResult {
  Vec3 applied;
  bool slipped = false;
};

/// Scales the tangential force back onto the pyramid |f_x|, |f_y| <= mu f_z.
SlipResult clamp_slip(const Vec3& f_cmd, double mu_true);

/// Latches a swing foot at (target.x, target.y) on the terrain surface.
SimState touchdown(const SimState& sim, Leg leg, const Vec3& target, const Terrain& terrain);

/// One semi-implicit Euler step of the full rigid-body dynamics.
SimState step(const SimState& sim, const RobotParams& params, const ControlCommand& cmd,
              const Terrain& terrain, const std::vector<Disturbance>& dist,
              const SimConfig& config);
SimState step(const SimState& sim, const RobotParams& params, const LegForces& forces,
              const FootPositions& targets, const Terrain& terrain,
              const std::vector<Disturbance>& dist, const SimConfig& config);

/// Ground-truth body state handed to the controller.
BodyState body_state(const SimState& sim);

bool has_fallen(const SimState& sim, const Terrain& terrain, const SimConfig& config);

double kinetic_energy(const SimState& sim, const RobotParams& params);
double potential_energy(const SimState& sim, const RobotParams& params);

/// Rodrigues' formula for exp(hat(w)).
Mat3 so3_exp(const Vec3& w);

}  // namespace dualmpc
