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
#include <filesystem>
#include <string>

#include "dualmpc/core_math.hpp"

namespace dualmpc {

class KeyValueConfig;

inline constexpr int kNumLegs = 4;
inline constexpr int kStateDim = 13;  // [p, p_dot, Theta, omega, 1]
inline constexpr int kInputDim = 3 * kNumLegs;

/// Leg order RF, LF, RH, LH (1..4 in the usual numbering).
enum class Leg : int { RF = 0, LF = 1, RH = 2, LH = 3 };

constexpr int index(Leg leg) { return static_cast<int>(leg); }
/// Maps the 1-based leg number to a Leg; throws InvalidArgument outside 1..4.
Leg leg_from_number(int number);
const char* leg_name(Leg leg);
inline constexpr std::array<Leg, kNumLegs> kAllLegs{Leg::RF, Leg::LF, Leg::RH, Leg::LH};

using LegVectors = std::array<Vec3, kNumLegs>;
/// Per-leg world-frame ground reaction forces [N].
using LegForces = LegVectors;
/// Per-leg world-frame foot positions [m].
using FootPositions = LegVectors;

LegVectors zero_legs();
Eigen::Matrix<double, kInputDim, 1> stack(const LegVectors& v);
LegVectors unstack(const Eigen::Ref<const VectorXd>& u);

struct Box3 {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();
};

struct RobotParams {
  double mass = 12.0;
  Mat3 inertia = Vec3(0.1, 0.25, 0.3).asDiagonal();
  /// Hip positions in the body frame.
  LegVectors hip_offsets{};
  /// Subtracted from the acceleration, so (0, 0, 9.81) points down.
  Vec3 gravity{0.0, 0.0, 9.81};
  /// Capture-point band per leg: -max <= b_p_foot - b_v sqrt(z/g) <= -min.
  std::array<Box3, kNumLegs> cp_bounds{};
  /// Kinematic box per leg, body frame, relative to the CoM.
  std::array<Box3, kNumLegs> workspace_bounds{};
  double mu_mpc = 0.5;
  double nominal_height = 0.3;

  void validate() const;
};

/// GO1-class preset: 12 kg, diag(0.1, 0.25, 0.3), hips at +-(0.19, 0.047, 0).
RobotParams go1_params();

/// Band of half-width v_max * t_s / 2 in x and y, centred on each hip.
std::array<Box3, kNumLegs> cp_bounds_from_velocity(const LegVectors& hips, double v_max,
                                                   double t_s);
/// Box of +-half around each hip (x, y); z is left unconstrained.
std::array<Box3, kNumLegs> workspace_around_hips(const LegVectors& hips, const Vec3& half);

/// Reads flat key-value robot parameters over the preset (see README for keys).
RobotParams load_robot_params(const KeyValueConfig& cfg, const std::string& section,
                              RobotParams base = go1_params());
RobotParams load_robot_params(const std::filesystem::path& path);
/// Flat key-value text that load_robot_params reads back to the same values.
std::string robot_params_text(const RobotParams& params);

struct BodyState {
  Vec3 p = Vec3::Zero();
  Vec3 p_dot = Vec3::Zero();
  EulerAngles theta = EulerAngles::Zero();
  Vec3 omega = Vec3::Zero();
  /// The augmented constant state; always 1.
  static constexpr double aug = 1.0;

  Eigen::Matrix<double, kStateDim, 1> to_vector() const;
  static BodyState from_vector(const Eigen::Ref<const VectorXd>& x);
};

/// R(Theta) I_body R(Theta)^T.
Mat3 world_inertia(const RobotParams& params, const EulerAngles& theta);

/// Continuous dynamics with the footholds as input (forces held constant):
///   d/dt x = A(f, psi) x + B(f, psi) p_b.
StateMatrixPair footstep_dynamics(const RobotParams& params, const BodyState& state,
                                  const LegForces& forces);

/// Continuous dynamics with the forces as input (footholds held constant):
///   d/dt x = A(psi) x + B(p_b, psi) f.
StateMatrixPair grf_dynamics(const RobotParams& params, const BodyState& state,
                             const FootPositions& feet);

/// Nominal footholds: hips projected to the ground, body level at nominal height.
FootPositions nominal_feet(const RobotParams& params, const Vec3& body_xy = Vec3::Zero(),
                           double yaw = 0.0);

}  // namespace dualmpc
