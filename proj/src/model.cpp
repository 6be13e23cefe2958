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

#include "dualmpc/model.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "dualmpc/error.hpp"
#include "dualmpc/kv_config.hpp"

namespace dualmpc {
namespace {

constexpr double kDefaultCpVmax = 1.0;
constexpr double kDefaultCpSwing = 0.25;
constexpr double kDefaultWorkspaceHalfX = 0.15;
constexpr double kDefaultWorkspaceHalfY = 0.15;

const char* leg_key(Leg leg) {
  switch (leg) {
    case Leg::RF: return "rf";
    case Leg::LF: return "lf";
    case Leg::RH: return "rh";
    case Leg::LH: return "lh";
  }
  return "?";
}

}  // namespace

Leg leg_from_number(int number) {
  if (number < 1 || number > kNumLegs) {
    throw Error(ErrorCode::InvalidArgument, "leg number must be in 1..4, got " + std::to_string(number));
  }
  return static_cast<Leg>(number - 1);
}

const char* leg_name(Leg leg) {
  switch (leg) {
    case Leg::RF: return "RF";
    case Leg::LF: return "LF";
    case Leg::RH: return "RH";
    case Leg::LH: return "LH";
  }
  return "?";
}

LegVectors zero_legs() {
  LegVectors v;
  v.fill(Vec3::Zero());
  return v;
}

Eigen::Matrix<double, kInputDim, 1> stack(const LegVectors& v) {
  Eigen::Matrix<double, kInputDim, 1> u;
  for (int i = 0; i < kNumLegs; ++i) u.segment<3>(3 * i) = v[i];
  return u;
}

LegVectors unstack(const Eigen::Ref<const VectorXd>& u) {
  if (u.size() != kInputDim) throw Error(ErrorCode::InvalidArgument, "unstack: expected 12 entries");
  LegVectors v;
  for (int i = 0; i < kNumLegs; ++i) v[i] = u.segment<3>(3 * i);
  return v;
}

void RobotParams::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw Error(ErrorCode::InvalidArgument, "mass must be positive");
  if (!inertia.allFinite() || (inertia - inertia.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "inertia must be finite and symmetric");
  }
  if (Eigen::LLT<Mat3>(inertia).info() != Eigen::Success) {
    throw Error(ErrorCode::InvalidArgument, "inertia must be positive definite");
  }
  if (!(mu_mpc > 0.0)) throw Error(ErrorCode::InvalidArgument, "mu_mpc must be positive");
  if (!(nominal_height > 0.0)) throw Error(ErrorCode::InvalidArgument, "nominal_height must be positive");
  if (!(gravity.norm() > 0.0)) throw Error(ErrorCode::InvalidArgument, "gravity must be non-zero");
  for (int i = 0; i < kNumLegs; ++i) {
    if (!hip_offsets[i].allFinite()) throw Error(ErrorCode::InvalidArgument, "hip offsets must be finite");
    if ((cp_bounds[i].min.array() > cp_bounds[i].max.array()).any()) {
      throw Error(ErrorCode::InvalidArgument, "cp_bounds min must not exceed max");
    }
    if ((workspace_bounds[i].min.array() > workspace_bounds[i].max.array()).any()) {
      throw Error(ErrorCode::InvalidArgument, "workspace min must not exceed max");
    }
  }
}

std::array<Box3, kNumLegs> cp_bounds_from_velocity(const LegVectors& hips, double v_max,
                                                   double t_s) {
  const double half = v_max * t_s / 2.0;
  std::array<Box3, kNumLegs> out;
  for (int i = 0; i < kNumLegs; ++i) {
    const Vec3 centre = -hips[i];
    out[i].min = centre - Vec3(half, half, 0.0);
    out[i].max = centre + Vec3(half, half, 0.0);
  }
  return out;
}

std::array<Box3, kNumLegs> workspace_around_hips(const LegVectors& hips, const Vec3& half) {
  std::array<Box3, kNumLegs> out;
  for (int i = 0; i < kNumLegs; ++i) {
    out[i].min = hips[i] - Vec3(half.x(), half.y(), 0.0);
    out[i].max = hips[i] + Vec3(half.x(), half.y(), 0.0);
    out[i].min.z() = -HUGE_VAL;
    out[i].max.z() = HUGE_VAL;
  }
  return out;
}

RobotParams go1_params() {
  RobotParams p;
  p.hip_offsets = {Vec3(0.19, -0.047, 0.0), Vec3(0.19, 0.047, 0.0), Vec3(-0.19, -0.047, 0.0),
                   Vec3(-0.19, 0.047, 0.0)};
  p.cp_bounds = cp_bounds_from_velocity(p.hip_offsets, kDefaultCpVmax, kDefaultCpSwing);
  p.workspace_bounds = workspace_around_hips(
      p.hip_offsets, Vec3(kDefaultWorkspaceHalfX, kDefaultWorkspaceHalfY, 0.0));
  return p;
}

RobotParams load_robot_params(const KeyValueConfig& cfg, const std::string& s, RobotParams p) {
  p.mass = cfg.get_double(s, "mass", p.mass);
  p.inertia(0, 0) = cfg.get_double(s, "inertia_xx", p.inertia(0, 0));
  p.inertia(1, 1) = cfg.get_double(s, "inertia_yy", p.inertia(1, 1));
  p.inertia(2, 2) = cfg.get_double(s, "inertia_zz", p.inertia(2, 2));
  p.inertia(0, 1) = p.inertia(1, 0) = cfg.get_double(s, "inertia_xy", p.inertia(0, 1));
  p.inertia(0, 2) = p.inertia(2, 0) = cfg.get_double(s, "inertia_xz", p.inertia(0, 2));
  p.inertia(1, 2) = p.inertia(2, 1) = cfg.get_double(s, "inertia_yz", p.inertia(1, 2));
  p.gravity.z() = cfg.get_double(s, "gravity", p.gravity.z());
  p.mu_mpc = cfg.get_double(s, "mu_mpc", p.mu_mpc);
  p.nominal_height = cfg.get_double(s, "nominal_height", p.nominal_height);

  bool hips_changed = false;
  for (Leg leg : kAllLegs) {
    const std::string base = std::string("hip_") + leg_key(leg) + "_";
    Vec3& h = p.hip_offsets[index(leg)];
    for (int a = 0; a < 3; ++a) {
      const std::string key = base + "xyz"[a];
      if (cfg.has(s, key)) {
        h[a] = cfg.get_double(s, key, h[a]);
        hips_changed = true;
      }
    }
  }
  if (hips_changed || cfg.has(s, "cp_v_max") || cfg.has(s, "cp_t_s")) {
    p.cp_bounds = cp_bounds_from_velocity(p.hip_offsets, cfg.get_double(s, "cp_v_max", kDefaultCpVmax),
                                          cfg.get_double(s, "cp_t_s", kDefaultCpSwing));
  }
  if (hips_changed || cfg.has(s, "workspace_half_x") || cfg.has(s, "workspace_half_y")) {
    p.workspace_bounds = workspace_around_hips(
        p.hip_offsets, Vec3(cfg.get_double(s, "workspace_half_x", kDefaultWorkspaceHalfX),
                            cfg.get_double(s, "workspace_half_y", kDefaultWorkspaceHalfY), 0.0));
  }
  for (Leg leg : kAllLegs) {
    Box3& b = p.cp_bounds[index(leg)];
    for (int a = 0; a < 2; ++a) {
      const std::string axis(1, "xy"[a]);
      b.min[a] = cfg.get_double(s, std::string("cp_min_") + leg_key(leg) + "_" + axis, b.min[a]);
      b.max[a] = cfg.get_double(s, std::string("cp_max_") + leg_key(leg) + "_" + axis, b.max[a]);
      Box3& w = p.workspace_bounds[index(leg)];
      w.min[a] = cfg.get_double(s, std::string("workspace_min_") + leg_key(leg) + "_" + axis, w.min[a]);
      w.max[a] = cfg.get_double(s, std::string("workspace_max_") + leg_key(leg) + "_" + axis, w.max[a]);
    }
  }
  p.validate();
  return p;
}

std::string robot_params_text(const RobotParams& p) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "mass = " << p.mass << "\n";
  const char* names[3][3] = {{"xx", "xy", "xz"}, {"xy", "yy", "yz"}, {"xz", "yz", "zz"}};
  for (int r = 0; r < 3; ++r) {
    for (int c = r; c < 3; ++c) out << "inertia_" << names[r][c] << " = " << p.inertia(r, c) << "\n";
  }
  out << "gravity = " << p.gravity.z() << "\n";
  out << "mu_mpc = " << p.mu_mpc << "\n";
  out << "nominal_height = " << p.nominal_height << "\n";
  for (Leg leg : kAllLegs) {
    for (int a = 0; a < 3; ++a) {
      out << "hip_" << leg_key(leg) << "_" << "xyz"[a] << " = " << p.hip_offsets[index(leg)][a] << "\n";
    }
  }
  for (Leg leg : kAllLegs) {
    const Box3& b = p.cp_bounds[index(leg)];
    const Box3& w = p.workspace_bounds[index(leg)];
    for (int a = 0; a < 2; ++a) {
      const char axis = "xy"[a];
      out << "cp_min_" << leg_key(leg) << "_" << axis << " = " << b.min[a] << "\n";
      out << "cp_max_" << leg_key(leg) << "_" << axis << " = " << b.max[a] << "\n";
      out << "workspace_min_" << leg_key(leg) << "_" << axis << " = " << w.min[a] << "\n";
      out << "workspace_max_" << leg_key(leg) << "_" << axis << " = " << w.max[a] << "\n";
    }
  }
  return out.str();
}

RobotParams load_robot_params(const std::filesystem::path& path) {
  return load_robot_params(KeyValueConfig::load(path), "");
}

Eigen::Matrix<double, kStateDim, 1> BodyState::to_vector() const {
  Eigen::Matrix<double, kStateDim, 1> x;
  x << p, p_dot, theta, omega, aug;
  return x;
}

BodyState BodyState::from_vector(const Eigen::Ref<const VectorXd>& x) {
  if (x.size() != kStateDim) throw Error(ErrorCode::InvalidArgument, "BodyState: expected 13 entries");
  BodyState s;
  s.p = x.segment<3>(0);
  s.p_dot = x.segment<3>(3);
  s.theta = x.segment<3>(6);
  s.omega = x.segment<3>(9);
  return s;
}

Mat3 world_inertia(const RobotParams& params, const EulerAngles& theta) {
  const Mat3 R = rot_zyx(theta);
  return R * params.inertia * R.transpose();
}

StateMatrixPair footstep_dynamics(const RobotParams& params, const BodyState& state,
                                  const LegForces& forces) {
  const Mat3 I_inv = world_inertia(params, state.theta).inverse();
  Vec3 f_sum = Vec3::Zero();
  for (const Vec3& f : forces) f_sum += f;

  StateMatrixPair sys{MatrixXd::Zero(kStateDim, kStateDim), MatrixXd::Zero(kStateDim, kInputDim)};
  sys.A.block<3, 3>(0, 3).setIdentity();
  sys.A.block<3, 1>(3, 12) = f_sum / params.mass - params.gravity;
  sys.A.block<3, 3>(6, 9) = rot_z(state.theta.z()).transpose();
  sys.A.block<3, 1>(9, 12) = -I_inv * hat(state.p) * f_sum;
  for (int i = 0; i < kNumLegs; ++i) sys.B.block<3, 3>(9, 3 * i) = -I_inv * hat(forces[i]);
  return sys;
}

StateMatrixPair grf_dynamics(const RobotParams& params, const BodyState& state,
                             const FootPositions& feet) {
  const Mat3 I_inv = world_inertia(params, state.theta).inverse();
  StateMatrixPair sys{MatrixXd::Zero(kStateDim, kStateDim), MatrixXd::Zero(kStateDim, kInputDim)};
  sys.A.block<3, 3>(0, 3).setIdentity();
  sys.A.block<3, 1>(3, 12) = -params.gravity;
  sys.A.block<3, 3>(6, 9) = rot_z(state.theta.z()).transpose();
  for (int i = 0; i < kNumLegs; ++i) {
    sys.B.block<3, 3>(3, 3 * i) = Mat3::Identity() / params.mass;
    sys.B.block<3, 3>(9, 3 * i) = I_inv * hat(feet[i] - state.p);
  }
  return sys;
}

FootPositions nominal_feet(const RobotParams& params, const Vec3& body_xy, double yaw) {
  FootPositions feet;
  const Mat3 Rz = rot_z(yaw);
  for (int i = 0; i < kNumLegs; ++i) {
    feet[i] = Vec3(body_xy.x(), body_xy.y(), 0.0) + Rz * params.hip_offsets[i];
    feet[i].z() = 0.0;
  }
  return feet;
}

}  // namespace dualmpc
