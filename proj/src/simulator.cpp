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

#include "dualmpc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dualmpc/error.hpp"

namespace dualmpc {
namespace {

constexpr double kPi = 3.14159265358979323846;

double rect_distance(const TerrainRegion& r, double x, double y) {
  const double dx = std::max({r.x_min - x, 0.0, x - r.x_max});
  const double dy = std::max({r.y_min - y, 0.0, y - r.y_max});
  return std::hypot(dx, dy);
}

Mat3 orthonormalize(const Mat3& R) {
  Eigen::JacobiSVD<Mat3> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

double smoothstep(double s) { return s * s * (3.0 - 2.0 * s); }

}  // namespace

Terrain Terrain::flat(double mu) {
  Terrain t;
  TerrainRegion r;
  r.mu = mu;
  t.regions.push_back(r);
  return t;
}

const TerrainRegion& Terrain::at(double x, double y, bool* outside) const {
  if (regions.empty()) throw Error(ErrorCode::InvalidArgument, "terrain has no regions");
  for (const TerrainRegion& r : regions) {
    if (r.contains(x, y)) {
      if (outside) *outside = false;
      return r;
    }
  }
  if (outside) *outside = true;
  const TerrainRegion* best = &regions.front();
  double best_d = std::numeric_limits<double>::infinity();
  for (const TerrainRegion& r : regions) {
    const double d = rect_distance(r, x, y);
    if (d < best_d) {
      best_d = d;
      best = &r;
    }
  }
  return *best;
}

void Terrain::validate() const {
  if (regions.empty()) throw Error(ErrorCode::InvalidArgument, "terrain needs at least one region");
  for (const TerrainRegion& r : regions) {
    if (!(r.mu > 0.0)) throw Error(ErrorCode::InvalidArgument, "terrain mu must be positive");
    if (!(r.x_min <= r.x_max) || !(r.y_min <= r.y_max)) {
      throw Error(ErrorCode::InvalidArgument, "terrain region bounds must be ordered");
    }
    if (!std::isfinite(r.height) || r.stiffness < 0.0 || r.damping < 0.0) {
      throw Error(ErrorCode::InvalidArgument, "terrain height/stiffness/damping invalid");
    }
  }
}

void Disturbance::validate() const {
  if (!force.allFinite() || !torque.allFinite() || !offset.allFinite()) {
    throw Error(ErrorCode::NonFinite, "disturbance wrench must be finite");
  }
  if (!(t_start <= t_end)) throw Error(ErrorCode::InvalidArgument, "disturbance window unordered");
}

ForceHold parse_force_hold(const std::string& name) {
  if (name == "plan") return ForceHold::Plan;
  if (name == "first") return ForceHold::FirstBlock;
  throw Error(ErrorCode::ConfigParse, "unknown force hold '" + name + "'");
}

const char* to_string(ForceHold hold) { return hold == ForceHold::Plan ? "plan" : "first"; }

void SimConfig::validate() const {
  if (!(dt > 0.0 && dt <= 2e-3)) throw Error(ErrorCode::InvalidArgument, "sim dt must be in (0, 2 ms]");
  if (slip_velocity < 0.0) throw Error(ErrorCode::InvalidArgument, "slip velocity must be >= 0");
  gait.validate();
}

FootPositions SimState::feet() const {
  FootPositions out;
  for (int i = 0; i < kNumLegs; ++i) out[i] = foot[i].pos;
  return out;
}

ContactRow SimState::foot_contact() const {
  ContactRow out;
  for (int i = 0; i < kNumLegs; ++i) out[i] = foot[i].contact;
  return out;
}

double SimState::total_slip() const {
  double s = 0.0;
  for (const FootState& f : foot) s += f.slip_distance;
  return s;
}

SimState initial_state(const RobotParams& params, const Terrain& terrain, double height,
                       const Vec3& xy, double yaw) {
  SimState s;
  s.R_wb = rot_z(yaw);
  const FootPositions feet = nominal_feet(params, xy, yaw);
  for (int i = 0; i < kNumLegs; ++i) {
    const TerrainRegion& r = terrain.at(feet[i].x(), feet[i].y(), &s.foot[i].outside_terrain);
    s.foot[i].pos = Vec3(feet[i].x(), feet[i].y(), r.height);
    s.foot[i].swing_start = s.foot[i].pos;
    s.foot[i].contact = true;
  }
  s.p = Vec3(xy.x(), xy.y(), terrain.height(xy.x(), xy.y()) + height);
  return s;
}

SlipResult clamp_slip(const Vec3& f, double mu) {
  if (!f.allFinite()) throw Error(ErrorCode::NonFinite, "clamp_slip: force must be finite");
  SlipResult r;
  if (f.z() <= 0.0) {
    r.applied.setZero();
    r.slipped = f.x() != 0.0 || f.y() != 0.0;
    return r;
  }
  const double tangential = std::max(std::abs(f.x()), std::abs(f.y()));
  const double limit = mu * f.z();
  r.applied = f;
  if (tangential > limit) {
    const double scale = limit / tangential;
    r.applied.x() *= scale;
    r.applied.y() *= scale;
    r.slipped = true;
  }
  return r;
}

SimState touchdown(const SimState& sim, Leg leg, const Vec3& target, const Terrain& terrain) {
  SimState s = sim;
  FootState& f = s.foot[index(leg)];
  const TerrainRegion& r = terrain.at(target.x(), target.y(), &f.outside_terrain);
  f.pos = Vec3(target.x(), target.y(), r.height);
  f.contact = true;
  f.deflection = 0.0;
  f.slipped = false;
  return s;
}

SimState step(const SimState& sim, const RobotParams& params, const ControlCommand& cmd,
              const Terrain& terrain, const std::vector<Disturbance>& dist,
              const SimConfig& config) {
  return step(sim, params, cmd.forces, cmd.footsteps, terrain, dist, config);
}

SimState step(const SimState& sim, const RobotParams& params, const LegForces& forces,
              const FootPositions& targets, const Terrain& terrain,
              const std::vector<Disturbance>& dist, const SimConfig& config) {
  const double dt = config.dt;
  if (!(dt > 0.0 && dt <= 2e-3)) throw Error(ErrorCode::InvalidArgument, "sim dt must be in (0, 2 ms]");
  SimState s = sim;

  // Contact transitions follow the gait clock.
  const ContactRow scheduled = contact_at(config.gait, s.t);
  for (Leg leg : kAllLegs) {
    FootState& f = s.foot[index(leg)];
    if (f.contact && !scheduled[index(leg)]) {
      f.contact = false;
      f.swing_start = f.pos;
      f.swing_start_t = s.t;
      f.deflection = 0.0;
      f.slipped = false;
    } else if (!f.contact && scheduled[index(leg)]) {
      s = touchdown(s, leg, targets[index(leg)], terrain);
    }
  }

  // Contact forces.
  Vec3 force = Vec3::Zero();
  Vec3 torque = Vec3::Zero();
  for (int i = 0; i < kNumLegs; ++i) {
    FootState& f = s.foot[i];
    f.applied.setZero();
    f.slipped = false;
    if (!f.contact) continue;
    const TerrainRegion& region = terrain.at(f.pos.x(), f.pos.y());
    const SlipResult sr = clamp_slip(forces[i], region.mu);
    f.applied = sr.applied;
    f.slipped = sr.slipped;
    force += f.applied;
    torque += (f.pos - s.p).cross(f.applied);
    if (sr.slipped) {
      // The foot pushes the ground with -f, so it slides along -f_t.
      Vec3 dir(-forces[i].x(), -forces[i].y(), 0.0);
      const double norm = dir.norm();
      if (norm > 0.0) {
        const double d = config.slip_velocity * dt;
        f.pos += d * dir / norm;
        f.slip_distance += d;
      }
    }
    if (region.compliant()) {
      // Massless foot on a Kelvin-Voigt pad: k delta + c delta_dot = f_z.
      const double fz = f.applied.z();
      if (region.damping > 0.0) {
        f.deflection = (f.deflection + dt * fz / region.damping) /
                       (1.0 + dt * region.stiffness / region.damping);
      } else {
        f.deflection = fz / region.stiffness;
      }
      f.deflection = std::max(0.0, f.deflection);
    } else {
      f.deflection = 0.0;
    }
    f.pos.z() = terrain.height(f.pos.x(), f.pos.y()) - f.deflection;
  }

  for (const Disturbance& d : dist) {
    if (!d.active(s.t)) continue;
    const Vec3 f_w = s.R_wb * d.force;
    force += f_w;
    torque += s.R_wb * (d.torque + d.offset.cross(d.force));
  }

  // Full rigid-body dynamics, semi-implicit Euler.
  const Mat3 I_w = s.R_wb * params.inertia * s.R_wb.transpose();
  const Vec3 omega_dot = I_w.ldlt().solve(torque - s.omega.cross(I_w * s.omega));
  s.p_dot += dt * (force / params.mass - params.gravity);
  s.p += dt * s.p_dot;
  s.omega += dt * omega_dot;
  s.R_wb = orthonormalize(so3_exp(s.omega * dt) * s.R_wb);
  s.t += dt;

  // Swing feet follow a cubic in x, y with a half-sine lift.
  for (int i = 0; i < kNumLegs; ++i) {
    FootState& f = s.foot[i];
    if (f.contact) continue;
    const double u = std::clamp((s.t - f.swing_start_t) / config.gait.t_s, 0.0, 1.0);
    const double w = smoothstep(u);
    const Vec3& target = targets[i];
    const double ground = terrain.height(target.x(), target.y());
    f.pos.head<2>() = (1.0 - w) * f.swing_start.head<2>() + w * target.head<2>();
    f.pos.z() = (1.0 - u) * f.swing_start.z() + u * ground + config.swing_height * std::sin(kPi * u);
  }

  if (!s.p.allFinite() || !s.R_wb.allFinite()) {
    throw Error(ErrorCode::NonFinite, "simulation state became non-finite");
  }
  const double ground = terrain.height(s.p.x(), s.p.y());
  if (s.p.z() < ground) {
    throw Error(ErrorCode::BodyGroundPenetration, "body penetrated the ground");
  }
  return s;
}

BodyState body_state(const SimState& sim) {
  BodyState b;
  b.p = sim.p;
  b.p_dot = sim.p_dot;
  b.theta = euler_zyx(sim.R_wb);
  b.omega = sim.omega;
  return b;
}

bool has_fallen(const SimState& sim, const Terrain& terrain, const SimConfig& config) {
  const EulerAngles th = euler_zyx(sim.R_wb);
  return sim.p.z() < terrain.height(sim.p.x(), sim.p.y()) + config.fall_clearance ||
         std::abs(th.x()) > config.fall_angle || std::abs(th.y()) > config.fall_angle;
}

double kinetic_energy(const SimState& sim, const RobotParams& params) {
  const Mat3 I_w = sim.R_wb * params.inertia * sim.R_wb.transpose();
  return 0.5 * params.mass * sim.p_dot.squaredNorm() + 0.5 * sim.omega.dot(I_w * sim.omega);
}

double potential_energy(const SimState& sim, const RobotParams& params) {
  return params.mass * params.gravity.dot(sim.p);
}

Mat3 so3_exp(const Vec3& w) {
  const double th = w.norm();
  const Mat3 W = hat(w);
  if (th < 1e-8) return Mat3::Identity() + W + 0.5 * W * W;
  return Mat3::Identity() + std::sin(th) / th * W + (1.0 - std::cos(th)) / (th * th) * W * W;
}

}  // namespace dualmpc
