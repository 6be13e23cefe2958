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

#include "dualmpc/heuristic.hpp"

#include <cmath>

#include "dualmpc/error.hpp"

namespace dualmpc {

Vec3 heuristic_footstep(const RobotParams& params, const HeuristicGains& gains,
                        const BodyState& state, const BodyState& desired, double t_s, Leg leg,
                        const HeightQuery& height) {
  if (!(state.p.z() > 0.0)) {
    throw Error(ErrorCode::NonPositiveHeight, "heuristic_footstep: body height must be positive");
  }
  const Vec3 p_hip = state.p + rot_zyx(state.theta) * params.hip_offsets[index(leg)];
  const double cp_time = std::sqrt(state.p.z() / params.gravity.norm());

  Vec3 target = p_hip + 0.5 * t_s * state.p_dot +
                gains.k.cwiseProduct(desired.p_dot - state.p_dot) +
                0.5 * desired.omega.z() * cp_time * perp(state.p_dot);

  target.z() = 0.0;
  if (gains.touchdown_height_mode == TouchdownHeight::QueriedHeight && height) {
    target.z() = height(target.x(), target.y());
  }
  return target;
}

LegVectors heuristic_footsteps(const RobotParams& params, const HeuristicGains& gains,
                               const BodyState& state, const BodyState& desired, double t_s,
                               const HeightQuery& height) {
  LegVectors out;
  for (Leg leg : kAllLegs) {
    out[index(leg)] = heuristic_footstep(params, gains, state, desired, t_s, leg, height);
  }
  return out;
}

}  // namespace dualmpc
