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

#include <functional>

#include "dualmpc/model.hpp"

namespace dualmpc {

enum class TouchdownHeight { TerrainZero, QueriedHeight };

struct HeuristicGains {
  Vec3 k{0.03, 0.03, 0.0};  // velocity feedback gain [s]
  TouchdownHeight touchdown_height_mode = TouchdownHeight::TerrainZero;
};

/// Height of the ground at (x, y); consulted in QueriedHeight mode.
using HeightQuery = std::function<double(double x, double y)>;

/// Velocity-based foothold for one leg:
///
///   p_hip + (t_s / 2) v + k (v_des - v) + (w_z_des / 2) sqrt(p_z / |g|) perp(v)
///
/// with p_hip = p + R(Theta) hip_offset. The z component is replaced by the
/// ground height (0 unless QueriedHeight and a query is given).
Vec3 heuristic_footstep(const RobotParams& params, const HeuristicGains& gains,
                        const BodyState& state, const BodyState& desired, double t_s, Leg leg,
                        const HeightQuery& height = {});

LegVectors heuristic_footsteps(const RobotParams& params, const HeuristicGains& gains,
                               const BodyState& state, const BodyState& desired, double t_s,
                               const HeightQuery& height = {});

}  // namespace dualmpc
