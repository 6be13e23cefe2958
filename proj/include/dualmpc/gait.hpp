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
#include <string>
#include <vector>

#include "dualmpc/model.hpp"

namespace dualmpc {

enum class GaitPattern { Trot, Stand };

GaitPattern parse_gait_pattern(const std::string& name);
const char* to_string(GaitPattern pattern);

struct GaitConfig {
  GaitPattern pattern = GaitPattern::Trot;
  double t_s = 0.25;     // swing duration == stance duration [s]
  int horizon = 10;      // N
  double mpc_dt = 0.025; // horizon step [s]
  double dmpc_hz = 20.0; // replanning rate

  /// Trot with mpc_dt = t_s / N.
  static GaitConfig trot(double t_s = 0.25, int horizon = 10, double dmpc_hz = 20.0);
  static GaitConfig stand(int horizon = 10, double mpc_dt = 0.025, double dmpc_hz = 20.0);

  void validate() const;
};

using ContactRow = std::array<bool, kNumLegs>;

struct GaitSchedule {
  std::vector<ContactRow> contact;  // N rows, true = stance
  int M = 0;                        // first row differing from row 0, or N

  int horizon() const { return static_cast<int>(contact.size()); }
  bool stance(int k, Leg leg) const { return contact[k][index(leg)]; }
  int stance_count(int k) const;

  /// Builds a schedule from an explicit contact table and derives M.
  static GaitSchedule from_table(std::vector<ContactRow> table);
};

/// Horizon block whose solution is committed: M, or N - 1 when M == N.
inline int committed_block(const GaitSchedule& s) { return s.M < s.horizon() ? s.M : s.horizon() - 1; }

GaitSchedule schedule_at(const GaitConfig& config, double t);

/// Contact flags at time t (row 0 of schedule_at, without building a horizon).
ContactRow contact_at(const GaitConfig& config, double t);

/// Time since the leg's current phase began, in [0, t_s).
double phase_elapsed(const GaitConfig& config, double t, Leg leg);

}  // namespace dualmpc
