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

#include "dualmpc/gait.hpp"

#include <algorithm>
#include <cmath>

#include "dualmpc/error.hpp"

namespace dualmpc {
namespace {

// Snaps times sitting on a phase boundary up to the new phase; guards against
// k * mpc_dt landing a few ulps short of t_s.
constexpr double kBoundarySnap = 1e-9;

long phase_index(double t, double t_s) {
  return static_cast<long>(std::floor(t / t_s + kBoundarySnap));
}

ContactRow trot_row(long phase) {
  // Even phases: RF + LH in stance; odd phases: LF + RH.
  const bool even = phase % 2 == 0;
  return {even, !even, !even, even};
}

}  // namespace

GaitPattern parse_gait_pattern(const std::string& name) {
  if (name == "trot") return GaitPattern::Trot;
  if (name == "stand") return GaitPattern::Stand;
  throw Error(ErrorCode::ConfigParse, "unknown gait pattern '" + name + "'");
}

const char* to_string(GaitPattern pattern) {
  return pattern == GaitPattern::Trot ? "trot" : "stand";
}

GaitConfig GaitConfig::trot(double t_s, int horizon, double dmpc_hz) {
  GaitConfig c;
  c.pattern = GaitPattern::Trot;
  c.t_s = t_s;
  c.horizon = horizon;
  c.mpc_dt = t_s / horizon;
  c.dmpc_hz = dmpc_hz;
  c.validate();
  return c;
}

GaitConfig GaitConfig::stand(int horizon, double mpc_dt, double dmpc_hz) {
  GaitConfig c;
  c.pattern = GaitPattern::Stand;
  c.horizon = horizon;
  c.mpc_dt = mpc_dt;
  c.t_s = horizon * mpc_dt;
  c.dmpc_hz = dmpc_hz;
  c.validate();
  return c;
}

void GaitConfig::validate() const {
  if (horizon < 1) throw Error(ErrorCode::InvalidArgument, "gait horizon must be >= 1");
  if (!(t_s > 0.0)) throw Error(ErrorCode::InvalidArgument, "t_s must be positive");
  if (!(mpc_dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "mpc_dt must be positive");
  if (!(dmpc_hz > 0.0)) throw Error(ErrorCode::InvalidArgument, "dmpc_hz must be positive");
  if (pattern == GaitPattern::Trot && std::abs(t_s - horizon * mpc_dt) > 1e-9 * t_s) {
    throw Error(ErrorCode::InvalidArgument, "trot requires t_s == N * mpc_dt");
  }
}

int GaitSchedule::stance_count(int k) const {
  int n = 0;
  for (bool c : contact[k]) n += c ? 1 : 0;
  return n;
}

GaitSchedule GaitSchedule::from_table(std::vector<ContactRow> table) {
  if (table.empty()) throw Error(ErrorCode::InvalidArgument, "schedule needs at least one row");
  GaitSchedule s;
  s.contact = std::move(table);
  s.M = s.horizon();
  for (int k = 1; k < s.horizon(); ++k) {
    if (s.contact[k] != s.contact[0]) {
      s.M = k;
      break;
    }
  }
  return s;
}

ContactRow contact_at(const GaitConfig& config, double t) {
  if (config.pattern == GaitPattern::Stand) return {true, true, true, true};
  return trot_row(phase_index(t, config.t_s));
}

GaitSchedule schedule_at(const GaitConfig& config, double t) {
  if (t < 0.0) throw Error(ErrorCode::InvalidArgument, "schedule_at: t must be >= 0");
  std::vector<ContactRow> rows(config.horizon);
  for (int k = 0; k < config.horizon; ++k) rows[k] = contact_at(config, t + k * config.mpc_dt);
  return GaitSchedule::from_table(std::move(rows));
}

double phase_elapsed(const GaitConfig& config, double t, Leg /*leg*/) {
  if (t < 0.0) throw Error(ErrorCode::InvalidArgument, "phase_elapsed: t must be >= 0");
  // Both diagonal pairs switch at the same instants, so the elapsed time is leg independent.
  const double elapsed = t - static_cast<double>(phase_index(t, config.t_s)) * config.t_s;
  return std::max(0.0, elapsed);
}

}  // namespace dualmpc
