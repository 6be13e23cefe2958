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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dualmpc/dual_mpc.hpp"
#include "dualmpc/kv_config.hpp"
#include "dualmpc/simulator.hpp"

namespace dualmpc {

enum class ArmMode { Dual, Baseline, BaselineFast };

ArmMode parse_arm_mode(const std::string& name);
const char* to_string(ArmMode mode);

/// Desired body-frame velocity and yaw rate from t_start until the next segment.
struct CommandSegment {
  double t_start = 0.0;
  Vec3 v_body = Vec3::Zero();  // z ignored
  double yaw_rate = 0.0;
};

struct CommandProfile {
  std::vector<CommandSegment> segments;

  static CommandProfile constant(const Vec3& v_body, double yaw_rate = 0.0);
  const CommandSegment& at(double t) const;
  void validate() const;
};

/// Standard deviations of the Gaussian noise on the state fed to the controller.
struct StateNoise {
  double position = 0.0;
  double velocity = 0.0;
  double angle = 0.0;
  double rate = 0.0;

  bool any() const { return position > 0.0 || velocity > 0.0 || angle > 0.0 || rate > 0.0; }
};

struct Scenario {
  std::string name = "custom";
  RobotParams params = go1_params();
  GaitConfig gait = GaitConfig::trot();
  ArmMode mode = ArmMode::Dual;
  CommandProfile profile = CommandProfile::constant(Vec3::Zero());
  Terrain terrain = Terrain::flat();
  std::vector<Disturbance> disturbances;
  double duration = 5.0;
  std::uint64_t seed = 0;
  SimConfig sim;
  HeuristicGains gains;
  VectorXd footstep_Q = default_state_weights();
  // Closed-loop default; the module-level footstep default stays at 1e-3.
  VectorXd footstep_R = VectorXd::Constant(kInputDim, 100.0);
  VectorXd grf_Q = default_state_weights();
  VectorXd grf_R = VectorXd::Constant(kInputDim, 1e-6);
  QpOptions qp;
  FootstepOrigin footstep_origin = FootstepOrigin::Predicted;
  double accel_limit = 1.0;     // ramp on the commanded velocity [m/s^2]
  double metrics_start = 1.0;   // samples before this time are excluded [s]
  StateNoise noise;

  /// Gait actually run by the arm (the fast baseline shortens the swing).
  GaitConfig arm_gait() const;
  ControllerConfig controller_config() const;
  void validate() const;
};

std::vector<std::string> preset_names();
/// stand, trot, asym_friction, wrench, compliant.
Scenario preset_scenario(const std::string& name);

Scenario parse_scenario(const KeyValueConfig& cfg);
Scenario load_scenario(const std::filesystem::path& path);
/// A scenario file path, or a preset name (optionally "name:mode" to pick the arm).
Scenario resolve_scenario(const std::string& spec);
std::string scenario_text(const Scenario& s);

/// Desired state at t given the measured state and the ramped command.
BodyState desired_state(const Scenario& s, const BodyState& measured, const Vec3& v_body,
                        double yaw_rate, double yaw_desired);

struct TickSample {
  double t = 0.0;
  BodyState state;     // ground truth
  BodyState measured;  // fed to the controller
  BodyState desired;
  FootPositions feet{};
  ContactRow contact{};
  LegForces forces{};
  FootPositions footsteps{};
  int M = 0;
  int grf_iterations = 0;
  double grf_kkt = 0.0;
  int footstep_iterations = 0;
  double footstep_kkt = 0.0;
  bool grf_fallback = false;
  bool footstep_fallback = false;
  std::array<bool, kNumLegs> slipped{};
  double grf_time = 0.0;
  double footstep_time = 0.0;
  double tick_time = 0.0;
};

struct TimingStats {
  double mean = 0.0;
  double std = 0.0;
  double max = 0.0;
  std::size_t count = 0;

  static TimingStats of(const std::vector<double>& v);
};

struct MetricsReport {
  static constexpr int kTracked = 9;
  /// vx, vy, vz (body), roll, pitch, yaw, wx, wy, wz (body).
  std::array<double, kTracked> mse{};
  std::array<double, kTracked> error_mean{};
  std::array<double, kTracked> error_std{};
  std::array<double, kNumLegs> grf_mean{};
  std::array<double, kNumLegs> grf_std{};
  std::array<double, kNumLegs> force_ratio{};
  TimingStats grf_time, footstep_time, tick_time;  // milliseconds
  std::array<double, kNumLegs> slip_distance{};
  double total_slip = 0.0;
  int ticks = 0;
  int samples = 0;
  int fallbacks = 0;
  bool fell = false;
  double fall_time = 0.0;
};

inline constexpr double kForceRatioMinFz = 1.0;  // N

const std::array<const char*, MetricsReport::kTracked>& tracked_state_names();

/// Tracking errors of one sample, in the MetricsReport state order.
std::array<double, MetricsReport::kTracked> tracking_errors(const TickSample& s);

MetricsReport compute_metrics(const std::vector<TickSample>& samples, double metrics_start);

struct TickHook {
  double t;
  const BodyState& measured;
  const BodyState& desired;
  const FootPositions& feet;
  const DualMpcState& ctx_before;
  const ControlCommand& command;
};

struct RunOptions {
  bool keep_problems = false;
  std::function<void(const TickHook&)> on_tick;
};

struct RunResult {
  Scenario scenario;
  std::vector<TickSample> samples;
  MetricsReport metrics;
  SimState final_state;
};

RunResult run_scenario(const Scenario& scenario, const RunOptions& options = {});

/// Deterministic tick-level CSV (no wall-clock columns).
void write_trace_csv(const std::vector<TickSample>& samples, std::ostream& out);
std::string trace_csv(const std::vector<TickSample>& samples);

std::string metrics_table(const MetricsReport& m, const std::string& title);

struct ComparisonRow {
  std::string metric;
  double a = 0.0;
  double b = 0.0;
  double delta = 0.0;  // (a - b) / b
  bool defined = true;
};

/// Throws MismatchedScenarios unless a and b differ only in controller mode.
void check_comparable(const Scenario& a, const Scenario& b);
std::vector<ComparisonRow> compare_metrics(const MetricsReport& a, const MetricsReport& b);
std::string comparison_table(const std::vector<ComparisonRow>& rows, const std::string& a_name,
                             const std::string& b_name);

struct BenchReport {
  int repetitions = 0;
  int horizon = 0;
  TimingStats grf, footstep, tick;  // milliseconds
};

/// Replays recorded closed-loop tick inputs and times each controller tick
/// (QP build plus solve, both QPs).
BenchReport bench_scenario(const Scenario& scenario, int repetitions);
std::string bench_table(const BenchReport& r);

/// Writes metrics.txt, timing.dat, states.dat, grf_box.dat, robot.params,
/// scenario.cfg and (with_trace) trace.csv into dir.
void write_run_outputs(const RunResult& r, const std::filesystem::path& dir, bool with_trace = true);

}  // namespace dualmpc
