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

#include "dualmpc/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>

#include "dualmpc/error.hpp"

namespace dualmpc {
namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::ConfigParse, what); }

std::vector<double> numbers_n(const std::string& value, const std::string& what, std::size_t n) {
  const std::vector<double> v = KeyValueConfig::numbers(value, what);
  if (v.size() != n) {
    parse_error(what + ": expected " + std::to_string(n) + " numbers, got " +
                std::to_string(v.size()));
  }
  return v;
}

VectorXd weight_vector(const std::string& value, const std::string& what, Eigen::Index n) {
  const std::vector<double> v = KeyValueConfig::numbers(value, what);
  if (v.size() == 1) return VectorXd::Constant(n, v[0]);
  if (static_cast<Eigen::Index>(v.size()) != n) {
    parse_error(what + ": expected 1 or " + std::to_string(n) + " numbers");
  }
  return Eigen::Map<const VectorXd>(v.data(), n);
}

std::string join(const VectorXd& v) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < v.size(); ++i) out << (i ? " " : "") << v[i];
  return out.str();
}

void reject_unknown(const KeyValueConfig& cfg, const std::string& section,
                    const std::set<std::string>& known) {
  for (const auto& [key, _] : cfg.entries(section)) {
    if (!known.count(key)) parse_error(cfg.origin() + ": unknown key '" + key + "' in [" + section + "]");
  }
}

EqualityHandling parse_equalities(const std::string& s) {
  if (s == "auto") return EqualityHandling::Auto;
  if (s == "eliminate") return EqualityHandling::Eliminate;
  if (s == "kkt") return EqualityHandling::KeepInKkt;
  parse_error("qp_equalities must be auto, eliminate or kkt");
}

const char* equalities_name(EqualityHandling e) {
  switch (e) {
    case EqualityHandling::Auto: return "auto";
    case EqualityHandling::Eliminate: return "eliminate";
    case EqualityHandling::KeepInKkt: return "kkt";
  }
  return "auto";
}

StateNoise preset_noise() { return {0.002, 0.02, 0.005, 0.02}; }

}  // namespace

ArmMode parse_arm_mode(const std::string& name) {
  if (name == "dual") return ArmMode::Dual;
  if (name == "baseline") return ArmMode::Baseline;
  if (name == "baseline_fast") return ArmMode::BaselineFast;
  parse_error("unknown controller mode '" + name + "' (dual, baseline, baseline_fast)");
}

const char* to_string(ArmMode mode) {
  switch (mode) {
    case ArmMode::Dual: return "dual";
    case ArmMode::Baseline: return "baseline";
    case ArmMode::BaselineFast: return "baseline_fast";
  }
  return "dual";
}

CommandProfile CommandProfile::constant(const Vec3& v_body, double yaw_rate) {
  return CommandProfile{{CommandSegment{0.0, v_body, yaw_rate}}};
}

const CommandSegment& CommandProfile::at(double t) const {
  const CommandSegment* cur = &segments.front();
  for (const CommandSegment& s : segments) {
    if (s.t_start <= t) cur = &s;
  }
  return *cur;
}

void CommandProfile::validate() const {
  if (segments.empty() || segments.front().t_start > 0.0) {
    throw Error(ErrorCode::InvalidArgument, "command profile must start at t = 0");
  }
  for (std::size_t i = 1; i < segments.size(); ++i) {
    if (!(segments[i].t_start > segments[i - 1].t_start)) {
      throw Error(ErrorCode::InvalidArgument, "command segments must have increasing t_start");
    }
  }
  for (const CommandSegment& s : segments) {
    if (!s.v_body.allFinite() || !std::isfinite(s.yaw_rate)) {
      throw Error(ErrorCode::NonFinite, "command segment must be finite");
    }
  }
}

GaitConfig Scenario::arm_gait() const {
  if (mode == ArmMode::BaselineFast && gait.pattern == GaitPattern::Trot) {
    return GaitConfig::trot(0.2, gait.horizon, 25.0);
  }
  return gait;
}

ControllerConfig Scenario::controller_config() const {
  ControllerConfig c = ControllerConfig::with_gait(arm_gait(), params);
  const int N = c.gait.horizon;
  c.footstep_weights = HorizonWeights::constant(N, footstep_Q, footstep_R);
  c.grf_weights = HorizonWeights::constant(N, grf_Q, grf_R);
  c.gains = gains;
  c.qp = qp;
  c.footstep_origin = footstep_origin;
  if (gains.touchdown_height_mode == TouchdownHeight::QueriedHeight) {
    const Terrain t = terrain;
    c.height = [t](double x, double y) { return t.height(x, y); };
  }
  return c;
}

void Scenario::validate() const {
  params.validate();
  gait.validate();
  profile.validate();
  terrain.validate();
  sim.validate();
  for (const Disturbance& d : disturbances) d.validate();
  if (!(duration > 0.0)) throw Error(ErrorCode::InvalidArgument, "duration must be positive");
  if (!(accel_limit > 0.0)) throw Error(ErrorCode::InvalidArgument, "accel_limit must be positive");
  controller_config().validate();
}

std::vector<std::string> preset_names() {
  return {"stand", "trot", "asym_friction", "wrench", "compliant"};
}

Scenario preset_scenario(const std::string& name) {
  Scenario s;
  s.name = name;
  s.seed = 1;
  if (name == "stand") {
    s.gait = GaitConfig::stand();
    s.duration = 5.0;
  } else if (name == "trot") {
    s.profile = CommandProfile::constant(Vec3(0.3, 0.0, 0.0));
    s.duration = 10.0;
    s.noise = preset_noise();
  } else if (name == "asym_friction") {
    // Left half (y > 0) slippery, right half grippy; the MPC assumes 0.5.
    s.params.mu_mpc = 0.5;
    TerrainRegion left, right;
    left.y_min = 0.0;
    left.mu = 0.25;
    right.y_max = 0.0;
    right.mu = 0.8;
    s.terrain.regions = {left, right};
    s.profile = CommandProfile::constant(Vec3(0.5, 0.0, 0.0));
    s.duration = 8.0;
    s.noise = preset_noise();
  } else if (name == "wrench") {
    Disturbance d;
    d.force = Vec3(0.0, -6.0, -14.0);
    d.torque = Vec3(1.6, 0.0, 0.1);
    s.disturbances.push_back(d);
    s.profile = CommandProfile::constant(Vec3(0.3, 0.0, 0.0));
    s.duration = 8.0;
    s.noise = preset_noise();
  } else if (name == "compliant") {
    TerrainRegion soft;
    soft.mu = 0.7;
    soft.stiffness = 5000.0;
    soft.damping = 150.0;
    s.terrain.regions = {soft};
    s.profile = CommandProfile::constant(Vec3(0.35, 0.0, 0.0));
    s.duration = 8.0;
    s.noise = preset_noise();
  } else {
    throw Error(ErrorCode::ConfigParse, "unknown scenario preset '" + name + "'");
  }
  s.validate();
  return s;
}

Scenario parse_scenario(const KeyValueConfig& cfg) {
  reject_unknown(cfg, "scenario", {"name", "preset", "mode", "duration", "seed", "accel_limit",
                                   "metrics_start"});
  Scenario s;
  if (cfg.has("scenario", "preset")) s = preset_scenario(cfg.get_string("scenario", "preset", ""));
  s.name = cfg.get_string("scenario", "name", s.name);
  if (cfg.has("scenario", "mode")) s.mode = parse_arm_mode(*cfg.get("scenario", "mode"));
  s.duration = cfg.get_double("scenario", "duration", s.duration);
  s.seed = static_cast<std::uint64_t>(cfg.get_double("scenario", "seed", static_cast<double>(s.seed)));
  s.accel_limit = cfg.get_double("scenario", "accel_limit", s.accel_limit);
  s.metrics_start = cfg.get_double("scenario", "metrics_start", s.metrics_start);

  s.params = load_robot_params(cfg, "robot", s.params);

  reject_unknown(cfg, "gait", {"pattern", "t_s", "horizon", "mpc_dt", "dmpc_hz"});
  {
    const GaitPattern pattern =
        parse_gait_pattern(cfg.get_string("gait", "pattern", to_string(s.gait.pattern)));
    const int N = cfg.get_int("gait", "horizon", s.gait.horizon);
    const double hz = cfg.get_double("gait", "dmpc_hz", s.gait.dmpc_hz);
    if (pattern == GaitPattern::Trot) {
      s.gait = GaitConfig::trot(cfg.get_double("gait", "t_s", s.gait.t_s), N, hz);
    } else {
      s.gait = GaitConfig::stand(N, cfg.get_double("gait", "mpc_dt", s.gait.mpc_dt), hz);
    }
  }

  reject_unknown(cfg, "command", {"segment"});
  if (cfg.has("command", "segment")) {
    s.profile.segments.clear();
    for (const std::string& v : cfg.all("command", "segment")) {
      const auto n = numbers_n(v, "command segment (t_start vx vy yaw_rate)", 4);
      s.profile.segments.push_back({n[0], Vec3(n[1], n[2], 0.0), n[3]});
    }
  }

  reject_unknown(cfg, "terrain", {"region"});
  if (cfg.has("terrain", "region")) {
    s.terrain.regions.clear();
    for (const std::string& v : cfg.all("terrain", "region")) {
      const auto n = numbers_n(
          v, "terrain region (x_min x_max y_min y_max mu height stiffness damping)", 8);
      s.terrain.regions.push_back({n[0], n[1], n[2], n[3], n[4], n[5], n[6], n[7]});
    }
  }

  reject_unknown(cfg, "disturbance", {"wrench"});
  if (cfg.has("disturbance", "wrench")) {
    s.disturbances.clear();
    for (const std::string& v : cfg.all("disturbance", "wrench")) {
      const auto n = numbers_n(v, "disturbance wrench (fx fy fz tx ty tz ox oy oz t_start t_end)", 11);
      Disturbance d;
      d.force = Vec3(n[0], n[1], n[2]);
      d.torque = Vec3(n[3], n[4], n[5]);
      d.offset = Vec3(n[6], n[7], n[8]);
      d.t_start = n[9];
      d.t_end = n[10];
      s.disturbances.push_back(d);
    }
  }

  reject_unknown(cfg, "sim", {"dt", "slip_velocity", "swing_height", "fall_clearance", "fall_angle",
                             "force_hold"});
  s.sim.dt = cfg.get_double("sim", "dt", s.sim.dt);
  s.sim.slip_velocity = cfg.get_double("sim", "slip_velocity", s.sim.slip_velocity);
  s.sim.swing_height = cfg.get_double("sim", "swing_height", s.sim.swing_height);
  s.sim.fall_clearance = cfg.get_double("sim", "fall_clearance", s.sim.fall_clearance);
  s.sim.fall_angle = cfg.get_double("sim", "fall_angle", s.sim.fall_angle);
  s.sim.force_hold = parse_force_hold(cfg.get_string("sim", "force_hold", to_string(s.sim.force_hold)));

  reject_unknown(cfg, "controller", {"footstep_Q", "footstep_R", "grf_Q", "grf_R", "heuristic_k",
                                     "touchdown_height", "qp_tol", "qp_max_iterations",
                                     "qp_equalities", "qp_polish", "qp_warm_start",
                                     "footstep_origin"});
  if (auto v = cfg.get("controller", "footstep_Q")) s.footstep_Q = weight_vector(*v, "footstep_Q", kStateDim);
  if (auto v = cfg.get("controller", "footstep_R")) s.footstep_R = weight_vector(*v, "footstep_R", kInputDim);
  if (auto v = cfg.get("controller", "grf_Q")) s.grf_Q = weight_vector(*v, "grf_Q", kStateDim);
  if (auto v = cfg.get("controller", "grf_R")) s.grf_R = weight_vector(*v, "grf_R", kInputDim);
  if (auto v = cfg.get("controller", "footstep_origin")) s.footstep_origin = parse_footstep_origin(*v);
  if (auto v = cfg.get("controller", "heuristic_k")) {
    const auto n = numbers_n(*v, "heuristic_k", 3);
    s.gains.k = Vec3(n[0], n[1], n[2]);
  }
  if (auto v = cfg.get("controller", "touchdown_height")) {
    if (*v == "zero") s.gains.touchdown_height_mode = TouchdownHeight::TerrainZero;
    else if (*v == "queried") s.gains.touchdown_height_mode = TouchdownHeight::QueriedHeight;
    else parse_error("touchdown_height must be zero or queried");
  }
  s.qp.tol = cfg.get_double("controller", "qp_tol", s.qp.tol);
  s.qp.max_iterations = cfg.get_int("controller", "qp_max_iterations", s.qp.max_iterations);
  if (auto v = cfg.get("controller", "qp_equalities")) s.qp.equalities = parse_equalities(*v);
  s.qp.polish = cfg.get_bool("controller", "qp_polish", s.qp.polish);
  s.qp.warm_start = cfg.get_bool("controller", "qp_warm_start", s.qp.warm_start);

  reject_unknown(cfg, "noise", {"position", "velocity", "angle", "rate"});
  s.noise.position = cfg.get_double("noise", "position", s.noise.position);
  s.noise.velocity = cfg.get_double("noise", "velocity", s.noise.velocity);
  s.noise.angle = cfg.get_double("noise", "angle", s.noise.angle);
  s.noise.rate = cfg.get_double("noise", "rate", s.noise.rate);

  for (const std::string& sec : cfg.sections()) {
    static const std::set<std::string> known{"",      "scenario", "robot",      "gait",
                                             "command", "terrain", "disturbance", "sim",
                                             "controller", "noise"};
    if (!known.count(sec)) parse_error(cfg.origin() + ": unknown section [" + sec + "]");
  }
  try {
    s.validate();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigParse) throw;
    parse_error(cfg.origin() + ": " + e.what());
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  return parse_scenario(KeyValueConfig::load(path));
}

Scenario resolve_scenario(const std::string& spec) {
  if (std::filesystem::is_regular_file(spec)) return load_scenario(spec);
  const auto colon = spec.find(':');
  Scenario s = preset_scenario(spec.substr(0, colon));
  if (colon != std::string::npos) {
    s.mode = parse_arm_mode(spec.substr(colon + 1));
    s.validate();
  }
  return s;
}

std::string scenario_text(const Scenario& s) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "[scenario]\n"
      << "name = " << s.name << "\n"
      << "mode = " << to_string(s.mode) << "\n"
      << "duration = " << s.duration << "\n"
      << "seed = " << s.seed << "\n"
      << "accel_limit = " << s.accel_limit << "\n"
      << "metrics_start = " << s.metrics_start << "\n\n";
  out << "[robot]\n" << robot_params_text(s.params) << "\n";
  out << "[gait]\n"
      << "pattern = " << to_string(s.gait.pattern) << "\n"
      << "t_s = " << s.gait.t_s << "\n"
      << "horizon = " << s.gait.horizon << "\n"
      << "mpc_dt = " << s.gait.mpc_dt << "\n"
      << "dmpc_hz = " << s.gait.dmpc_hz << "\n\n";
  out << "[command]\n";
  for (const CommandSegment& c : s.profile.segments) {
    out << "segment = " << c.t_start << " " << c.v_body.x() << " " << c.v_body.y() << " "
        << c.yaw_rate << "\n";
  }
  out << "\n[terrain]\n";
  for (const TerrainRegion& r : s.terrain.regions) {
    out << "region = " << r.x_min << " " << r.x_max << " " << r.y_min << " " << r.y_max << " "
        << r.mu << " " << r.height << " " << r.stiffness << " " << r.damping << "\n";
  }
  out << "\n[disturbance]\n";
  for (const Disturbance& d : s.disturbances) {
    out << "wrench = " << join(d.force) << " " << join(d.torque) << " " << join(d.offset) << " "
        << d.t_start << " " << d.t_end << "\n";
  }
  out << "\n[sim]\n"
      << "dt = " << s.sim.dt << "\n"
      << "slip_velocity = " << s.sim.slip_velocity << "\n"
      << "swing_height = " << s.sim.swing_height << "\n"
      << "fall_clearance = " << s.sim.fall_clearance << "\n"
      << "fall_angle = " << s.sim.fall_angle << "\n"
      << "force_hold = " << to_string(s.sim.force_hold) << "\n\n";
  out << "[controller]\n"
      << "footstep_Q = " << join(s.footstep_Q) << "\n"
      << "footstep_R = " << join(s.footstep_R) << "\n"
      << "grf_Q = " << join(s.grf_Q) << "\n"
      << "grf_R = " << join(s.grf_R) << "\n"
      << "footstep_origin = " << to_string(s.footstep_origin) << "\n"
      << "heuristic_k = " << join(s.gains.k) << "\n"
      << "touchdown_height = "
      << (s.gains.touchdown_height_mode == TouchdownHeight::QueriedHeight ? "queried" : "zero") << "\n"
      << "qp_tol = " << s.qp.tol << "\n"
      << "qp_max_iterations = " << s.qp.max_iterations << "\n"
      << "qp_equalities = " << equalities_name(s.qp.equalities) << "\n"
      << "qp_polish = " << (s.qp.polish ? "true" : "false") << "\n"
      << "qp_warm_start = " << (s.qp.warm_start ? "true" : "false") << "\n\n";
  out << "[noise]\n"
      << "position = " << s.noise.position << "\n"
      << "velocity = " << s.noise.velocity << "\n"
      << "angle = " << s.noise.angle << "\n"
      << "rate = " << s.noise.rate << "\n";
  return out.str();
}

BodyState desired_state(const Scenario& s, const BodyState& measured, const Vec3& v_body,
                        double yaw_rate, double yaw_desired) {
  BodyState d;
  const double ground = s.terrain.height(measured.p.x(), measured.p.y());
  d.p = Vec3(measured.p.x(), measured.p.y(), ground + s.params.nominal_height);
  d.theta = EulerAngles(0.0, 0.0, yaw_desired);
  d.p_dot = rot_z(yaw_desired) * Vec3(v_body.x(), v_body.y(), 0.0);
  d.omega = Vec3(0.0, 0.0, yaw_rate);
  return d;
}

TimingStats TimingStats::of(const std::vector<double>& v) {
  TimingStats t;
  t.count = v.size();
  if (v.empty()) return t;
  double sum = 0.0;
  for (double x : v) sum += x;
  t.mean = sum / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - t.mean) * (x - t.mean);
  t.std = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  t.max = *std::max_element(v.begin(), v.end());
  return t;
}

const std::array<const char*, MetricsReport::kTracked>& tracked_state_names() {
  static const std::array<const char*, MetricsReport::kTracked> names{
      "vx", "vy", "vz", "roll", "pitch", "yaw", "wx", "wy", "wz"};
  return names;
}

std::array<double, MetricsReport::kTracked> tracking_errors(const TickSample& s) {
  const Mat3 R = rot_zyx(s.state.theta, 0.0);
  const double yaw_d = s.desired.theta.z();
  const Vec3 v = R.transpose() * s.state.p_dot - rot_z(yaw_d).transpose() * s.desired.p_dot;
  const Vec3 w = R.transpose() * s.state.omega - s.desired.omega;
  return {v.x(), v.y(), v.z(),
          s.state.theta.x() - s.desired.theta.x(),
          s.state.theta.y() - s.desired.theta.y(),
          wrap_angle(s.state.theta.z() - yaw_d),
          w.x(), w.y(), w.z()};
}

MetricsReport compute_metrics(const std::vector<TickSample>& samples, double metrics_start) {
  MetricsReport m;
  m.ticks = static_cast<int>(samples.size());
  std::array<double, MetricsReport::kTracked> sum{}, sum_sq{};
  std::array<std::vector<double>, kNumLegs> mags, ratios;
  std::vector<double> grf_t, fs_t, tick_t;
  for (const TickSample& s : samples) {
    grf_t.push_back(1e3 * s.grf_time);
    fs_t.push_back(1e3 * s.footstep_time);
    tick_t.push_back(1e3 * s.tick_time);
    if (s.grf_fallback || s.footstep_fallback) ++m.fallbacks;
    if (s.t < metrics_start) continue;
    ++m.samples;
    const auto e = tracking_errors(s);
    for (int i = 0; i < MetricsReport::kTracked; ++i) {
      sum[i] += e[i];
      sum_sq[i] += e[i] * e[i];
    }
    for (int leg = 0; leg < kNumLegs; ++leg) {
      if (!s.contact[leg]) continue;
      const Vec3& f = s.forces[leg];
      mags[leg].push_back(f.norm());
      if (f.z() >= kForceRatioMinFz) ratios[leg].push_back(std::abs(f.x()) / f.z());
    }
  }
  if (m.samples > 0) {
    const double n = m.samples;
    for (int i = 0; i < MetricsReport::kTracked; ++i) {
      m.mse[i] = sum_sq[i] / n;
      m.error_mean[i] = sum[i] / n;
      m.error_std[i] = std::sqrt(std::max(0.0, sum_sq[i] / n - m.error_mean[i] * m.error_mean[i]));
    }
  }
  for (int leg = 0; leg < kNumLegs; ++leg) {
    const TimingStats g = TimingStats::of(mags[leg]);
    m.grf_mean[leg] = g.mean;
    m.grf_std[leg] = g.std;
    m.force_ratio[leg] = TimingStats::of(ratios[leg]).mean;
  }
  m.grf_time = TimingStats::of(grf_t);
  m.footstep_time = TimingStats::of(fs_t);
  m.tick_time = TimingStats::of(tick_t);
  return m;
}

RunResult run_scenario(const Scenario& scenario, const RunOptions& options) {
  scenario.validate();
  using Clock = std::chrono::steady_clock;
  RunResult out;
  out.scenario = scenario;
  const RobotParams& params = scenario.params;
  ControllerConfig cc = scenario.controller_config();
  cc.keep_problems = options.keep_problems;
  SimConfig sc = scenario.sim;
  sc.gait = cc.gait;
  const ControllerMode mode =
      scenario.mode == ArmMode::Dual ? ControllerMode::Dual : ControllerMode::Baseline;

  SimState sim = initial_state(params, scenario.terrain, params.nominal_height);
  DualMpcState ctx = DualMpcState::initial(params, sim.feet());
  std::mt19937_64 rng(scenario.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto jitter = [&](double sigma) { return sigma > 0.0 ? sigma * normal(rng) : 0.0; };

  const long steps = std::lround(scenario.duration / sc.dt);
  const double tick_dt = 1.0 / cc.gait.dmpc_hz;
  const long period = std::max(1L, std::lround(tick_dt / sc.dt));
  Vec3 v_ramp = Vec3::Zero();
  double yaw_d = euler_zyx(sim.R_wb).z();
  ControlCommand cmd;
  double tick_t = 0.0;
  std::array<bool, kNumLegs> slipped{};
  bool fell = false;

  for (long k = 0; k < steps; ++k) {
    if (k % period == 0) {
      if (!out.samples.empty()) out.samples.back().slipped = slipped;
      slipped = {};
      const double t = sim.t;
      tick_t = t;
      const BodyState truth = body_state(sim);
      BodyState measured = truth;
      if (scenario.noise.any()) {
        for (int a = 0; a < 3; ++a) measured.p[a] += jitter(scenario.noise.position);
        for (int a = 0; a < 3; ++a) measured.p_dot[a] += jitter(scenario.noise.velocity);
        for (int a = 0; a < 3; ++a) measured.theta[a] += jitter(scenario.noise.angle);
        for (int a = 0; a < 3; ++a) measured.omega[a] += jitter(scenario.noise.rate);
      }
      const CommandSegment& seg = scenario.profile.at(t);
      const double dv = scenario.accel_limit * tick_dt;
      for (int a = 0; a < 2; ++a) {
        v_ramp[a] += std::clamp(seg.v_body[a] - v_ramp[a], -dv, dv);
      }
      const BodyState desired = desired_state(scenario, measured, v_ramp, seg.yaw_rate, yaw_d);
      yaw_d += seg.yaw_rate * tick_dt;

      const FootPositions feet = sim.feet();
      const auto t0 = Clock::now();
      TickResult res = controller_tick(mode, ctx, cc, t, measured, desired, feet);
      const double wall = std::chrono::duration<double>(Clock::now() - t0).count();
      if (options.on_tick) options.on_tick(TickHook{t, measured, desired, feet, ctx, res.command});
      cmd = std::move(res.command);
      ctx = res.state;

      TickSample s;
      s.t = t;
      s.state = truth;
      s.measured = measured;
      s.desired = desired;
      s.feet = feet;
      s.contact = cmd.schedule.contact[0];
      s.forces = cmd.forces;
      s.footsteps = cmd.footsteps;
      s.M = cmd.M;
      s.grf_iterations = cmd.grf.iterations;
      s.grf_kkt = cmd.grf.kkt_residual;
      s.footstep_iterations = cmd.footstep.iterations;
      s.footstep_kkt = cmd.footstep.kkt_residual;
      s.grf_fallback = cmd.grf_fallback;
      s.footstep_fallback = cmd.footstep_fallback;
      s.grf_time = cmd.grf.solve_time;
      s.footstep_time = cmd.footstep.solve_time;
      s.tick_time = wall;
      out.samples.push_back(s);
    }
    try {
      const LegForces forces = sc.force_hold == ForceHold::Plan
                                   ? cmd.forces_at(sim.t - tick_t, cc.gait.mpc_dt)
                                   : cmd.forces;
      sim = step(sim, params, forces, cmd.footsteps, scenario.terrain, scenario.disturbances, sc);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BodyGroundPenetration) throw;
      fell = true;
    }
    for (int leg = 0; leg < kNumLegs; ++leg) slipped[leg] = slipped[leg] || sim.foot[leg].slipped;
    if (fell || has_fallen(sim, scenario.terrain, sc)) {
      fell = true;
      break;
    }
  }
  if (!out.samples.empty()) out.samples.back().slipped = slipped;

  out.final_state = sim;
  out.metrics = compute_metrics(out.samples, scenario.metrics_start);
  for (int leg = 0; leg < kNumLegs; ++leg) out.metrics.slip_distance[leg] = sim.foot[leg].slip_distance;
  out.metrics.total_slip = sim.total_slip();
  out.metrics.fell = fell;
  out.metrics.fall_time = fell ? sim.t : 0.0;
  return out;
}

}  // namespace dualmpc
