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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "dualmpc/error.hpp"
#include "dualmpc/runner.hpp"

namespace dualmpc {
namespace {

const char* const kLegKeys[kNumLegs] = {"rf", "lf", "rh", "lh"};

void put_vec(std::ostream& out, const Vec3& v) { out << ',' << v.x() << ',' << v.y() << ',' << v.z(); }

void put_state(std::ostream& out, const BodyState& s) {
  put_vec(out, s.p);
  put_vec(out, s.p_dot);
  put_vec(out, s.theta);
  put_vec(out, s.omega);
}

std::string fmt(double v, int prec = 6) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

std::string pct(const ComparisonRow& r) {
  if (!r.defined) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%+.1f%%", 100.0 * r.delta);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  f << std::setprecision(17);
  return f;
}

}  // namespace

void write_trace_csv(const std::vector<TickSample>& samples, std::ostream& out) {
  out << std::setprecision(17);
  out << "t";
  for (const char* pre : {"", "d_"}) {
    for (const char* n : {"px", "py", "pz", "vx", "vy", "vz", "roll", "pitch", "yaw", "wx", "wy", "wz"}) {
      out << ',' << pre << n;
    }
  }
  for (const char* pre : {"f_", "pb_"}) {
    for (const char* leg : kLegKeys) {
      for (const char* a : {"x", "y", "z"}) out << ',' << pre << leg << '_' << a;
    }
  }
  out << ",M,grf_iter,grf_kkt,fs_iter,fs_kkt,grf_fallback,fs_fallback";
  for (const char* leg : kLegKeys) out << ",contact_" << leg;
  for (const char* leg : kLegKeys) out << ",slip_" << leg;
  out << '\n';
  for (const TickSample& s : samples) {
    out << s.t;
    put_state(out, s.state);
    put_state(out, s.desired);
    for (const Vec3& f : s.forces) put_vec(out, f);
    for (const Vec3& p : s.footsteps) put_vec(out, p);
    out << ',' << s.M << ',' << s.grf_iterations << ',' << s.grf_kkt << ','
        << s.footstep_iterations << ',' << s.footstep_kkt << ',' << int(s.grf_fallback) << ','
        << int(s.footstep_fallback);
    for (bool c : s.contact) out << ',' << int(c);
    for (bool c : s.slipped) out << ',' << int(c);
    out << '\n';
  }
}

std::string trace_csv(const std::vector<TickSample>& samples) {
  std::ostringstream out;
  write_trace_csv(samples, out);
  return out.str();
}

std::string metrics_table(const MetricsReport& m, const std::string& title) {
  std::ostringstream out;
  out << title << "\n";
  out << "  ticks " << m.ticks << ", samples " << m.samples << ", fallbacks " << m.fallbacks
      << ", fell " << (m.fell ? "yes (t=" + fmt(m.fall_time) + ")" : std::string("no")) << "\n";
  out << "  state      mse          err_mean     err_std\n";
  const auto& names = tracked_state_names();
  for (int i = 0; i < MetricsReport::kTracked; ++i) {
    char line[160];
    std::snprintf(line, sizeof line, "  %-8s %12.5e %12.5e %12.5e\n", names[i], m.mse[i],
                  m.error_mean[i], m.error_std[i]);
    out << line;
  }
  out << "  leg   grf_mean[N]  grf_std[N]  force_ratio  slip[m]\n";
  for (int leg = 0; leg < kNumLegs; ++leg) {
    char line[160];
    std::snprintf(line, sizeof line, "  %-4s %11.4f %11.4f %12.5f %8.4f\n", leg_name(kAllLegs[leg]),
                  m.grf_mean[leg], m.grf_std[leg], m.force_ratio[leg], m.slip_distance[leg]);
    out << line;
  }
  out << "  qp time [ms]   mean      std       max\n";
  const std::pair<const char*, const TimingStats*> rows[] = {
      {"grf", &m.grf_time}, {"footstep", &m.footstep_time}, {"tick", &m.tick_time}};
  for (const auto& [name, t] : rows) {
    char line[160];
    std::snprintf(line, sizeof line, "  %-10s %9.4f %9.4f %9.4f\n", name, t->mean, t->std, t->max);
    out << line;
  }
  return out.str();
}

void check_comparable(const Scenario& a, const Scenario& b) {
  Scenario a2 = a, b2 = b;
  a2.mode = b2.mode = ArmMode::Dual;
  a2.name = b2.name = "";
  if (scenario_text(a2) != scenario_text(b2)) {
    throw Error(ErrorCode::MismatchedScenarios,
                "scenarios '" + a.name + "' and '" + b.name + "' differ in more than the controller mode");
  }
}

std::vector<ComparisonRow> compare_metrics(const MetricsReport& a, const MetricsReport& b) {
  std::vector<ComparisonRow> rows;
  const auto add = [&](std::string name, double va, double vb) {
    ComparisonRow r{std::move(name), va, vb, 0.0, true};
    if (vb != 0.0) {
      r.delta = (va - vb) / vb;
    } else {
      r.defined = va == 0.0;
    }
    rows.push_back(r);
  };
  const auto& names = tracked_state_names();
  for (int i = 0; i < MetricsReport::kTracked; ++i) add(std::string("mse_") + names[i], a.mse[i], b.mse[i]);
  for (int i = 0; i < MetricsReport::kTracked; ++i) {
    add(std::string("err_std_") + names[i], a.error_std[i], b.error_std[i]);
  }
  for (int leg = 0; leg < kNumLegs; ++leg) {
    add(std::string("grf_mean_") + kLegKeys[leg], a.grf_mean[leg], b.grf_mean[leg]);
  }
  for (int leg = 0; leg < kNumLegs; ++leg) {
    add(std::string("force_ratio_") + kLegKeys[leg], a.force_ratio[leg], b.force_ratio[leg]);
  }
  add("slip_total", a.total_slip, b.total_slip);
  add("tick_time_mean", a.tick_time.mean, b.tick_time.mean);
  return rows;
}

std::string comparison_table(const std::vector<ComparisonRow>& rows, const std::string& a_name,
                             const std::string& b_name) {
  std::ostringstream out;
  char head[200];
  std::snprintf(head, sizeof head, "%-18s %14s %14s %10s\n", "metric", a_name.c_str(),
                b_name.c_str(), "delta");
  out << head;
  for (const ComparisonRow& r : rows) {
    char line[200];
    std::snprintf(line, sizeof line, "%-18s %14.6g %14.6g %10s\n", r.metric.c_str(), r.a, r.b,
                  pct(r).c_str());
    out << line;
  }
  return out.str();
}

BenchReport bench_scenario(const Scenario& scenario, int repetitions) {
  if (repetitions < 10) throw Error(ErrorCode::InvalidArgument, "bench needs at least 10 repetitions");
  struct Input {
    double t;
    BodyState measured, desired;
    FootPositions feet;
    DualMpcState ctx;
  };
  std::vector<Input> inputs;
  RunOptions opt;
  opt.on_tick = [&](const TickHook& h) {
    inputs.push_back({h.t, h.measured, h.desired, h.feet, h.ctx_before});
  };
  run_scenario(scenario, opt);
  if (inputs.empty()) throw Error(ErrorCode::InvalidArgument, "bench: scenario produced no ticks");

  const ControllerConfig cc = scenario.controller_config();
  const ControllerMode mode =
      scenario.mode == ArmMode::Dual ? ControllerMode::Dual : ControllerMode::Baseline;
  std::vector<double> grf, fs, total;
  for (int r = 0; r < repetitions; ++r) {
    const Input& in = inputs[static_cast<std::size_t>(r) % inputs.size()];
    const TickResult res = controller_tick(mode, in.ctx, cc, in.t, in.measured, in.desired, in.feet);
    grf.push_back(1e3 * res.command.grf.solve_time);
    fs.push_back(1e3 * res.command.footstep.solve_time);
    total.push_back(1e3 * (res.command.grf.solve_time + res.command.footstep.solve_time));
  }
  BenchReport rep;
  rep.repetitions = repetitions;
  rep.horizon = cc.gait.horizon;
  rep.grf = TimingStats::of(grf);
  rep.footstep = TimingStats::of(fs);
  rep.tick = TimingStats::of(total);
  return rep;
}

std::string bench_table(const BenchReport& r) {
  std::ostringstream out;
  out << "bench: " << r.repetitions << " ticks, N = " << r.horizon << "\n";
  out << "  qp time [ms]   mean      std       max\n";
  const std::pair<const char*, const TimingStats*> rows[] = {
      {"grf", &r.grf}, {"footstep", &r.footstep}, {"dmpc tick", &r.tick}};
  for (const auto& [name, t] : rows) {
    char line[160];
    std::snprintf(line, sizeof line, "  %-10s %9.4f %9.4f %9.4f\n", name, t->mean, t->std, t->max);
    out << line;
  }
  return out.str();
}

void write_run_outputs(const RunResult& r, const std::filesystem::path& dir, bool with_trace) {
  std::filesystem::create_directories(dir);
  if (with_trace) {
    auto f = open_out(dir / "trace.csv");
    write_trace_csv(r.samples, f);
  }
  {
    auto f = open_out(dir / "metrics.txt");
    f << metrics_table(r.metrics, r.scenario.name + " [" + to_string(r.scenario.mode) + "]");
  }
  {
    auto f = open_out(dir / "robot.params");
    f << robot_params_text(r.scenario.params);
  }
  {
    auto f = open_out(dir / "scenario.cfg");
    f << scenario_text(r.scenario);
  }
  {
    auto f = open_out(dir / "states.dat");
    f << "# t vx vy vz vx_d vy_d roll pitch yaw yaw_d wx wy wz wz_d   (body-frame velocity and rates)\n";
    for (const TickSample& s : r.samples) {
      const Mat3 R = rot_zyx(s.state.theta, 0.0);
      const Vec3 v = R.transpose() * s.state.p_dot;
      const Vec3 vd = rot_z(s.desired.theta.z()).transpose() * s.desired.p_dot;
      const Vec3 w = R.transpose() * s.state.omega;
      f << s.t << ' ' << v.x() << ' ' << v.y() << ' ' << v.z() << ' ' << vd.x() << ' ' << vd.y()
        << ' ' << s.state.theta.x() << ' ' << s.state.theta.y() << ' ' << s.state.theta.z() << ' '
        << s.desired.theta.z() << ' ' << w.x() << ' ' << w.y() << ' ' << w.z() << ' '
        << s.desired.omega.z() << '\n';
    }
  }
  {
    auto f = open_out(dir / "grf_box.dat");
    f << "# leg(1-4) |f| force_ratio   (stance samples after metrics_start; ratio -1 when f_z < "
      << kForceRatioMinFz << " N)\n";
    for (const TickSample& s : r.samples) {
      if (s.t < r.scenario.metrics_start) continue;
      for (int leg = 0; leg < kNumLegs; ++leg) {
        if (!s.contact[leg]) continue;
        const Vec3& fv = s.forces[leg];
        const double ratio = fv.z() >= kForceRatioMinFz ? std::abs(fv.x()) / fv.z() : -1.0;
        f << leg + 1 << ' ' << fv.norm() << ' ' << ratio << '\n';
      }
    }
  }
  {
    auto f = open_out(dir / "timing.dat");
    f << "# t grf_ms footstep_ms tick_ms\n";
    for (const TickSample& s : r.samples) {
      f << s.t << ' ' << 1e3 * s.grf_time << ' ' << 1e3 * s.footstep_time << ' '
        << 1e3 * s.tick_time << '\n';
    }
  }
}

}  // namespace dualmpc
