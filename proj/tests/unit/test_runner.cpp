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
#include <filesystem>
#include <sstream>

#include "dualmpc/error.hpp"
#include "dualmpc/kv_config.hpp"
#include "dualmpc/runner.hpp"
#include "test_util.hpp"

using namespace dualmpc;

namespace {

// CSV cells of one line.
std::vector<std::string> cells(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string c;
  while (std::getline(ss, c, ',')) out.push_back(c);
  return out;
}

}  // namespace

TEST(Run, StandIsQuiet) {
  const RunResult r = run_scenario(preset_scenario("stand"));
  EXPECT_FALSE(r.metrics.fell);
  EXPECT_EQ(r.metrics.total_slip, 0.0);
  for (double m : r.metrics.mse) EXPECT_LT(m, 1e-4);
  EXPECT_EQ(r.metrics.fallbacks, 0);
}

TEST(Run, TrotCompletes) {
  const RunResult r = run_scenario(preset_scenario("trot"));
  EXPECT_FALSE(r.metrics.fell);
  EXPECT_TRUE(std::isfinite(r.metrics.mse[0]));
  EXPECT_LT(r.metrics.mse[0], 0.01);
  EXPECT_EQ(r.metrics.ticks, 200);
  EXPECT_GT(r.final_state.p.x(), 2.0);
}

TEST(Run, Deterministic) {
  const Scenario s = resolve_scenario("wrench:baseline");
  EXPECT_EQ(trace_csv(run_scenario(s).samples), trace_csv(run_scenario(s).samples));
  Scenario other = s;
  other.seed = 99;
  EXPECT_NE(trace_csv(run_scenario(s).samples), trace_csv(run_scenario(other).samples));
}

TEST(Metrics, RecomputedFromCsv) {
  const RunResult r = run_scenario(preset_scenario("trot"));
  std::stringstream csv(trace_csv(r.samples));
  std::string line;
  std::getline(csv, line);
  const auto head = cells(line);
  auto col = [&](const std::string& n) { return std::find(head.begin(), head.end(), n) - head.begin(); };
  std::array<double, 9> sq{};
  std::array<double, 4> ratio_sum{};
  std::array<int, 4> ratio_n{};
  int n = 0;
  const char* legs[] = {"rf", "lf", "rh", "lh"};
  while (std::getline(csv, line)) {
    const auto c = cells(line);
    auto v = [&](const std::string& k) { return std::stod(c[col(k)]); };
    if (v("t") < r.scenario.metrics_start) continue;
    ++n;
    const Mat3 R = rot_zyx(Vec3(v("roll"), v("pitch"), v("yaw")), 0.0);
    const Vec3 vb = R.transpose() * Vec3(v("vx"), v("vy"), v("vz")) -
                    rot_z(v("d_yaw")).transpose() * Vec3(v("d_vx"), v("d_vy"), v("d_vz"));
    const Vec3 wb = R.transpose() * Vec3(v("wx"), v("wy"), v("wz")) - Vec3(v("d_wx"), v("d_wy"), v("d_wz"));
    const double e[9] = {vb.x(), vb.y(), vb.z(), v("roll") - v("d_roll"), v("pitch") - v("d_pitch"),
                         wrap_angle(v("yaw") - v("d_yaw")), wb.x(), wb.y(), wb.z()};
    for (int i = 0; i < 9; ++i) sq[i] += e[i] * e[i];
    for (int l = 0; l < 4; ++l) {
      const std::string L = legs[l];
      const double fz = v("f_" + L + "_z");
      if (v("contact_" + L) == 1.0 && fz >= kForceRatioMinFz) {
        ratio_sum[l] += std::abs(v("f_" + L + "_x")) / fz;
        ++ratio_n[l];
      }
    }
  }
  ASSERT_EQ(n, r.metrics.samples);
  for (int i = 0; i < 9; ++i) EXPECT_NEAR(sq[i] / n, r.metrics.mse[i], 1e-12);
  for (int l = 0; l < 4; ++l) EXPECT_NEAR(ratio_sum[l] / ratio_n[l], r.metrics.force_ratio[l], 1e-12);
}

TEST(Compare, IdentityAndSwap) {
  const MetricsReport a = run_scenario(resolve_scenario("wrench:dual")).metrics;
  const MetricsReport b = run_scenario(resolve_scenario("wrench:baseline")).metrics;
  for (const ComparisonRow& row : compare_metrics(a, a)) {
    if (row.defined) EXPECT_EQ(row.delta, 0.0) << row.metric;
  }
  const auto ab = compare_metrics(a, b), ba = compare_metrics(b, a);
  ASSERT_EQ(ab.size(), ba.size());
  for (std::size_t i = 0; i < ab.size(); ++i) {
    if (!ab[i].defined || !ba[i].defined || ab[i].a == 0.0) continue;
    const double want = -ab[i].delta / (1.0 + ab[i].delta);
    EXPECT_NEAR(ba[i].delta, want, 1e-12 * std::max(1.0, std::abs(want))) << ab[i].metric;
  }
  EXPECT_NE(comparison_table(ab, "dual", "baseline").find("mse_roll"), std::string::npos);
}

TEST(Compare, MismatchedScenarios) {
  const Scenario a = resolve_scenario("trot:dual");
  EXPECT_NO_THROW(check_comparable(a, resolve_scenario("trot:baseline")));
  Scenario b = resolve_scenario("trot:baseline");
  b.duration = 3.0;
  try {
    check_comparable(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MismatchedScenarios);
  }
}

TEST(Bench, HorizonAndRepetitions) {
  Scenario s10 = preset_scenario("trot");
  s10.duration = 2.0;
  Scenario s1 = s10;
  s1.gait = GaitConfig::trot(0.25, 1);
  const BenchReport r10 = bench_scenario(s10, 100);
  const BenchReport r1 = bench_scenario(s1, 100);
  EXPECT_EQ(r10.horizon, 10);
  EXPECT_EQ(r1.horizon, 1);
  EXPECT_LT(r1.tick.mean, r10.tick.mean);
  const BenchReport few = bench_scenario(s10, 10);
  EXPECT_LE(std::abs(few.tick.mean - r10.tick.mean), 3.0 * r10.tick.std + 0.05 * r10.tick.mean);
  EXPECT_THROW(bench_scenario(s10, 9), Error);
  EXPECT_NE(bench_table(r10).find("tick"), std::string::npos);
}

TEST(Scenario, TextRoundTrip) {
  for (const std::string& name : preset_names()) {
    const Scenario s = resolve_scenario(name + ":baseline");
    const Scenario back = parse_scenario(KeyValueConfig::parse(scenario_text(s)));
    EXPECT_EQ(scenario_text(back), scenario_text(s)) << name;
    EXPECT_EQ(back.mode, ArmMode::Baseline);
  }
}

TEST(Scenario, ResolveAndErrors) {
  EXPECT_EQ(resolve_scenario("compliant:baseline_fast").mode, ArmMode::BaselineFast);
  EXPECT_NEAR(resolve_scenario("compliant:baseline_fast").arm_gait().t_s, 0.2, 1e-12);
  EXPECT_THROW(resolve_scenario("nowhere"), Error);
  EXPECT_THROW(resolve_scenario("trot:fast"), Error);
  EXPECT_THROW(parse_scenario(KeyValueConfig::parse("[scenario]\nduraton = 3\n")), Error);
  EXPECT_THROW(parse_scenario(KeyValueConfig::parse("[scenario]\nduration = -1\n")), Error);
}

TEST(Profile, PiecewiseConstant) {
  CommandProfile p;
  p.segments = {{0.0, Vec3(0.1, 0, 0), 0.0}, {2.0, Vec3(0.4, 0, 0), 0.2}};
  EXPECT_EQ(p.at(1.9).v_body.x(), 0.1);
  EXPECT_EQ(p.at(2.0).yaw_rate, 0.2);
  CommandProfile late;
  late.segments = {{1.0, Vec3::Zero(), 0.0}};
  EXPECT_THROW(late.validate(), Error);
}

TEST(Outputs, FilesWritten) {
  Scenario s = preset_scenario("stand");
  s.duration = 1.0;
  const RunResult r = run_scenario(s);
  const auto dir = std::filesystem::temp_directory_path() / "dualmpc_outputs_test";
  std::filesystem::remove_all(dir);
  write_run_outputs(r, dir);
  for (const char* f : {"trace.csv", "metrics.txt", "timing.dat", "states.dat", "grf_box.dat", "robot.params",
                        "scenario.cfg"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  const Scenario back = load_scenario(dir / "scenario.cfg");
  EXPECT_EQ(scenario_text(back), scenario_text(s));
  EXPECT_EQ(load_robot_params(dir / "robot.params").mass, s.params.mass);
  std::filesystem::remove_all(dir);
}

TEST(KeyValue, Parsing) {
  const KeyValueConfig c = KeyValueConfig::parse(
      "top = 1\n# comment\n[a]\nx = 2.5\nflag = true\nr = 1 2\nr = 3 4\n", "t");
  EXPECT_EQ(c.get_int("", "top", 0), 1);
  EXPECT_EQ(c.get_double("a", "x", 0.0), 2.5);
  EXPECT_TRUE(c.get_bool("a", "flag", false));
  EXPECT_EQ(c.all("a", "r").size(), 2u);
  EXPECT_EQ(KeyValueConfig::numbers("0 0.5 -1", "v"), (std::vector<double>{0, 0.5, -1}));
  EXPECT_EQ(c.get_double("a", "missing", 7.0), 7.0);
  EXPECT_THROW(c.get_int("a", "x", 0), Error);
  EXPECT_THROW(KeyValueConfig::numbers("1 x", "v"), Error);
  EXPECT_THROW(KeyValueConfig::parse("[open\n"), Error);
  EXPECT_THROW(KeyValueConfig::parse("novalue\n"), Error);
}
