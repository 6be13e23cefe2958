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

// dualmpc command line: run, compare, bench, check, show, presets.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dualmpc/error.hpp"
#include "dualmpc/qp.hpp"
#include "dualmpc/runner.hpp"
#include "dualmpc/verify.hpp"

namespace fs = std::filesystem;
using namespace dualmpc;

namespace {

struct Common {
  bool trace = false;
  int dump_qp = 0;  // ticks to dump, 0 = off
  std::optional<std::uint64_t> seed;
  std::string out;
};

void add_common(CLI::App* app, Common& c) {
  app->add_flag("--trace", c.trace, "Write the tick-level trace.csv");
  app->add_option("--dump-qp", c.dump_qp, "Dump the GRF and footstep QPs of the first N ticks as CSV")
      ->expected(0, 1)
      ->default_str("1");
  app->add_option("--seed", c.seed, "Override the scenario seed");
  app->add_option("--out", c.out, "Output directory");
}

Scenario load(const std::string& spec, const Common& c) {
  Scenario s = resolve_scenario(spec);
  if (c.seed) s.seed = *c.seed;
  return s;
}

fs::path out_dir(const Common& c, const std::string& sub = "") {
  fs::path d = c.out.empty() ? fs::path(".") : fs::path(c.out);
  return sub.empty() ? d : d / sub;
}

RunResult execute(const Scenario& s, const Common& c, const fs::path& dir) {
  RunOptions opt;
  int tick = 0;
  if (c.dump_qp > 0) {
    opt.keep_problems = true;
    opt.on_tick = [&](const TickHook& h) {
      if (tick < c.dump_qp) {
        char stem[32];
        std::snprintf(stem, sizeof stem, "tick%04d", tick);
        if (h.command.grf_problem) dump_csv(h.command.grf_problem->qp, dir / "qp", std::string(stem) + "_grf");
        if (h.command.footstep_problem) {
          dump_csv(h.command.footstep_problem->qp, dir / "qp", std::string(stem) + "_footstep");
        }
      }
      ++tick;
    };
  }
  RunResult r = run_scenario(s, opt);
  if (!c.out.empty()) {
    write_run_outputs(r, dir, c.trace);
  } else if (c.trace) {
    fs::create_directories(dir);
    std::ofstream f(dir / "trace.csv");
    write_trace_csv(r.samples, f);
  }
  return r;
}

std::string title(const Scenario& s) { return s.name + " [" + to_string(s.mode) + "]"; }

std::string run_label(const Scenario& s) { return s.name + "_" + to_string(s.mode); }

int cmd_run(const std::string& spec, const Common& c) {
  const Scenario s = load(spec, c);
  const RunResult r = execute(s, c, out_dir(c));
  std::cout << metrics_table(r.metrics, title(s));
  return 0;
}

int cmd_compare(const std::string& a_spec, const std::string& b_spec, const Common& c) {
  const Scenario a = load(a_spec, c), b = load(b_spec, c);
  check_comparable(a, b);
  std::string la = run_label(a), lb = run_label(b);
  if (la == lb) {
    la += "_a";
    lb += "_b";
  }
  const RunResult ra = execute(a, c, out_dir(c, la));
  const RunResult rb = execute(b, c, out_dir(c, lb));
  const std::string table = comparison_table(compare_metrics(ra.metrics, rb.metrics), la, lb);
  std::cout << metrics_table(ra.metrics, title(a)) << '\n'
            << metrics_table(rb.metrics, title(b)) << '\n'
            << table;
  if (!c.out.empty()) {
    std::ofstream f(out_dir(c) / "comparison.txt");
    f << table;
  }
  return 0;
}

int cmd_bench(const std::string& spec, int reps, const Common& c) {
  const Scenario s = load(spec, c);
  const BenchReport r = bench_scenario(s, reps);
  const std::string table = bench_table(r);
  std::cout << title(s) << '\n' << table;
  if (!c.out.empty()) {
    fs::create_directories(out_dir(c));
    std::ofstream f(out_dir(c) / "bench.txt");
    f << table;
  }
  return 0;
}

int cmd_check(const std::vector<int>& ids, const Common& c) {
  verify::Budget b;
  if (c.seed) b.seed = *c.seed;
  int failed = 0;
  std::ofstream log;
  if (!c.out.empty()) {
    fs::create_directories(out_dir(c));
    log.open(out_dir(c) / "check.txt");
  }
  for (const auto& r : verify::run_all(ids, b)) {
    const std::string line = verify::format(r);
    std::cout << line << std::endl;
    if (log) log << line << '\n';
    failed += r.pass ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
  return failed == 0 ? 0 : 1;
}

int cmd_show(const std::string& spec, const Common& c) {
  const Scenario s = load(spec, c);
  const std::string text = scenario_text(s);
  if (c.out.empty()) {
    std::cout << text;
  } else {
    fs::create_directories(out_dir(c));
    std::ofstream(out_dir(c) / (run_label(s) + ".cfg")) << text;
    std::ofstream(out_dir(c) / "robot.params") << robot_params_text(s.params);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual-MPC quadruped locomotion: closed-loop scenarios, comparisons and checks"};
  app.require_subcommand(1);
  Common common;

  std::string a, b;
  int reps = 100;
  std::vector<int> ids;

  CLI::App* run = app.add_subcommand("run", "Run a scenario and print its metrics");
  run->add_option("scenario", a, "Preset name, name:mode, or scenario file")->required();
  add_common(run, common);

  CLI::App* compare = app.add_subcommand("compare", "Run two scenarios that differ only in controller mode");
  compare->add_option("a", a, "First scenario")->required();
  compare->add_option("b", b, "Second scenario (the reference of the deltas)")->required();
  add_common(compare, common);

  CLI::App* bench = app.add_subcommand("bench", "Time controller ticks replayed from a closed-loop run");
  bench->add_option("scenario", a, "Scenario")->required();
  bench->add_option("--reps", reps, "Ticks to time (>= 10)")->capture_default_str();
  add_common(bench, common);

  CLI::App* check = app.add_subcommand("check", "Run the acceptance criteria");
  check->add_option("ids", ids, "Criteria to run (default: all)")->check(CLI::Range(1, verify::kNumCriteria));
  add_common(check, common);

  CLI::App* show = app.add_subcommand("show", "Print a scenario as key-value text (--out writes files)");
  show->add_option("scenario", a, "Scenario")->required();
  add_common(show, common);

  app.add_subcommand("presets", "List the built-in scenario presets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(a, common);
    if (*compare) return cmd_compare(a, b, common);
    if (*bench) return cmd_bench(a, reps, common);
    if (*check) return cmd_check(ids, common);
    if (*show) return cmd_show(a, common);
    for (const std::string& n : preset_names()) std::cout << n << '\n';
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
