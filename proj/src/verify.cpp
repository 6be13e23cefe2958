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

#include "dualmpc/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include "dualmpc/dual_mpc.hpp"
#include "dualmpc/error.hpp"
#include "dualmpc/runner.hpp"
#include "dualmpc/simulator.hpp"

namespace dualmpc::verify {
namespace {

using Clock = std::chrono::steady_clock;

class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
  MatrixXd normal(Eigen::Index r, Eigen::Index c) {
    MatrixXd M(r, c);
    for (Eigen::Index j = 0; j < c; ++j) {
      for (Eigen::Index i = 0; i < r; ++i) M(i, j) = normal();
    }
    return M;
  }
  VectorXd normal(Eigen::Index n) { return normal(n, 1); }
  Vec3 box(const Vec3& half) {
    return Vec3(uniform(-half.x(), half.x()), uniform(-half.y(), half.y()),
                uniform(-half.z(), half.z()));
  }

private:
  std::mt19937_64 gen_;
};

struct Timer {
  Clock::time_point t0 = Clock::now();
  double seconds() const { return std::chrono::duration<double>(Clock::now() - t0).count(); }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

CriterionResult finish(int id, const char* name, bool pass, const std::string& detail,
                       const Timer& timer) {
  return {id, name, pass, detail, timer.seconds()};
}

// Random stable-ish discrete pair of the controller's dimensions.
StateMatrixPair random_discrete(Rng& rng, Eigen::Index n, Eigen::Index m) {
  StateMatrixPair d;
  d.A = MatrixXd::Identity(n, n) + 0.1 * rng.normal(n, n);
  d.B = 0.1 * rng.normal(n, m);
  return d;
}

HorizonWeights random_weights(Rng& rng, int N, Eigen::Index n, Eigen::Index m) {
  HorizonWeights w;
  for (int k = 0; k < N; ++k) {
    VectorXd Q(n), R(m);
    for (Eigen::Index i = 0; i < n; ++i) Q[i] = rng.uniform(0.0, 1.0) < 0.3 ? 0.0 : rng.uniform(0.0, 500.0);
    for (Eigen::Index i = 0; i < m; ++i) R[i] = std::pow(10.0, rng.uniform(-7.0, 1.0));
    w.Q.push_back(Q);
    w.R.push_back(R);
  }
  return w;
}

// Stage-wise objective by explicit rollout: sum_k |x_k - xd_k|_Q^2 + |u_k - ud_k|_R^2.
double stage_objective(const StateMatrixPair& d, const HorizonWeights& w, const VectorXd& x0,
                       const VectorXd& Xd, const VectorXd& U, const VectorXd& Ud) {
  const Eigen::Index n = d.n(), m = d.m();
  VectorXd x = x0;
  double J = 0.0;
  for (int k = 0; k < w.horizon(); ++k) {
    const VectorXd u = U.segment(m * k, m);
    x = d.A * x + d.B * u;
    const VectorXd ex = x - Xd.segment(n * k, n);
    const VectorXd eu = u - Ud.segment(m * k, m);
    J += ex.dot(w.Q[k].cwiseProduct(ex)) + eu.dot(w.R[k].cwiseProduct(eu));
  }
  return J;
}

BodyState random_body_state(Rng& rng) {
  BodyState s;
  s.p = Vec3(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(0.27, 0.33));
  s.p_dot = rng.box(Vec3(0.4, 0.3, 0.05));
  s.theta = Vec3(rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1), rng.uniform(-3.1, 3.1));
  s.omega = rng.box(Vec3(0.5, 0.5, 0.5));
  return s;
}

Scenario with_seed(const std::string& spec, std::uint64_t seed) {
  Scenario s = resolve_scenario(spec);
  s.seed = seed;
  return s;
}

}  // namespace

EnumeratedSolution enumerate_active_sets(const MatrixXd& P, const VectorXd& q, const MatrixXd& G,
                                         const VectorXd& h) {
  const Eigen::Index n = q.size(), m = h.size();
  if (m > 20) throw Error(ErrorCode::InvalidArgument, "enumerate_active_sets: too many rows");
  EnumeratedSolution best;
  best.objective = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    std::vector<Eigen::Index> act;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (mask & (1u << i)) act.push_back(i);
    }
    const Eigen::Index a = static_cast<Eigen::Index>(act.size());
    if (a > n) continue;
    MatrixXd K = MatrixXd::Zero(n + a, n + a);
    VectorXd rhs(n + a);
    K.topLeftCorner(n, n) = P;
    rhs.head(n) = -q;
    for (Eigen::Index j = 0; j < a; ++j) {
      K.block(0, n + j, n, 1) = G.row(act[j]).transpose();
      K.block(n + j, 0, 1, n) = G.row(act[j]);
      rhs[n + j] = h[act[j]];
    }
    Eigen::FullPivLU<MatrixXd> lu(K);
    if (!lu.isInvertible()) continue;
    const VectorXd z = lu.solve(rhs);
    const VectorXd u = z.head(n);
    if (a > 0 && z.tail(a).minCoeff() < -1e-12) continue;  // multipliers must be >= 0
    if (m > 0 && (G * u - h).maxCoeff() > 1e-12) continue;
    const double J = 0.5 * u.dot(P * u) + q.dot(u);
    if (J < best.objective) {
      best.feasible = true;
      best.u = u;
      best.objective = J;
    }
  }
  return best;
}

double footstep_grid_minimum(const FootstepProblem& fp, double spacing) {
  if (fp.groups.size() != 1) {
    throw Error(ErrorCode::InvalidArgument, "footstep_grid_minimum needs exactly one swing group");
  }
  const SwingGroup& g = fp.groups.front();
  const int leg = index(g.leg);
  const int N = fp.schedule.horizon();
  VectorXd u(kInputDim * N);
  for (int k = 0; k < N; ++k) {
    for (int l = 0; l < kNumLegs; ++l) u.segment<3>(kInputDim * k + 3 * l) = fp.current_feet[l];
  }
  const Vec3 c = fp.heuristic_targets[leg];
  // Generous world box: the body-frame workspace rotated by any yaw fits inside.
  const double half = 0.45;
  const int steps = static_cast<int>(std::ceil(2.0 * half / spacing));
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps; ++j) {
      const Vec3 p(c.x() - half + spacing * i, c.y() - half + spacing * j, c.z());
      for (int k = g.first; k <= g.last; ++k) u.segment<3>(kInputDim * k + 3 * leg) = p;
      if (fp.qp.num_ineq() > 0 && (fp.qp.G * u - fp.qp.h).maxCoeff() > 0.0) continue;
      best = std::min(best, fp.qp.objective(u));
    }
  }
  return best;
}

VectorXd reference_hover_trajectory(double dt) {
  const RobotParams params = go1_params();
  const Terrain terrain = Terrain::flat();
  SimConfig cfg;
  cfg.dt = dt;
  cfg.gait = GaitConfig::stand();
  SimState s = initial_state(params, terrain, params.nominal_height);
  s.p_dot = Vec3(0.1, 0.05, 0.0);
  s.omega = Vec3(0.2, -0.1, 0.3);
  const double share = params.mass * params.gravity.norm() / kNumLegs;
  LegForces f;
  for (int i = 0; i < kNumLegs; ++i) f[i] = Vec3(0.5 - 0.2 * i, 0.3 * (i % 2 ? 1 : -1), share + 0.5 * i);
  const FootPositions targets = s.feet();
  const long steps = std::lround(1.0 / dt);
  for (long k = 0; k < steps; ++k) s = step(s, params, f, targets, terrain, {}, cfg);
  VectorXd out(12);
  out.head<3>() = s.p;
  out.tail<9>() = Eigen::Map<const Eigen::Matrix<double, 9, 1>>(s.R_wb.data());
  return out;
}

// 1
CriterionResult check_cost_hessian(const Budget& b) {
  Timer timer;
  Rng rng(b.seed + 1);
  int ok = 0;
  for (int t = 0; t < b.reps_hessian; ++t) {
    const int N = rng.integer(1, 5);
    const CondensedPrediction pred = condense(random_discrete(rng, kStateDim, kInputDim), N);
    const HorizonWeights w = random_weights(rng, N, kStateDim, kInputDim);
    const QuadraticCost c = build_cost(pred, w, rng.normal(kStateDim), rng.normal(kStateDim * N),
                                       rng.normal(kInputDim * N));
    ok += check_positive_definite(c.P) ? 1 : 0;
  }
  const double sec = timer.seconds();
  return finish(1, "cost Hessian positive definite", ok == b.reps_hessian && sec < 10.0,
                std::to_string(ok) + "/" + std::to_string(b.reps_hessian) + " Cholesky pass, N in 1..5, " +
                    sci(sec) + " s (limit 10 s)",
                timer);
}

// 2
CriterionResult check_qp_oracle(const Budget& b) {
  Timer timer;
  Rng rng(b.seed + 2);
  double du = 0.0, dJ = 0.0;
  int bad = 0;
  QpSolver solver;
  for (int t = 0; t < b.reps_oracle; ++t) {
    const int n = rng.integer(1, 4);
    const MatrixXd L = rng.normal(n, n);
    CondensedQP qp;
    qp.P = L * L.transpose() + 0.1 * MatrixXd::Identity(n, n);
    qp.q = 2.0 * rng.normal(n);
    qp.E = MatrixXd::Zero(0, n);
    qp.c = VectorXd::Zero(0);
    // Box lo <= u <= hi on every coordinate.
    qp.G = MatrixXd::Zero(2 * n, n);
    qp.h.resize(2 * n);
    for (int i = 0; i < n; ++i) {
      const double lo = rng.uniform(-1.5, 0.0), hi = rng.uniform(0.05, 1.5);
      qp.G(i, i) = 1.0;
      qp.h[i] = hi;
      qp.G(n + i, i) = -1.0;
      qp.h[n + i] = -lo;
    }
    const EnumeratedSolution ref = enumerate_active_sets(qp.P, qp.q, qp.G, qp.h);
    const QPSolution sol = solver.solve(qp);
    if (!ref.feasible) {
      ++bad;
      continue;
    }
    const double e_u = (sol.u_star - ref.u).cwiseAbs().maxCoeff();
    const double e_J = std::abs(qp.objective(sol.u_star) - ref.objective);
    du = std::max(du, e_u);
    dJ = std::max(dJ, e_J);
    if (e_u > 1e-6 || e_J > 1e-8) ++bad;
  }
  const double sec = timer.seconds();
  return finish(2, "QP matches active-set enumeration", bad == 0 && sec < 30.0,
                std::to_string(b.reps_oracle - bad) + "/" + std::to_string(b.reps_oracle) +
                    " agree, max |du| " + sci(du) + " (tol 1e-6), max |dJ| " + sci(dJ) +
                    " (tol 1e-8), " + sci(sec) + " s (limit 30 s)",
                timer);
}

// 3
CriterionResult check_condensation(const Budget& b) {
  Timer timer;
  Rng rng(b.seed + 3);
  const int N = 10;
  double worst = 0.0;
  for (int t = 0; t < b.reps_rollout; ++t) {
    const StateMatrixPair d = random_discrete(rng, kStateDim, kInputDim);
    const CondensedPrediction pred = condense(d, N);
    const VectorXd x0 = rng.normal(kStateDim);
    const VectorXd U = rng.normal(kInputDim * N);
    const VectorXd X = pred.A_qp * x0 + pred.B_qp * U;
    VectorXd x = x0;
    for (int k = 0; k < N; ++k) {
      x = d.A * x + d.B * U.segment<kInputDim>(kInputDim * k);
      worst = std::max(worst, (X.segment<kStateDim>(kStateDim * k) - x).cwiseAbs().maxCoeff());
    }
  }
  return finish(3, "condensed prediction equals rollout", worst <= 1e-10,
                std::to_string(b.reps_rollout) + " trials, N = 10, max error " + sci(worst) +
                    " (tol 1e-10)",
                timer);
}

// 4
CriterionResult check_cost_gradient(const Budget& b) {
  Timer timer;
  Rng rng(b.seed + 4);
  const double h = 1e-6;
  double worst = 0.0;
  for (int t = 0; t < b.reps_gradient; ++t) {
    const int N = rng.integer(1, 5);
    const StateMatrixPair d = random_discrete(rng, kStateDim, kInputDim);
    const CondensedPrediction pred = condense(d, N);
    HorizonWeights w = random_weights(rng, N, kStateDim, kInputDim);
    // Keep the input weights in a range where central differences are well conditioned.
    for (auto& R : w.R) R = R.cwiseMax(1e-3);
    const VectorXd x0 = rng.normal(kStateDim), Xd = rng.normal(kStateDim * N);
    const VectorXd Ud = rng.normal(kInputDim * N), U = rng.normal(kInputDim * N);
    const QuadraticCost c = build_cost(pred, w, x0, Xd, Ud);
    const VectorXd g = c.P * U + c.q;
    VectorXd g_fd(U.size());
    for (Eigen::Index i = 0; i < U.size(); ++i) {
      VectorXd up = U, dn = U;
      up[i] += h;
      dn[i] -= h;
      g_fd[i] = (stage_objective(d, w, x0, Xd, up, Ud) - stage_objective(d, w, x0, Xd, dn, Ud)) / (2.0 * h);
    }
    worst = std::max(worst, (g - g_fd).norm() / std::max(1.0, g.norm()));
  }
  return finish(4, "cost gradient matches finite differences", worst <= 1e-5,
                std::to_string(b.reps_gradient) + " instances, max relative error " + sci(worst) +
                    " (tol 1e-5)",
                timer);
}

// 5
CriterionResult check_closed_loop_constraints(const Budget& b) {
  Timer timer;
  Scenario sc = resolve_scenario("trot:dual");
  sc.seed = b.seed;
  sc.duration = 10.0;
  sc.profile = CommandProfile::constant(Vec3(0.3, 0.0, 0.0));
  long forces = 0, forces_ok = 0, planned = 0, planned_ok = 0, steps = 0, steps_ok = 0, pins = 0, pins_ok = 0, ticks = 0;
  double worst_f = 0.0, worst_p = 0.0, worst_pin = 0.0;
  RunOptions opt;
  opt.keep_problems = true;
  opt.on_tick = [&](const TickHook& hk) {
    ++ticks;
    const ControlCommand& cmd = hk.command;
    const RobotParams& params = sc.params;
    const double mu = cmd.grf_problem ? cmd.grf_problem->mu : params.mu_mpc;
    const PyramidRows pyr = pyramid_rows(mu, fz_max(params));
    for (int leg = 0; leg < kNumLegs; ++leg) {
      if (!cmd.schedule.contact[0][leg]) continue;
      const double v = pyr.max_violation(cmd.forces[leg]);
      worst_f = std::max(worst_f, v);
      ++forces;
      forces_ok += v <= 1e-6 ? 1 : 0;
    }
    // The rest of the planned stance blocks obey the same pyramid.
    for (int k = 1; k < cmd.schedule.horizon() && cmd.U_f.size() > 0; ++k) {
      for (int leg = 0; leg < kNumLegs; ++leg) {
        if (!cmd.schedule.contact[k][leg]) continue;
        const double v = pyr.max_violation(cmd.U_f.segment<3>(kInputDim * k + 3 * leg));
        worst_f = std::max(worst_f, v);
        ++planned;
        planned_ok += v <= 1e-6 ? 1 : 0;
      }
    }
    if (!cmd.footstep_problem) {
      // Fallback or baseline tick: judge the emitted targets against the bands at x0.
      const auto cp = cp_inequality(params, hk.measured);
      const auto ws = workspace_inequality(params, hk.measured);
      for (int leg = 0; leg < kNumLegs; ++leg) {
        if (cmd.schedule.contact[0][leg]) continue;
        const double v = std::max(cp[leg].max_violation(cmd.footsteps[leg]),
                                  ws[leg].max_violation(cmd.footsteps[leg]));
        worst_p = std::max(worst_p, v);
        ++steps;
        steps_ok += v <= 1e-6 ? 1 : 0;
      }
      return;
    }
    const FootstepProblem& fp = *cmd.footstep_problem;
    const VectorXd viol = fp.qp.G * cmd.U_p - fp.qp.h;
    for (std::size_t gi = 0; gi < fp.groups.size(); ++gi) {
      const double v = viol.segment<8>(8 * static_cast<Eigen::Index>(gi)).maxCoeff();
      worst_p = std::max(worst_p, v);
      ++steps;
      steps_ok += v <= 1e-6 ? 1 : 0;
    }
    for (int k = 0; k < fp.schedule.horizon(); ++k) {
      for (int leg = 0; leg < kNumLegs; ++leg) {
        if (!fp.pinned[k][leg]) continue;
        const double e = (cmd.U_p.segment<3>(kInputDim * k + 3 * leg) - hk.feet[leg]).cwiseAbs().maxCoeff();
        worst_pin = std::max(worst_pin, e);
        ++pins;
        pins_ok += e <= 1e-8 ? 1 : 0;
      }
    }
  };
  const RunResult r = run_scenario(sc, opt);
  const bool pass = !r.metrics.fell && forces > 0 && steps > 0 && pins > 0 && forces_ok == forces &&
                    planned_ok == planned &&
                    steps_ok == steps && pins_ok == pins;
  std::ostringstream d;
  d << ticks << " ticks" << (r.metrics.fell ? " (fell)" : "") << "; pyramid " << forces_ok << "/"
    << forces << " emitted, " << planned_ok << "/" << planned << " planned (max " << sci(worst_f) << ", tol 1e-6); footstep band " << steps_ok << "/" << steps
    << " (max " << sci(worst_p) << ", tol 1e-6); stance pins " << pins_ok << "/" << pins << " (max "
    << sci(worst_pin) << ", tol 1e-8)";
  return finish(5, "closed-loop constraint satisfaction", pass, d.str(), timer);
}

// 6
CriterionResult check_hover_fixed_point(const Budget&) {
  Timer timer;
  const RobotParams params = go1_params();
  const ControllerConfig cfg = ControllerConfig::with_gait(GaitConfig::stand(), params);
  const FootPositions feet = nominal_feet(params);
  BodyState x0;
  x0.p = Vec3(0.0, 0.0, params.nominal_height);
  const DualMpcState ctx0 = DualMpcState::initial(params, feet);
  const TickResult a = tick(ctx0, cfg, 0.0, x0, x0, feet);
  const TickResult b = tick(a.state, cfg, 0.05, x0, x0, feet);
  const double share = params.mass * params.gravity.norm() / kNumLegs;
  double fz_err = 0.0, foot_err = 0.0, repeat = 0.0;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    fz_err = std::max(fz_err, std::abs(a.command.forces[leg].z() - share) / share);
    foot_err = std::max(foot_err, (a.command.footsteps[leg] - feet[leg]).cwiseAbs().maxCoeff());
    repeat = std::max({repeat, (a.command.forces[leg] - b.command.forces[leg]).cwiseAbs().maxCoeff(),
                       (a.command.footsteps[leg] - b.command.footsteps[leg]).cwiseAbs().maxCoeff()});
  }
  const bool pass = fz_err <= 0.01 && foot_err <= 1e-8 && repeat <= 1e-8 && !a.command.any_fallback();
  return finish(6, "hover fixed point", pass,
                "max |f_z - mg/4|/(mg/4) " + sci(fz_err) + " (tol 1%), footstep error " + sci(foot_err) +
                    " m (tol 1e-8), tick-to-tick change " + sci(repeat) + " (tol 1e-8)",
                timer);
}

// 7
CriterionResult check_asym_friction(const Budget& b) {
  Timer timer;
  int roll = 0, pitch = 0, ratio = 0, upright = 0;
  std::ostringstream d;
  for (int i = 0; i < b.seeds; ++i) {
    const std::uint64_t seed = static_cast<std::uint64_t>(i + 1);
    const MetricsReport m = run_scenario(with_seed("asym_friction:dual", seed)).metrics;
    const MetricsReport base = run_scenario(with_seed("asym_friction:baseline", seed)).metrics;
    upright += !m.fell && !base.fell ? 1 : 0;
    roll += m.mse[3] < base.mse[3] ? 1 : 0;
    pitch += m.mse[4] < base.mse[4] ? 1 : 0;
    bool all_legs = true;
    for (int leg = 0; leg < kNumLegs; ++leg) all_legs = all_legs && m.force_ratio[leg] <= base.force_ratio[leg];
    ratio += all_legs ? 1 : 0;
    if (i == 0) {
      d << " [seed 1: roll " << sci(m.mse[3]) << " vs " << sci(base.mse[3]) << ", pitch " << sci(m.mse[4])
        << " vs " << sci(base.mse[4]) << ", ratio";
      for (int leg = 0; leg < kNumLegs; ++leg) d << ' ' << sci(m.force_ratio[leg]) << '/' << sci(base.force_ratio[leg]);
      d << ']';
    }
  }
  const double sec = timer.seconds();
  const bool pass = roll == b.seeds && pitch == b.seeds && ratio == b.seeds && sec < 120.0;
  std::ostringstream head;
  head << "dual better on roll MSE " << roll << "/" << b.seeds << ", pitch MSE " << pitch << "/" << b.seeds
       << ", force ratio all legs " << ratio << "/" << b.seeds << " (need all), both upright " << upright
       << "/" << b.seeds << ", " << sci(sec) << " s (limit 120 s)";
  return finish(7, "asym_friction direction", pass, head.str() + d.str(), timer);
}

// 8
CriterionResult check_wrench(const Budget& b) {
  Timer timer;
  int agree = 0, min_wins = MetricsReport::kTracked, dual_fell = 0, base_fell = 0;
  for (int i = 0; i < b.seeds; ++i) {
    const std::uint64_t seed = static_cast<std::uint64_t>(i + 1);
    const MetricsReport m = run_scenario(with_seed("wrench:dual", seed)).metrics;
    const MetricsReport base = run_scenario(with_seed("wrench:baseline", seed)).metrics;
    dual_fell += m.fell ? 1 : 0;
    base_fell += base.fell ? 1 : 0;
    int wins = 0;
    for (int k = 0; k < MetricsReport::kTracked; ++k) wins += m.error_std[k] < base.error_std[k] ? 1 : 0;
    min_wins = std::min(min_wins, wins);
    agree += wins >= 7 ? 1 : 0;
  }
  std::ostringstream d;
  d << agree << "/" << b.seeds << " seeds with >= 7/9 lower error std (fewest wins " << min_wins
    << "), falls dual " << dual_fell << " baseline " << base_fell;
  return finish(8, "wrench direction", agree == b.seeds, d.str(), timer);
}

// 9
CriterionResult check_footstep_brute_force(const Budget& b) {
  Timer timer;
  Rng rng(b.seed + 9);
  const RobotParams params = go1_params();
  const HorizonWeights w = HorizonWeights::footstep_default(2);
  const HeuristicGains gains;
  int done = 0, ok = 0, attempts = 0;
  double worst = -std::numeric_limits<double>::infinity();
  QpSolver solver;
  while (done < b.brute_force_states && attempts < 50 * b.brute_force_states) {
    ++attempts;
    const BodyState x0 = random_body_state(rng);
    BodyState xd = x0;
    xd.p_dot = x0.p_dot + rng.box(Vec3(0.1, 0.1, 0.0));
    xd.theta.head<2>().setZero();
    xd.omega.setZero();
    const int swing = rng.integer(0, kNumLegs - 1);
    std::vector<ContactRow> table(2, ContactRow{true, true, true, true});
    table[0][swing] = false;
    table[1][swing] = rng.uniform(0.0, 1.0) < 0.5;
    const GaitSchedule sched = GaitSchedule::from_table(table);
    LegForces f;
    for (int leg = 0; leg < kNumLegs; ++leg) f[leg] = Vec3(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(20, 60));
    const FootPositions feet = nominal_feet(params, x0.p, x0.theta.z());
    const LegVectors targets = heuristic_footsteps(params, gains, x0, xd, 0.25);
    const FootstepProblem fp = build_footstep_problem(params, w, sched, 0.025, x0, xd, f, feet, targets);
    FootstepSolution sol;
    try {
      sol = solve_footstep(fp, solver);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Infeasible) continue;  // empty band for this draw
      throw;
    }
    const double grid = footstep_grid_minimum(fp, 0.002);
    if (!std::isfinite(grid)) continue;
    ++done;
    const double gap = fp.qp.objective(sol.U_p) - grid;
    worst = std::max(worst, gap);
    ok += gap <= 1e-4 ? 1 : 0;
  }
  const bool pass = done == b.brute_force_states && ok == done;
  return finish(9, "footstep QP beats 2 mm grid", pass,
                std::to_string(ok) + "/" + std::to_string(done) + " states, max (QP - grid) " + sci(worst) +
                    " (tol 1e-4), N = 2, one swing leg",
                timer);
}

// 10
CriterionResult check_timing(const Budget& b) {
  Timer timer;
  const BenchReport r = bench_scenario(resolve_scenario("trot:dual"), b.bench_reps);
  const bool pass = r.horizon == 10 && r.tick.mean <= 5.0 && r.tick.max <= 20.0;
  return finish(10, "Dual-MPC tick time", pass,
                std::to_string(r.repetitions) + " ticks, N = " + std::to_string(r.horizon) + ", mean " +
                    sci(r.tick.mean) + " ms (limit 5), max " + sci(r.tick.max) + " ms (limit 20); grf " +
                    sci(r.grf.mean) + " ms, footstep " + sci(r.footstep.mean) + " ms",
                timer);
}

// 11
CriterionResult check_sim_order(const Budget&) {
  Timer timer;
  const VectorXd ref = reference_hover_trajectory(1.5625e-5);
  const double dts[] = {2e-3, 1e-3, 5e-4, 2.5e-4};
  Eigen::Vector4d lx, ly;
  for (int i = 0; i < 4; ++i) {
    lx[i] = std::log(dts[i]);
    ly[i] = std::log((reference_hover_trajectory(dts[i]) - ref).norm());
  }
  const double mx = lx.mean(), my = ly.mean();
  const double slope = ((lx.array() - mx) * (ly.array() - my)).sum() / (lx.array() - mx).square().sum();
  std::ostringstream d;
  d << "log-log slope " << sci(slope) << " (range [0.8, 1.2]); errors";
  for (int i = 0; i < 4; ++i) d << ' ' << sci(std::exp(ly[i]));
  d << " at dt 2, 1, 0.5, 0.25 ms";
  return finish(11, "simulator first-order convergence", slope >= 0.8 && slope <= 1.2, d.str(), timer);
}

// 12
CriterionResult check_determinism(const Budget& b) {
  Timer timer;
  int same = 0, total = 0;
  std::string diff;
  for (const std::string& name : preset_names()) {
    for (const char* arm : {":dual", ":baseline"}) {
      const Scenario s = with_seed(name + arm, b.seed);
      const std::string a = trace_csv(run_scenario(s).samples);
      const std::string c = trace_csv(run_scenario(s).samples);
      ++total;
      if (a == c) ++same;
      else diff += " " + name + arm;
    }
  }
  return finish(12, "deterministic traces", same == total,
                std::to_string(same) + "/" + std::to_string(total) + " preset arms byte-identical" +
                    (diff.empty() ? "" : ", differing:" + diff),
                timer);
}

CriterionResult run_criterion(int id, const Budget& b) {
  switch (id) {
    case 1: return check_cost_hessian(b);
    case 2: return check_qp_oracle(b);
    case 3: return check_condensation(b);
    case 4: return check_cost_gradient(b);
    case 5: return check_closed_loop_constraints(b);
    case 6: return check_hover_fixed_point(b);
    case 7: return check_asym_friction(b);
    case 8: return check_wrench(b);
    case 9: return check_footstep_brute_force(b);
    case 10: return check_timing(b);
    case 11: return check_sim_order(b);
    case 12: return check_determinism(b);
    default: throw Error(ErrorCode::InvalidArgument, "no acceptance criterion " + std::to_string(id));
  }
}

std::vector<CriterionResult> run_all(const std::vector<int>& ids, const Budget& b) {
  std::vector<int> list = ids;
  if (list.empty()) {
    for (int i = 1; i <= kNumCriteria; ++i) list.push_back(i);
  }
  std::vector<CriterionResult> out;
  for (int id : list) {
    try {
      out.push_back(run_criterion(id, b));
    } catch (const Error& e) {
      out.push_back({id, "criterion " + std::to_string(id), false, std::string("error: ") + e.what(), 0.0});
    }
  }
  return out;
}

std::string format(const CriterionResult& r) {
  char head[64];
  std::snprintf(head, sizeof head, "[%s] C%02d ", r.pass ? "PASS" : "FAIL", r.id);
  char tail[32];
  std::snprintf(tail, sizeof tail, " (%.2f s)", r.seconds);
  return head + r.name + ": " + r.detail + tail;
}

}  // namespace dualmpc::verify
