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

#include <filesystem>
#include <optional>
#include <string>

#include "dualmpc/core_math.hpp"

namespace dualmpc {

/// min 1/2 u'Pu + q'u  s.t.  E u = c,  G u <= h.
struct CondensedQP {
  MatrixXd P;
  VectorXd q;
  MatrixXd E;
  VectorXd c;
  MatrixXd G;
  VectorXd h;

  Eigen::Index num_vars() const { return q.size(); }
  Eigen::Index num_eq() const { return c.size(); }
  Eigen::Index num_ineq() const { return h.size(); }

  double objective(const VectorXd& u) const { return 0.5 * u.dot(P * u) + q.dot(u); }

  /// Dimension, finiteness and symmetry checks.
  void validate() const;

  /// Creates a problem with n variables and no constraints (E, G with zero rows).
  static CondensedQP unconstrained(const MatrixXd& P, const VectorXd& q);
};

struct QPSolution {
  VectorXd u_star;
  VectorXd eq_duals;
  VectorXd ineq_duals;
  double kkt_residual = 0.0;
  int iterations = 0;
  double solve_time = 0.0;  // seconds
  double objective = 0.0;
  bool polished = false;
};

enum class EqualityHandling {
  Auto,       // eliminate when p >= n / 4
  Eliminate,  // null-space elimination before the interior-point iterations
  KeepInKkt,  // equalities stay in the Newton system
};

struct QpOptions {
  double tol = 1e-6;
  int max_iterations = 50;
  EqualityHandling equalities = EqualityHandling::Auto;
  /// Re-solve the identified active set exactly after the interior-point phase.
  bool polish = true;
  /// Start from the previous solution of this instance when dimensions match.
  bool warm_start = false;
};

/// Dense primal-dual interior-point solver (Mehrotra predictor-corrector).
/// Holds scratch space and the warm-start point; use one instance per thread.
class QpSolver {
public:
  explicit QpSolver(QpOptions options = {});

  QPSolution solve(const CondensedQP& problem);
  QPSolution solve(const CondensedQP& problem, const VectorXd& initial_guess);

  const QpOptions& options() const { return options_; }
  QpOptions& options() { return options_; }

private:
  QPSolution solve_impl(const CondensedQP& problem, const VectorXd* initial_guess);

  QpOptions options_;
  VectorXd previous_;
};

/// Convenience wrapper building a throwaway solver.
QPSolution solve(const CondensedQP& problem, double tol = 1e-6);

/// True iff a Cholesky factorization succeeds with strictly positive pivots.
/// Throws AsymmetricInput when |P - P'| exceeds 1e-9 anywhere.
bool check_positive_definite(const MatrixXd& P);

/// max of stationarity, primal residuals, dual sign violation and
/// complementarity, all in the infinity norm.
double kkt_residual(const CondensedQP& problem, const VectorXd& u, const VectorXd& eq_duals,
                    const VectorXd& ineq_duals);

/// Writes <stem>_P.csv, _q.csv, _E.csv, _c.csv, _G.csv, _h.csv into dir.
void dump_csv(const CondensedQP& problem, const std::filesystem::path& dir, const std::string& stem);

/// Reads a bundle written by dump_csv.
CondensedQP load_csv(const std::filesystem::path& dir, const std::string& stem);

}  // namespace dualmpc
