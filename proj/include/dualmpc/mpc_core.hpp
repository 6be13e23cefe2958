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

#include <vector>

#include "dualmpc/model.hpp"

namespace dualmpc {

/// Diagonal stage weights, one entry per horizon step. The last step doubles
/// as the terminal weight.
struct HorizonWeights {
  std::vector<VectorXd> Q;  // kStateDim entries each, >= 0
  std::vector<VectorXd> R;  // kInputDim entries each, > 0

  int horizon() const { return static_cast<int>(Q.size()); }

  static HorizonWeights constant(int N, const VectorXd& Q, const VectorXd& R);
  /// Default state weights with input weight 1e-3 per axis.
  static HorizonWeights footstep_default(int N);
  /// Default state weights with input weight 1e-6 per axis.
  static HorizonWeights grf_default(int N);

  void validate(Eigen::Index n = kStateDim, Eigen::Index m = kInputDim) const;
};

/// Position (10, 10, 50), velocity (10, 10, 10), angles (400, 400, 100),
/// rates (4, 4, 4), constant state 0.
VectorXd default_state_weights();

/// X = A_qp x0 + B_qp U over N steps (X excludes x0).
struct CondensedPrediction {
  MatrixXd A_qp;  // nN x n
  MatrixXd B_qp;  // nN x mN, block lower triangular
  int N = 0;

  Eigen::Index n() const { return A_qp.cols(); }
  Eigen::Index m() const { return N > 0 ? B_qp.cols() / N : 0; }
};

CondensedPrediction condense(const StateMatrixPair& discrete, int N);

struct QuadraticCost {
  MatrixXd P;
  VectorXd q;
};

/// P = 2 (B'QB + R), q = 2 (B'Q (A x0 - Xd) - R Ud) with block-diagonal Q, R.
QuadraticCost build_cost(const CondensedPrediction& pred, const HorizonWeights& weights,
                         const VectorXd& x0, const VectorXd& X_desired,
                         const VectorXd& U_desired);
QuadraticCost build_cost(const CondensedPrediction& pred, const HorizonWeights& weights,
                         const BodyState& x0, const VectorXd& X_desired,
                         const VectorXd& U_desired);

/// Stacked desired states x^d_1..x^d_N: position advances with the desired
/// world velocity, yaw with the desired yaw rate; everything else is held.
VectorXd reference_trajectory(const BodyState& desired, int N, double dt);

}  // namespace dualmpc
