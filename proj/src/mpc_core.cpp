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

#include "dualmpc/mpc_core.hpp"

#include <string>

#include "dualmpc/error.hpp"

namespace dualmpc {

VectorXd default_state_weights() {
  VectorXd q(kStateDim);
  q << 10, 10, 50, 10, 10, 10, 400, 400, 100, 4, 4, 4, 0;
  return q;
}

HorizonWeights HorizonWeights::constant(int N, const VectorXd& Q, const VectorXd& R) {
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "HorizonWeights: N must be >= 1");
  HorizonWeights w;
  w.Q.assign(N, Q);
  w.R.assign(N, R);
  return w;
}

HorizonWeights HorizonWeights::footstep_default(int N) {
  return constant(N, default_state_weights(), VectorXd::Constant(kInputDim, 1e-3));
}

HorizonWeights HorizonWeights::grf_default(int N) {
  return constant(N, default_state_weights(), VectorXd::Constant(kInputDim, 1e-6));
}

void HorizonWeights::validate(Eigen::Index n, Eigen::Index m) const {
  if (Q.empty() || Q.size() != R.size()) {
    throw Error(ErrorCode::InvalidArgument, "HorizonWeights: Q and R must have N >= 1 entries");
  }
  for (std::size_t k = 0; k < Q.size(); ++k) {
    if (Q[k].size() != n || R[k].size() != m) {
      throw Error(ErrorCode::InvalidArgument,
                  "HorizonWeights: wrong weight size at step " + std::to_string(k));
    }
    if (!Q[k].allFinite() || !R[k].allFinite()) {
      throw Error(ErrorCode::NonFinite, "HorizonWeights: non-finite weight");
    }
    if ((Q[k].array() < 0.0).any()) {
      throw Error(ErrorCode::InvalidArgument, "HorizonWeights: Q entries must be >= 0");
    }
    if (!(R[k].array() > 0.0).all()) {
      throw Error(ErrorCode::InvalidArgument, "HorizonWeights: R entries must be > 0");
    }
  }
}

CondensedPrediction condense(const StateMatrixPair& d, int N) {
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "condense: N must be >= 1");
  const Eigen::Index n = d.n(), m = d.m();
  if (d.A.cols() != n || d.B.rows() != n) {
    throw Error(ErrorCode::InvalidArgument, "condense: inconsistent A/B dimensions");
  }
  CondensedPrediction out;
  out.N = N;
  out.A_qp.resize(n * N, n);
  out.B_qp = MatrixXd::Zero(n * N, m * N);

  // powers[k] = A^k B, reused along each block diagonal.
  std::vector<MatrixXd> AkB(N);
  AkB[0] = d.B;
  MatrixXd Ak = d.A;
  out.A_qp.topRows(n) = Ak;
  for (int k = 1; k < N; ++k) {
    AkB[k] = d.A * AkB[k - 1];
    Ak = d.A * Ak;
    out.A_qp.middleRows(n * k, n) = Ak;
  }
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j <= i; ++j) out.B_qp.block(n * i, m * j, n, m) = AkB[i - j];
  }
  return out;
}

QuadraticCost build_cost(const CondensedPrediction& pred, const HorizonWeights& w,
                         const VectorXd& x0, const VectorXd& Xd, const VectorXd& Ud) {
  const Eigen::Index n = pred.n(), m = pred.m();
  const int N = pred.N;
  if (w.horizon() != N) throw Error(ErrorCode::InvalidArgument, "build_cost: horizon mismatch");
  w.validate(n, m);
  if (x0.size() != n || Xd.size() != n * N || Ud.size() != m * N) {
    throw Error(ErrorCode::InvalidArgument, "build_cost: reference dimensions do not match");
  }
  VectorXd Qd(n * N), Rd(m * N);
  for (int k = 0; k < N; ++k) {
    Qd.segment(n * k, n) = w.Q[k];
    Rd.segment(m * k, m) = w.R[k];
  }
  const MatrixXd QB = Qd.asDiagonal() * pred.B_qp;
  QuadraticCost c;
  // Block (i, j) of B'QB only sees the rows below block max(i, j).
  c.P.resize(m * N, m * N);
  for (int j = 0; j < N; ++j) {
    const Eigen::Index rows = n * (N - j);
    for (int i = 0; i <= j; ++i) {
      c.P.block(m * i, m * j, m, m).noalias() =
          2.0 * pred.B_qp.block(n * j, m * i, rows, m).transpose() *
          QB.block(n * j, m * j, rows, m);
      if (i != j) c.P.block(m * j, m * i, m, m) = c.P.block(m * i, m * j, m, m).transpose();
    }
  }
  c.P.diagonal() += 2.0 * Rd;
  const VectorXd err = pred.A_qp * x0 - Xd;
  c.q = 2.0 * (QB.transpose() * err - Rd.cwiseProduct(Ud));
  return c;
}

QuadraticCost build_cost(const CondensedPrediction& pred, const HorizonWeights& w,
                         const BodyState& x0, const VectorXd& Xd, const VectorXd& Ud) {
  return build_cost(pred, w, VectorXd(x0.to_vector()), Xd, Ud);
}

VectorXd reference_trajectory(const BodyState& desired, int N, double dt) {
  if (N < 1 || !(dt > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "reference_trajectory: need N >= 1 and dt > 0");
  }
  VectorXd X(kStateDim * N);
  for (int k = 0; k < N; ++k) {
    BodyState s = desired;
    const double tau = dt * (k + 1);
    s.p.x() += tau * desired.p_dot.x();
    s.p.y() += tau * desired.p_dot.y();
    s.theta.z() += tau * desired.omega.z();
    X.segment(kStateDim * k, kStateDim) = s.to_vector();
  }
  return X;
}

}  // namespace dualmpc
