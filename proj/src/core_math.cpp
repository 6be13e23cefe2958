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

#include "dualmpc/core_math.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dualmpc/error.hpp"

namespace dualmpc {

Mat3 hat(const Vec3& a) {
  Mat3 S;
  S << 0.0, -a.z(), a.y(),
       a.z(), 0.0, -a.x(),
       -a.y(), a.x(), 0.0;
  return S;
}

Mat3 rot_x(double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  Mat3 R;
  R << 1.0, 0.0, 0.0,
       0.0, c, -s,
       0.0, s, c;
  return R;
}

Mat3 rot_y(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Mat3 R;
  R << c, 0.0, s,
       0.0, 1.0, 0.0,
       -s, 0.0, c;
  return R;
}

Mat3 rot_z(double psi) {
  const double c = std::cos(psi), s = std::sin(psi);
  Mat3 R;
  R << c, -s, 0.0,
       s, c, 0.0,
       0.0, 0.0, 1.0;
  return R;
}

Mat3 rot_zyx(const EulerAngles& theta, double eps) {
  if (!theta.allFinite()) throw Error(ErrorCode::NonFinite, "rot_zyx: non-finite angles");
  if (std::abs(theta.y()) >= std::numbers::pi / 2.0 - eps) {
    throw Error(ErrorCode::DegenerateOrientation,
                "pitch " + std::to_string(theta.y()) + " too close to +-pi/2");
  }
  return rot_z(theta.z()) * rot_y(theta.y()) * rot_x(theta.x());
}

EulerAngles euler_zyx(const Mat3& R) {
  const double pitch = -std::asin(std::clamp(R(2, 0), -1.0, 1.0));
  const double roll = std::atan2(R(2, 1), R(2, 2));
  const double yaw = std::atan2(R(1, 0), R(0, 0));
  return {roll, pitch, yaw};
}

Vec3 perp(const Vec3& a) { return {a.y(), -a.x(), 0.0}; }

MatrixXd expm(const MatrixXd& M) {
  const Eigen::Index n = M.rows();
  const double norm = M.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const MatrixXd X = M / std::ldexp(1.0, squarings);

  MatrixXd result = MatrixXd::Identity(n, n);
  MatrixXd term = MatrixXd::Identity(n, n);
  for (int k = 1; k <= 30; ++k) {
    term = term * X / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() <= 1e-18 * result.cwiseAbs().maxCoeff()) break;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

StateMatrixPair discretize_zoh(const StateMatrixPair& cont, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "discretize_zoh: dt must be positive");
  if (!cont.A.allFinite() || !cont.B.allFinite() || !std::isfinite(dt)) {
    throw Error(ErrorCode::NonFinite, "discretize_zoh: non-finite input");
  }
  const Eigen::Index n = cont.A.rows(), m = cont.B.cols();
  if (cont.A.cols() != n || cont.B.rows() != n) {
    throw Error(ErrorCode::InvalidArgument, "discretize_zoh: inconsistent dimensions");
  }
  MatrixXd aug = MatrixXd::Zero(n + m, n + m);
  aug.topLeftCorner(n, n) = cont.A * dt;
  aug.topRightCorner(n, m) = cont.B * dt;
  const MatrixXd e = expm(aug);
  return {e.topLeftCorner(n, n), e.topRightCorner(n, m)};
}

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * std::numbers::pi);
  if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

}  // namespace dualmpc
