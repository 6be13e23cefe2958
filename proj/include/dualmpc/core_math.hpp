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

#include <Eigen/Dense>

namespace dualmpc {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Z-Y-X Euler angles stored as (roll, pitch, yaw).
using EulerAngles = Eigen::Vector3d;

/// Default margin kept between |pitch| and pi/2.
inline constexpr double kGimbalEpsilon = 0.05;

/// Continuous or discrete pair x' = A x + B u.
struct StateMatrixPair {
  MatrixXd A;
  MatrixXd B;

  Eigen::Index n() const { return A.rows(); }
  Eigen::Index m() const { return B.cols(); }
};

/// Skew-symmetric matrix with hat(a) * b == a.cross(b).
Mat3 hat(const Vec3& a);

Mat3 rot_x(double phi);
Mat3 rot_y(double theta);
Mat3 rot_z(double psi);

/// Body-to-world rotation R_z(yaw) R_y(pitch) R_x(roll).
/// Throws DegenerateOrientation when |pitch| >= pi/2 - eps.
Mat3 rot_zyx(const EulerAngles& theta, double eps = kGimbalEpsilon);

/// Inverse of rot_zyx for proper rotations; pitch is returned in [-pi/2, pi/2].
EulerAngles euler_zyx(const Mat3& R);

/// -e_z x a = (a_y, -a_x, 0).
Vec3 perp(const Vec3& a);

/// General dense matrix exponential (scaling and squaring, Taylor core).
MatrixXd expm(const MatrixXd& M);

/// Zero-order-hold discretization. Both A_d and B_d come out of a single
/// exponential of the augmented block [[A, B], [0, 0]] * dt.
StateMatrixPair discretize_zoh(const StateMatrixPair& cont, double dt);

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

}  // namespace dualmpc
