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

#include "dualmpc/qp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "dualmpc/error.hpp"

namespace dualmpc {
namespace {

constexpr double kSymmetryTol = 1e-9;
constexpr double kDualBlowup = 1e10;

double inf_norm(const VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

// Inequality-form problem handed to the interior-point core. E/c are empty
// when equalities were eliminated beforehand.
struct Reduced {
  MatrixXd H;
  VectorXd g;
  MatrixXd E;
  VectorXd c;
  MatrixXd G;
  VectorXd h;
};

// Column indices of the nonzeros of each row of G, used when G is sparse
// enough that accumulating G' W G row by row beats the dense product.
struct RowPattern {
  std::vector<std::vector<Eigen::Index>> cols;
  bool sparse = false;

  explicit RowPattern(const MatrixXd& G) {
    if (G.size() == 0) return;
    cols.resize(G.rows());
    Eigen::Index nnz = 0;
    for (Eigen::Index i = 0; i < G.rows(); ++i) {
      for (Eigen::Index j = 0; j < G.cols(); ++j) {
        if (G(i, j) != 0.0) cols[i].push_back(j);
      }
      nnz += static_cast<Eigen::Index>(cols[i].size());
    }
    sparse = 4 * nnz < G.size();
  }
};

struct IpmPoint {
  VectorXd x, y, z, s;
  int iterations = 0;
};

enum class IpmStatus { Converged, MaxIterations, Infeasible };

class NewtonSystem {
public:
  // Factors K = H + G' W G and, with equalities, the Schur complement E K^-1 E'.
  explicit NewtonSystem(const Reduced& r) : pattern_(r.G) {}

  void factor(const Reduced& r, const VectorXd& w) {
    K_ = r.H;
    if (pattern_.sparse) {
      for (Eigen::Index i = 0; i < r.G.rows(); ++i) {
        for (Eigen::Index a : pattern_.cols[i]) {
          const double wa = w[i] * r.G(i, a);
          for (Eigen::Index b : pattern_.cols[i]) K_(a, b) += wa * r.G(i, b);
        }
      }
    } else if (r.G.rows() > 0) {
      K_.noalias() += r.G.transpose() * w.asDiagonal() * r.G;
    }
    llt_.compute(K_);
    // Huge barrier weights late in the solve can cost K its numerical
    // definiteness; a scaled diagonal shift restores it.
    const double scale = std::max(1.0, K_.diagonal().cwiseAbs().maxCoeff());
    for (double shift = 1e-14; llt_.info() != Eigen::Success; shift *= 100.0) {
      if (shift > 1e-6) throw Error(ErrorCode::MaxIterations, "QP: Newton system lost definiteness");
      K_.diagonal().array() += shift * scale;
      llt_.compute(K_);
    }
    if (r.E.rows() > 0) {
      KinvEt_ = llt_.solve(r.E.transpose());
      schur_.compute(r.E * KinvEt_);
      if (schur_.info() != Eigen::Success) {
        throw Error(ErrorCode::RankDeficientEqualities, "equality Schur complement is singular");
      }
    }
  }

  // Solves [K E'; E 0] [dx; dy] = [r1; r2].
  void solve(const Reduced& r, const VectorXd& r1, const VectorXd& r2, VectorXd& dx,
             VectorXd& dy) const {
    VectorXd Kr1 = llt_.solve(r1);
    if (r.E.rows() > 0) {
      dy = schur_.solve(r.E * Kr1 - r2);
      dx = Kr1 - KinvEt_ * dy;
    } else {
      dy.resize(0);
      dx = std::move(Kr1);
    }
  }

private:
  RowPattern pattern_;
  MatrixXd K_;
  Eigen::LLT<MatrixXd> llt_;
  MatrixXd KinvEt_;
  Eigen::LLT<MatrixXd> schur_;
};

double max_step(const VectorXd& v, const VectorXd& dv) {
  double alpha = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (dv[i] < 0.0) alpha = std::min(alpha, -v[i] / dv[i]);
  }
  return alpha;
}

void shift_positive(VectorXd& v) {
  if (v.size() == 0) return;
  const double worst = -v.minCoeff();
  if (worst >= -1e-8) v.array() += 1.0 + worst;
}

IpmStatus interior_point(const Reduced& r, const VectorXd* x0, double tol, int max_iter,
                         IpmPoint& pt) {
  const Eigen::Index n = r.H.rows(), p = r.E.rows(), m = r.G.rows();
  NewtonSystem newton(r);

  // Initial point: minimise 1/2 x'Hx + g'x + 1/2 |Gx - h|^2 subject to Ex = c,
  // then push s and z into the positive orthant.
  {
    const VectorXd ones = VectorXd::Ones(m);
    newton.factor(r, ones);
    VectorXd r1 = -r.g;
    if (m > 0) r1.noalias() += r.G.transpose() * r.h;
    newton.solve(r, r1, r.c, pt.x, pt.y);
    if (x0 != nullptr && x0->size() == n) {
      pt.x = *x0;
      pt.y = VectorXd::Zero(p);
    }
    pt.s = r.h - r.G * pt.x;
    pt.z = -pt.s;
    shift_positive(pt.s);
    if (x0 != nullptr && x0->size() == n) pt.z = VectorXd::Ones(m);
    shift_positive(pt.z);
  }

  VectorXd dx, dy, dz, ds, dx_a, dy_a, dz_a, ds_a;
  bool primal_reached = false;
  for (int it = 0; it <= max_iter; ++it) {
    pt.iterations = it;
    VectorXd r_d = r.H * pt.x + r.g;
    if (p > 0) r_d.noalias() += r.E.transpose() * pt.y;
    if (m > 0) r_d.noalias() += r.G.transpose() * pt.z;
    const VectorXd r_e = p > 0 ? VectorXd(r.E * pt.x - r.c) : VectorXd();
    const VectorXd r_p = m > 0 ? VectorXd(r.G * pt.x + pt.s - r.h) : VectorXd();
    const VectorXd sz = pt.s.cwiseProduct(pt.z);
    const double mu = m > 0 ? sz.sum() / static_cast<double>(m) : 0.0;

    const double res_p = std::max(inf_norm(r_e), inf_norm(r_p));
    primal_reached = primal_reached || res_p <= tol;
    if (inf_norm(r_d) <= tol && res_p <= tol && inf_norm(sz) <= tol) return IpmStatus::Converged;
    if (it == max_iter) break;
    if (m > 0 && pt.z.maxCoeff() > kDualBlowup) return IpmStatus::Infeasible;

    const VectorXd w = pt.z.cwiseQuotient(pt.s);
    newton.factor(r, w);
    const VectorXd minus_re = p > 0 ? VectorXd(-r_e) : VectorXd();

    auto direction = [&](const VectorXd& r_c, VectorXd& ddx, VectorXd& ddy, VectorXd& ddz,
                         VectorXd& dds) {
      VectorXd r1 = -r_d;
      VectorXd aux;
      if (m > 0) {
        aux = w.cwiseProduct(r_p) - r_c.cwiseQuotient(pt.s);
        r1.noalias() -= r.G.transpose() * aux;
      }
      newton.solve(r, r1, minus_re, ddx, ddy);
      if (m > 0) {
        const VectorXd Gdx = r.G * ddx;
        ddz = w.cwiseProduct(Gdx + r_p) - r_c.cwiseQuotient(pt.s);
        dds = -r_p - Gdx;
      }
    };

    if (m == 0) {
      // Equality-constrained quadratic: one Newton step is exact.
      direction(VectorXd(), dx, dy, dz, ds);
      pt.x += dx;
      if (p > 0) pt.y += dy;
      continue;
    }

    // Predictor.
    direction(sz, dx_a, dy_a, dz_a, ds_a);
    const double alpha_a = std::min(max_step(pt.s, ds_a), max_step(pt.z, dz_a));
    const double mu_a =
        (pt.s + alpha_a * ds_a).dot(pt.z + alpha_a * dz_a) / static_cast<double>(m);
    const double sigma = std::pow(std::clamp(mu_a / mu, 0.0, 1.0), 3);

    // Corrector with centering.
    const VectorXd r_c = sz + ds_a.cwiseProduct(dz_a) - VectorXd::Constant(m, sigma * mu);
    direction(r_c, dx, dy, dz, ds);
    const double alpha = std::min(1.0, 0.99 * std::min(max_step(pt.s, ds), max_step(pt.z, dz)));

    pt.x += alpha * dx;
    if (p > 0) pt.y += alpha * dy;
    pt.z += alpha * dz;
    pt.s += alpha * ds;
  }
  return primal_reached ? IpmStatus::MaxIterations : IpmStatus::Infeasible;
}

// Equality-constrained solve with the rows in `active` held tight.
bool solve_on_active_set(const Reduced& r, const Eigen::LLT<MatrixXd>& llt,
                         const std::vector<Eigen::Index>& active, VectorXd& x,
                         VectorXd& lambda) {
  const Eigen::Index p = r.E.rows();
  const Eigen::Index na = static_cast<Eigen::Index>(active.size());
  const Eigen::Index nc = p + na;
  const VectorXd Hinvg = llt.solve(r.g);
  if (nc == 0) {
    x = -Hinvg;
    lambda.resize(0);
    return true;
  }
  MatrixXd C(nc, r.H.cols());
  VectorXd d(nc);
  if (p > 0) {
    C.topRows(p) = r.E;
    d.head(p) = r.c;
  }
  for (Eigen::Index k = 0; k < na; ++k) {
    C.row(p + k) = r.G.row(active[k]);
    d[p + k] = r.h[active[k]];
  }
  const MatrixXd HinvCt = llt.solve(C.transpose());
  Eigen::LDLT<MatrixXd> ldlt(C * HinvCt);
  if (ldlt.info() != Eigen::Success) return false;
  const VectorXd D = ldlt.vectorD();
  const double dmax = D.cwiseAbs().maxCoeff();
  if (!(D.minCoeff() > 1e-12 * std::max(dmax, 1.0))) return false;
  lambda = ldlt.solve(-C * Hinvg - d);
  x = -Hinvg - HinvCt * lambda;
  return true;
}

// Exact re-solve on the active set guessed by the interior-point iterate,
// corrected for a few rounds (add violated rows, drop negative multipliers).
// Returns false, leaving pt untouched, when no guess verifies.
bool polish(const Reduced& r, IpmPoint& pt, double tol) {
  constexpr int kRounds = 4;
  const Eigen::Index p = r.E.rows(), m = r.G.rows();
  Eigen::LLT<MatrixXd> llt(r.H);
  if (llt.info() != Eigen::Success) return false;

  std::vector<bool> in_set(m, false);
  for (Eigen::Index i = 0; i < m; ++i) in_set[i] = pt.z[i] > pt.s[i];

  const double scale = 1.0 + inf_norm(r.h);
  for (int round = 0; round < kRounds; ++round) {
    std::vector<Eigen::Index> active;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (in_set[i]) active.push_back(i);
    }
    VectorXd x, lambda;
    if (!solve_on_active_set(r, llt, active, x, lambda)) return false;

    const VectorXd s = r.h - r.G * x;
    const double lam_tol = 1e-9 * (1.0 + inf_norm(lambda));
    bool changed = false;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (!in_set[i] && s[i] < -1e-9 * scale) in_set[i] = changed = true;
    }
    for (std::size_t k = 0; k < active.size(); ++k) {
      if (lambda[p + static_cast<Eigen::Index>(k)] < -lam_tol) {
        in_set[active[k]] = false;
        changed = true;
      }
    }
    if (changed) continue;
    if (p > 0 && inf_norm(r.E * x - r.c) > 1e-9 * (1.0 + inf_norm(r.c))) return false;

    const double obj_ipm = 0.5 * pt.x.dot(r.H * pt.x) + r.g.dot(pt.x);
    const double obj_pol = 0.5 * x.dot(r.H * x) + r.g.dot(x);
    if (obj_pol > obj_ipm + tol * (1.0 + std::abs(obj_ipm))) return false;

    VectorXd z = VectorXd::Zero(m);
    for (std::size_t k = 0; k < active.size(); ++k) {
      z[active[k]] = std::max(lambda[p + static_cast<Eigen::Index>(k)], 0.0);
    }
    pt.x = std::move(x);
    pt.y = p > 0 ? VectorXd(lambda.head(p)) : VectorXd();
    pt.z = std::move(z);
    pt.s = s.cwiseMax(0.0);
    return true;
  }
  return false;
}

void write_matrix(const std::filesystem::path& path, const MatrixXd& M) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  f << std::setprecision(17);
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) f << (j ? "," : "") << M(i, j);
    f << '\n';
  }
}

MatrixXd read_matrix(const std::filesystem::path& path, Eigen::Index cols_if_empty) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::ConfigParse, "cannot read " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return MatrixXd(0, cols_if_empty);
  MatrixXd M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) {
      throw Error(ErrorCode::ConfigParse, path.string() + ": ragged rows");
    }
    for (std::size_t j = 0; j < rows[i].size(); ++j) M(i, j) = rows[i][j];
  }
  return M;
}


// Parametrisation u = u_p + Z x of {u : E u = c}. When every row either fixes
// one coordinate or equates two, Z is a 0/1 class map built by union-find;
// anything else goes through a column-pivoted QR of E'.
class NullSpace {
public:
  explicit NullSpace(const CondensedQP& pr) : u_p_(VectorXd::Zero(pr.num_vars())) {
    if (!try_classes(pr)) general(pr);
  }

  Reduced reduce(const CondensedQP& pr) const {
    Reduced red;
    const VectorXd grad_p = pr.P * u_p_ + pr.q;
    if (classes_) {
      const Eigen::Index n = pr.num_vars();
      red.H = MatrixXd::Zero(n_free_, n_free_);
      red.g = VectorXd::Zero(n_free_);
      red.G = MatrixXd::Zero(pr.num_ineq(), n_free_);
      for (Eigen::Index a = 0; a < n; ++a) {
        const Eigen::Index ca = cls_[a];
        if (ca < 0) continue;
        red.g[ca] += grad_p[a];
        red.G.col(ca) += pr.G.col(a);
        for (Eigen::Index b = 0; b < n; ++b) {
          if (cls_[b] >= 0) red.H(ca, cls_[b]) += pr.P(a, b);
        }
      }
    } else {
      red.H = Z_.transpose() * pr.P * Z_;
      red.H = 0.5 * (red.H + red.H.transpose());
      red.g = Z_.transpose() * grad_p;
      red.G = pr.G * Z_;
    }
    red.E = MatrixXd(0, red.H.rows());
    red.c = VectorXd(0);
    red.h = pr.h - pr.G * u_p_;
    return red;
  }

  VectorXd lift(const VectorXd& x) const {
    if (!classes_) return u_p_ + Z_ * x;
    VectorXd u = u_p_;
    for (Eigen::Index j = 0; j < u.size(); ++j) {
      if (cls_[j] >= 0) u[j] = x[cls_[j]];
    }
    return u;
  }

  VectorXd project(const VectorXd& u) const {
    if (!classes_) return Z_.transpose() * (u - u_p_);
    VectorXd x = VectorXd::Zero(n_free_);
    VectorXd count = VectorXd::Zero(n_free_);
    for (Eigen::Index j = 0; j < u.size(); ++j) {
      if (cls_[j] < 0) continue;
      x[cls_[j]] += u[j];
      count[cls_[j]] += 1.0;
    }
    return x.cwiseQuotient(count);
  }

  // Least-squares multipliers from stationarity at u.
  VectorXd eq_duals(const CondensedQP& pr, const VectorXd& u, const VectorXd& lambda) const {
    VectorXd g = -(pr.P * u + pr.q);
    if (pr.num_ineq() > 0) g.noalias() -= pr.G.transpose() * lambda;
    const Eigen::Index p = pr.num_eq();
    VectorXd nu = VectorXd::Zero(p);
    if (classes_) {
      // Independent rows only (redundant ones get 0): E_i E_i' is positive
      // definite and sparse, assembled through the shared coordinates.
      const Eigen::Index k = static_cast<Eigen::Index>(independent_.size());
      if (k == 0) return nu;
      std::vector<std::vector<std::pair<Eigen::Index, double>>> by_col(pr.num_vars());
      for (Eigen::Index r = 0; r < k; ++r) {
        for (Eigen::Index j : row_cols_[independent_[r]]) {
          by_col[j].push_back({r, pr.E(independent_[r], j)});
        }
      }
      MatrixXd EEt = MatrixXd::Zero(k, k);
      VectorXd rhs = VectorXd::Zero(k);
      for (Eigen::Index j = 0; j < pr.num_vars(); ++j) {
        for (const auto& [r1, e1] : by_col[j]) {
          rhs[r1] += e1 * g[j];
          for (const auto& [r2, e2] : by_col[j]) EEt(r1, r2) += e1 * e2;
        }
      }
      const VectorXd nu_ind = EEt.llt().solve(rhs);
      for (Eigen::Index r = 0; r < k; ++r) nu[independent_[r]] = nu_ind[r];
      return nu;
    }
    VectorXd nu_perm = VectorXd::Zero(p);
    nu_perm.head(rank_) = R11_.triangularView<Eigen::Upper>().solve(VectorXd(Q1_.transpose() * g));
    return perm_ * nu_perm;
  }

private:
  Eigen::Index find(std::vector<Eigen::Index>& parent, Eigen::Index j) const {
    while (parent[j] != j) j = parent[j] = parent[parent[j]];
    return j;
  }

  bool try_classes(const CondensedQP& pr) {
    const Eigen::Index n = pr.num_vars(), p = pr.num_eq();
    std::vector<std::vector<Eigen::Index>> row_cols(p);
    for (Eigen::Index i = 0; i < p; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (pr.E(i, j) != 0.0) row_cols[i].push_back(j);
      }
      const auto& cols = row_cols[i];
      if (cols.size() > 2) return false;
      if (cols.size() == 2 && (pr.E(i, cols[0]) != -pr.E(i, cols[1]) || pr.c[i] != 0.0)) {
        return false;
      }
    }

    std::vector<Eigen::Index> parent(n);
    for (Eigen::Index j = 0; j < n; ++j) parent[j] = j;
    std::vector<bool> pinned(n, false);
    std::vector<double> value(n, 0.0);
    const auto clash = [](double a, double b) {
      return std::abs(a - b) > 1e-8 * (1.0 + std::max(std::abs(a), std::abs(b)));
    };
    for (Eigen::Index i = 0; i < p; ++i) {
      const auto& cols = row_cols[i];
      if (cols.empty()) {
        if (std::abs(pr.c[i]) > 1e-8) throw Error(ErrorCode::Infeasible, "QP: row 0 = c != 0");
        continue;
      }
      if (cols.size() == 1) {
        const Eigen::Index r = find(parent, cols[0]);
        const double v = pr.c[i] / pr.E(i, cols[0]);
        if (pinned[r]) {
          if (clash(v, value[r])) throw Error(ErrorCode::Infeasible, "QP: inconsistent equalities");
          continue;
        }
        pinned[r] = true;
        value[r] = v;
      } else {
        const Eigen::Index ra = find(parent, cols[0]), rb = find(parent, cols[1]);
        if (ra == rb) continue;
        if (pinned[ra] && pinned[rb] && clash(value[ra], value[rb])) {
          throw Error(ErrorCode::Infeasible, "QP: inconsistent equalities");
        }
        parent[rb] = ra;
        if (pinned[rb] && !pinned[ra]) {
          pinned[ra] = true;
          value[ra] = value[rb];
        } else if (pinned[rb] && pinned[ra]) {
          continue;  // both sides already fixed to the same value
        }
      }
      independent_.push_back(i);
    }

    cls_.assign(n, -1);
    std::vector<Eigen::Index> root_cls(n, -1);
    n_free_ = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::Index r = find(parent, j);
      if (pinned[r]) {
        u_p_[j] = value[r];
        continue;
      }
      if (root_cls[r] < 0) root_cls[r] = n_free_++;
      cls_[j] = root_cls[r];
    }
    row_cols_ = std::move(row_cols);
    classes_ = true;
    return true;
  }

  void general(const CondensedQP& pr) {
    const Eigen::Index n = pr.num_vars(), p = pr.num_eq();
    u_p_.setZero();
    Eigen::ColPivHouseholderQR<MatrixXd> qr(pr.E.transpose());
    qr.setThreshold(1e-10);
    rank_ = qr.rank();
    const MatrixXd Q = qr.householderQ();
    const MatrixXd& R = qr.matrixR();
    perm_ = qr.colsPermutation();
    const VectorXd c_perm = perm_.transpose() * pr.c;
    R11_ = R.topLeftCorner(rank_, rank_).triangularView<Eigen::Upper>();
    const VectorXd w = R11_.transpose().triangularView<Eigen::Lower>().solve(c_perm.head(rank_));
    if (rank_ < p) {
      const VectorXd mismatch =
          R.topRightCorner(rank_, p - rank_).transpose() * w - c_perm.tail(p - rank_);
      if (inf_norm(mismatch) > 1e-8 * (1.0 + inf_norm(pr.c))) {
        throw Error(ErrorCode::Infeasible, "QP: inconsistent equality constraints");
      }
    }
    Q1_ = Q.leftCols(rank_);
    u_p_ = Q1_ * w;
    Z_ = Q.rightCols(n - rank_);
  }

  VectorXd u_p_;
  bool classes_ = false;
  std::vector<Eigen::Index> cls_;  // free class of each coordinate, -1 when fixed
  Eigen::Index n_free_ = 0;
  std::vector<Eigen::Index> independent_;
  std::vector<std::vector<Eigen::Index>> row_cols_;
  MatrixXd Z_, Q1_, R11_;
  Eigen::ColPivHouseholderQR<MatrixXd>::PermutationType perm_;
  Eigen::Index rank_ = 0;
};

}  // namespace

void CondensedQP::validate() const {
  const Eigen::Index n = q.size();
  if (P.rows() != n || P.cols() != n) throw Error(ErrorCode::InvalidArgument, "QP: P must be n x n");
  if (E.cols() != n || E.rows() != c.size()) throw Error(ErrorCode::InvalidArgument, "QP: E/c mismatch");
  if (G.cols() != n || G.rows() != h.size()) throw Error(ErrorCode::InvalidArgument, "QP: G/h mismatch");
  if (!P.allFinite() || !q.allFinite() || !E.allFinite() || !c.allFinite() || !G.allFinite() ||
      h.hasNaN()) {
    throw Error(ErrorCode::NonFinite, "QP data must be finite");
  }
  if (n > 0 && (P - P.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol) {
    throw Error(ErrorCode::AsymmetricInput, "QP: P is not symmetric");
  }
}

CondensedQP CondensedQP::unconstrained(const MatrixXd& P, const VectorXd& q) {
  const Eigen::Index n = q.size();
  return {P, q, MatrixXd(0, n), VectorXd(0), MatrixXd(0, n), VectorXd(0)};
}

bool check_positive_definite(const MatrixXd& P) {
  if (P.rows() != P.cols()) throw Error(ErrorCode::InvalidArgument, "matrix must be square");
  if (P.size() > 0 && (P - P.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol) {
    throw Error(ErrorCode::AsymmetricInput, "matrix is not symmetric");
  }
  Eigen::LLT<MatrixXd> llt(P);
  if (llt.info() != Eigen::Success) return false;
  const MatrixXd L = llt.matrixL();
  return (L.diagonal().array() > 0.0).all();
}

double kkt_residual(const CondensedQP& pr, const VectorXd& u, const VectorXd& nu,
                    const VectorXd& lambda) {
  VectorXd stat = pr.P * u + pr.q;
  if (pr.num_eq() > 0) stat.noalias() += pr.E.transpose() * nu;
  if (pr.num_ineq() > 0) stat.noalias() += pr.G.transpose() * lambda;
  double r = inf_norm(stat);
  if (pr.num_eq() > 0) r = std::max(r, inf_norm(pr.E * u - pr.c));
  if (pr.num_ineq() > 0) {
    const VectorXd slack = pr.h - pr.G * u;
    r = std::max(r, std::max(0.0, -slack.minCoeff()));
    r = std::max(r, std::max(0.0, -lambda.minCoeff()));
    r = std::max(r, inf_norm(lambda.cwiseProduct(slack)));
  }
  return r;
}

QpSolver::QpSolver(QpOptions options) : options_(options) {}

QPSolution QpSolver::solve(const CondensedQP& problem) {
  const VectorXd* guess =
      options_.warm_start && previous_.size() == problem.num_vars() ? &previous_ : nullptr;
  return solve_impl(problem, guess);
}

QPSolution QpSolver::solve(const CondensedQP& problem, const VectorXd& initial_guess) {
  return solve_impl(problem, &initial_guess);
}

QPSolution QpSolver::solve_impl(const CondensedQP& pr, const VectorXd* guess) {
  const auto t0 = std::chrono::steady_clock::now();
  pr.validate();
  const Eigen::Index n = pr.num_vars(), p = pr.num_eq(), m = pr.num_ineq();
  if (!check_positive_definite(pr.P)) {
    throw Error(ErrorCode::InvalidArgument, "QP: P is not positive definite");
  }

  bool eliminate = false;
  switch (options_.equalities) {
    case EqualityHandling::Auto: eliminate = p > 0 && 4 * p >= n; break;
    case EqualityHandling::Eliminate: eliminate = p > 0; break;
    case EqualityHandling::KeepInKkt: eliminate = false; break;
  }

  QPSolution sol;
  Reduced red;
  std::optional<NullSpace> null_space;
  if (eliminate) {
    null_space.emplace(pr);
    red = null_space->reduce(pr);
  } else {
    if (p > 0) {
      Eigen::ColPivHouseholderQR<MatrixXd> qr(pr.E);
      qr.setThreshold(1e-10);
      if (qr.rank() < p) {
        throw Error(ErrorCode::RankDeficientEqualities, "QP: equality rows are linearly dependent");
      }
    }
    red = {pr.P, pr.q, pr.E, pr.c, pr.G, pr.h};
  }

  IpmPoint pt;
  const Eigen::Index nr = red.H.rows();
  if (nr == 0) {
    // Equalities fix every variable.
    pt.x = VectorXd(0);
    pt.y = VectorXd(0);
    pt.z = VectorXd::Zero(m);
    pt.s = red.h;
    if (m > 0 && red.h.minCoeff() < -options_.tol) {
      throw Error(ErrorCode::Infeasible, "QP: equality solution violates inequalities");
    }
  } else {
    VectorXd reduced_guess;
    const VectorXd* rg = nullptr;
    if (guess != nullptr && guess->size() == n) {
      reduced_guess = eliminate ? null_space->project(*guess) : *guess;
      rg = &reduced_guess;
    }
    const IpmStatus status = interior_point(red, rg, options_.tol, options_.max_iterations, pt);
    if (status == IpmStatus::Infeasible) {
      throw Error(ErrorCode::Infeasible, "QP: no feasible point found");
    }
    if (status == IpmStatus::MaxIterations) {
      throw Error(ErrorCode::MaxIterations,
                  "QP: not converged in " + std::to_string(options_.max_iterations) + " iterations");
    }
    if (options_.polish) sol.polished = polish(red, pt, options_.tol);
  }

  sol.iterations = pt.iterations;
  sol.ineq_duals = m > 0 ? pt.z : VectorXd(0);
  if (eliminate) {
    sol.u_star = null_space->lift(pt.x);
    sol.eq_duals = null_space->eq_duals(pr, sol.u_star, sol.ineq_duals);
  } else {
    sol.u_star = pt.x;
    sol.eq_duals = p > 0 ? pt.y : VectorXd(0);
  }
  sol.objective = pr.objective(sol.u_star);
  sol.kkt_residual = kkt_residual(pr, sol.u_star, sol.eq_duals, sol.ineq_duals);
  sol.solve_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  previous_ = sol.u_star;
  return sol;
}

QPSolution solve(const CondensedQP& problem, double tol) {
  QpOptions opt;
  opt.tol = tol;
  QpSolver solver(opt);
  return solver.solve(problem);
}

void dump_csv(const CondensedQP& pr, const std::filesystem::path& dir, const std::string& stem) {
  std::filesystem::create_directories(dir);
  write_matrix(dir / (stem + "_P.csv"), pr.P);
  write_matrix(dir / (stem + "_q.csv"), pr.q);
  write_matrix(dir / (stem + "_E.csv"), pr.E);
  write_matrix(dir / (stem + "_c.csv"), pr.c);
  write_matrix(dir / (stem + "_G.csv"), pr.G);
  write_matrix(dir / (stem + "_h.csv"), pr.h);
}

CondensedQP load_csv(const std::filesystem::path& dir, const std::string& stem) {
  CondensedQP pr;
  pr.P = read_matrix(dir / (stem + "_P.csv"), 0);
  const Eigen::Index n = pr.P.rows();
  pr.q = read_matrix(dir / (stem + "_q.csv"), 1).reshaped();
  pr.E = read_matrix(dir / (stem + "_E.csv"), n);
  pr.c = read_matrix(dir / (stem + "_c.csv"), 1).reshaped();
  pr.G = read_matrix(dir / (stem + "_G.csv"), n);
  pr.h = read_matrix(dir / (stem + "_h.csv"), 1).reshaped();
  pr.validate();
  return pr;
}

}  // namespace dualmpc
