#pragma once

// Batch one-class SVM by a primal-dual interior point method, independent of
// the SMO solver in the library.
//
//   min 1/2 a'Qa   s.t.  1'a = 1,  0 <= a <= C,  C = 1/(nu n)
//
// The multiplier of the equality constraint is rho. Decision values follow
// the library's documented normalization: W.x - (1 - nu) rho.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace oracle {

struct OneClassSolution {
  Eigen::VectorXd alpha;
  Eigen::VectorXd w;
  double rho = 0.0;
  double nu = 0.0;

  double decision(const Eigen::VectorXd& x) const { return w.dot(x) - (1.0 - nu) * rho; }
};

inline OneClassSolution solve_one_class(const std::vector<std::vector<double>>& points, double nu) {
  const int n = static_cast<int>(points.size());
  const int d = static_cast<int>(points.front().size());
  if (!(nu > 0 && nu < 1)) throw std::invalid_argument("oracle needs 0 < nu < 1 (strictly feasible interior)");
  Eigen::MatrixXd x(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) x(i, j) = points[i][j];
  const Eigen::MatrixXd q = x * x.transpose();
  const double c = 1.0 / (nu * n);

  Eigen::VectorXd a = Eigen::VectorXd::Constant(n, 1.0 / n);
  Eigen::VectorXd z = Eigen::VectorXd::Ones(n);  // for a >= 0
  Eigen::VectorXd w = Eigen::VectorXd::Ones(n);  // for a <= C
  double y = 0.0;
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  const double scale = std::max(1.0, q.diagonal().maxCoeff());

  for (int iter = 0; iter < 200; ++iter) {
    const Eigen::VectorXd s = Eigen::VectorXd::Constant(n, c) - a;
    const double mu = (a.dot(z) + s.dot(w)) / (2.0 * n);
    const Eigen::VectorXd rd = q * a - z + w - y * ones;
    const double rp = a.sum() - 1.0;
    if (mu < 1e-15 * scale && rd.norm() < 1e-12 * scale && std::abs(rp) < 1e-14) break;
    const double tau = 0.1 * mu;

    // Eliminate dz, dw and solve the bordered system for (da, dy).
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n + 1, n + 1);
    k.topLeftCorner(n, n) = q;
    k.topLeftCorner(n, n).diagonal() += (z.array() / a.array() + w.array() / s.array()).matrix();
    k.block(0, n, n, 1) = -ones;
    k.block(n, 0, 1, n) = ones.transpose();
    Eigen::VectorXd rhs(n + 1);
    rhs.head(n) = -rd + (tau / a.array() - z.array() - tau / s.array() + w.array()).matrix();
    rhs(n) = -rp;
    const Eigen::VectorXd step = k.partialPivLu().solve(rhs);
    const Eigen::VectorXd da = step.head(n);
    const double dy = step(n);
    const Eigen::VectorXd dz = ((tau - (a.array() * z.array()) - z.array() * da.array()) / a.array()).matrix();
    const Eigen::VectorXd dw = ((tau - (s.array() * w.array()) + w.array() * da.array()) / s.array()).matrix();

    double t = 1.0;
    for (int i = 0; i < n; ++i) {
      if (da(i) < 0) t = std::min(t, -0.99 * a(i) / da(i));
      if (da(i) > 0) t = std::min(t, 0.99 * s(i) / da(i));
      if (dz(i) < 0) t = std::min(t, -0.99 * z(i) / dz(i));
      if (dw(i) < 0) t = std::min(t, -0.99 * w(i) / dw(i));
    }
    a += t * da;
    z += t * dz;
    w += t * dw;
    y += t * dy;
  }

  OneClassSolution sol;
  sol.alpha = a;
  sol.w = x.transpose() * a;
  sol.rho = y;
  sol.nu = nu;
  return sol;
}

}  // namespace oracle
