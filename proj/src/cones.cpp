#include "exqp/cones.hpp"

#include <cmath>

namespace exqp {

DualSplit dnn_split(const SymMat& A, int max_iter) {
  const int n = A.dim();
  const double scale = 1.0 + A.frobenius_norm();
  SymMat N(n);
  SymMat S = psd_project(A);
  double res = (A - S - N).frobenius_norm();
  for (int it = 0; it < max_iter; ++it) {
    // N block: clamp the remainder at zero entrywise.
    SymMat R = A - S;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) N.set(i, j, std::max(R(i, j), 0.0));
    S = psd_project(A - N);
    const double next = (A - S - N).frobenius_norm();
    if (next <= 1e-15 * scale) return DualSplit{S, N, next};
    if (res - next < 1e-16 * scale && it > 10) break;  // stalled
    res = next;
  }
  return DualSplit{S, N, (A - S - N).frobenius_norm()};
}

std::optional<DualSplit> dnn_dual_membership(const SymMat& A, double tol, int max_iter) {
  DualSplit s = dnn_split(A, max_iter);
  const double scale = 1.0 + A.frobenius_norm();
  if (s.residual <= tol * scale) return s;
  return std::nullopt;
}

bool cpp_small(const SymMat& X, double tol) {
  if (X.dim() > 4) throw Error("cpp_small: CP^n membership supported only for n <= 4");
  const double scale = 1.0 + X.frobenius_norm();
  if (min_eig(X) < -tol * scale) return false;
  for (int i = 0; i < X.dim(); ++i)
    for (int j = 0; j <= i; ++j)
      if (X(i, j) < -tol * scale) return false;
  return true;
}

Eigen::MatrixXd simplex_tangent_basis(int n) {
  // Householder-style: complete e/sqrt(n) to an orthonormal basis and drop it.
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd e = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(e);
  Eigen::MatrixXd Qfull = qr.householderQ() * M;
  return Qfull.rightCols(n - 1);
}

StdQpClassReport stdqp_class(const SymMat& Q) {
  const int n = Q.dim();
  StdQpClassReport rep;
  double min_all = Q(0, 0), min_diag = Q(0, 0);
  for (int i = 0; i < n; ++i) {
    min_diag = std::min(min_diag, Q(i, i));
    for (int j = 0; j <= i; ++j) min_all = std::min(min_all, Q(i, j));
  }
  rep.q1 = min_diag <= min_all + 1e-12 * (1.0 + std::abs(min_all));
  if (n == 1) {
    rep.concave = rep.convex = true;
    return rep;
  }
  Eigen::MatrixXd V = simplex_tangent_basis(n);
  SymMat proj = SymMat::symmetrize(V.transpose() * Q.dense() * V);
  EigDecomp d = eig(proj);
  const double scale = 1.0 + Q.frobenius_norm();
  rep.concave = d.vals(proj.dim() - 1) <= 1e-9 * scale;
  rep.convex = d.vals(0) >= -1e-9 * scale;
  return rep;
}

}  // namespace exqp
