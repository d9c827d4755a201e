#include "exqp/symmat.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace exqp {

SymMat SymMat::identity(int n) {
  SymMat I(n);
  for (int i = 0; i < n; ++i) I.set(i, i, 1.0);
  return I;
}

SymMat SymMat::from_dense(const Eigen::MatrixXd& M, double sym_tol) {
  if (M.rows() != M.cols()) throw Error("SymMat: matrix is not square");
  const double scale = 1.0 + M.cwiseAbs().maxCoeff();
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > sym_tol * scale)
    throw Error("SymMat: matrix is asymmetric beyond tolerance");
  return symmetrize(M);
}

SymMat SymMat::symmetrize(const Eigen::MatrixXd& M) {
  if (M.rows() != M.cols()) throw Error("SymMat: matrix is not square");
  const int n = static_cast<int>(M.rows());
  SymMat A(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) A.set(i, j, 0.5 * (M(i, j) + M(j, i)));
  if (!A.all_finite()) throw Error("SymMat: nonfinite entry");
  return A;
}

Eigen::MatrixXd SymMat::dense() const {
  Eigen::MatrixXd M(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j <= i; ++j) M(i, j) = M(j, i) = (*this)(i, j);
  return M;
}

SymMat& SymMat::operator+=(const SymMat& o) {
  if (o.n_ != n_) throw Error("SymMat: dimension mismatch");
  for (size_t k = 0; k < tri_.size(); ++k) tri_[k] += o.tri_[k];
  return *this;
}

SymMat& SymMat::operator-=(const SymMat& o) {
  if (o.n_ != n_) throw Error("SymMat: dimension mismatch");
  for (size_t k = 0; k < tri_.size(); ++k) tri_[k] -= o.tri_[k];
  return *this;
}

SymMat& SymMat::operator*=(double s) {
  for (double& v : tri_) v *= s;
  return *this;
}

double SymMat::frobenius_norm() const {
  double sum = 0.0;
  size_t k = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j <= i; ++j, ++k) sum += (i == j ? 1.0 : 2.0) * tri_[k] * tri_[k];
  return std::sqrt(sum);
}

double SymMat::max_abs() const {
  double m = 0.0;
  for (double v : tri_) m = std::max(m, std::abs(v));
  return m;
}

bool SymMat::all_finite() const {
  for (double v : tri_)
    if (!std::isfinite(v)) return false;
  return true;
}

double inner(const SymMat& A, const SymMat& X) {
  if (A.dim() != X.dim()) throw Error("inner: dimension mismatch");
  double sum = 0.0;
  const int n = A.dim();
  size_t k = 0;
  const auto& a = A.packed();
  const auto& x = X.packed();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j, ++k) sum += (i == j ? 1.0 : 2.0) * a[k] * x[k];
  return sum;
}

double quad_form(const SymMat& A, const Eigen::VectorXd& x) {
  if (A.dim() != x.size()) throw Error("quad_form: dimension mismatch");
  double sum = 0.0;
  const int n = A.dim();
  for (int i = 0; i < n; ++i) {
    sum += A(i, i) * x[i] * x[i];
    for (int j = 0; j < i; ++j) sum += 2.0 * A(i, j) * x[i] * x[j];
  }
  return sum;
}

SymMat rank1(const Eigen::VectorXd& x) {
  const int n = static_cast<int>(x.size());
  SymMat X(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) X.set(i, j, x[i] * x[j]);
  return X;
}

EigDecomp eig(const SymMat& M) {
  if (!M.all_finite()) throw Error("eig: nonfinite entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M.dense());
  if (es.info() != Eigen::Success) throw Error("eig: iteration failed to converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

double min_eig(const SymMat& M) { return eig(M).vals(0); }
double max_eig(const SymMat& M) { return eig(M).vals(M.dim() - 1); }

SymMat psd_project(const SymMat& M) {
  EigDecomp d = eig(M);
  Eigen::VectorXd clamped = d.vals.cwiseMax(0.0);
  return SymMat::symmetrize(d.vecs * clamped.asDiagonal() * d.vecs.transpose());
}

std::vector<Eigen::VectorXd> rank1_factors(const SymMat& X, double tol_rank) {
  EigDecomp d = eig(X);
  const int n = X.dim();
  const double lmax = std::max(d.vals(n - 1), 0.0);
  if (tol_rank < 0.0) tol_rank = 1e-8 * lmax;
  if (d.vals(0) < -std::max(tol_rank, 1e-14 * (1.0 + lmax)))
    throw Error("rank1_factors: input is not PSD within tolerance");
  std::vector<Eigen::VectorXd> out;
  for (int i = 0; i < n; ++i)
    if (d.vals(i) > tol_rank) out.push_back(std::sqrt(d.vals(i)) * d.vecs.col(i));
  return out;
}

}  // namespace exqp
