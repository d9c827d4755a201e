#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace exqp {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Dense symmetric matrix. Only the lower triangle is stored, so A = A^T
/// holds by construction; entries must stay finite.
class SymMat {
 public:
  SymMat() = default;
  explicit SymMat(int n) : n_(n), tri_(static_cast<size_t>(n) * (n + 1) / 2, 0.0) {
    if (n <= 0) throw Error("SymMat: dimension must be positive");
  }

  static SymMat zero(int n) { return SymMat(n); }
  static SymMat identity(int n);
  /// Builds from a dense matrix; rejects asymmetry beyond sym_tol.
  static SymMat from_dense(const Eigen::MatrixXd& M, double sym_tol = 1e-12);
  /// Symmetrizes (M + M^T)/2 without an asymmetry check.
  static SymMat symmetrize(const Eigen::MatrixXd& M);

  int dim() const { return n_; }

  double operator()(int i, int j) const { return tri_[idx(i, j)]; }
  void set(int i, int j, double v) { tri_[idx(i, j)] = v; }

  Eigen::MatrixXd dense() const;

  SymMat& operator+=(const SymMat& o);
  SymMat& operator-=(const SymMat& o);
  SymMat& operator*=(double s);

  friend SymMat operator+(SymMat a, const SymMat& b) { return a += b; }
  friend SymMat operator-(SymMat a, const SymMat& b) { return a -= b; }
  friend SymMat operator*(double s, SymMat a) { return a *= s; }
  friend SymMat operator-(SymMat a) { return a *= -1.0; }

  double frobenius_norm() const;
  double max_abs() const;
  bool is_zero(double tol = 0.0) const { return max_abs() <= tol; }
  bool all_finite() const;

  const std::vector<double>& packed() const { return tri_; }

 private:
  size_t idx(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) throw Error("SymMat: index out of range");
    if (j > i) std::swap(i, j);
    return static_cast<size_t>(i) * (i + 1) / 2 + j;
  }

  int n_ = 0;
  std::vector<double> tri_;
};

struct EigDecomp {
  Eigen::VectorXd vals;  // ascending
  Eigen::MatrixXd vecs;  // orthonormal columns, vecs.col(i) pairs with vals(i)
};

/// <A,X> = sum_ij A_ij X_ij, both triangles counted.
double inner(const SymMat& A, const SymMat& X);

/// x^T A x without forming xx^T.
double quad_form(const SymMat& A, const Eigen::VectorXd& x);

/// xx^T as a SymMat.
SymMat rank1(const Eigen::VectorXd& x);

EigDecomp eig(const SymMat& M);
double min_eig(const SymMat& M);
double max_eig(const SymMat& M);

/// Eigenvalue clamp at zero; fixed point on PSD inputs.
SymMat psd_project(const SymMat& M);

/// Factors x_i with X = sum x_i x_i^T, one per eigenvalue above tol_rank.
/// tol_rank < 0 selects the default 1e-8 * (largest eigenvalue).
/// Throws if min_eig(X) < -tol_rank (input not PSD).
std::vector<Eigen::VectorXd> rank1_factors(const SymMat& X, double tol_rank = -1.0);

}  // namespace exqp
