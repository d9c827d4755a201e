#pragma once

#include <optional>
#include <vector>

#include "exqp/symmat.hpp"

namespace exqp {

/// q(u) = u^T P u + 2 p^T u + rho on R^{n-1}.
struct QuadFunc {
  SymMat P;
  Eigen::VectorXd p;
  double rho = 0.0;

  int dim() const { return P.dim(); }
  double eval(const Eigen::VectorXd& u) const;
};

/// A = [[P, p], [p^T, rho]], so <A, (u;1)(u;1)^T> = q(u).
SymMat homogenize(const QuadFunc& q);
QuadFunc dehomogenize(const SymMat& A);

/// q(u, A) = <A, (u;1)(u;1)^T> evaluated directly.
double eval_quad(const SymMat& A, const Eigen::VectorXd& x);

enum class ConeKind { Psd, Dnn, Cpp };

enum class ClassTag {
  RogNiqcBase,
  RogRank2,
  Convex,
  SignPattern,
  SubmodularBox,
  CombinatorialFace,
  StdQp,
  AssumedExact,
};

enum class StdQpSub { Q1, Concave, Convex };

struct ExactnessClass {
  ClassTag tag = ClassTag::AssumedExact;
  std::optional<Eigen::VectorXd> anchor;  // RogRank2 only
  std::optional<StdQpSub> subclass;       // StdQp only
};

/// Face F = {X PSD : <F,X> = 0} with V an orthonormal basis of ker F.
struct FaceSpec {
  SymMat F;
  Eigen::MatrixXd V;  // n x r, r = dim ker F

  static FaceSpec from_matrix(const SymMat& F, double tol = 1e-10);
};

/// A conic-form QCQP instance: minimize <Q, xx^T> over x with xx^T in the
/// cone, <A, xx^T> >= 0 for A in base/added, <H, xx^T> = 1.
struct Problem {
  int n = 0;
  ConeKind cone = ConeKind::Psd;
  SymMat Q;
  SymMat H;
  std::vector<SymMat> base;   // the set A, covered by the exactness class
  std::vector<SymMat> added;  // the set B
  ExactnessClass base_class;
  std::optional<FaceSpec> face;

  /// base followed by added; dual vector y is indexed against this order.
  std::vector<SymMat> all_constraints() const;
  void validate() const;  // throws Error on structural violations
};

/// Submodular box instance: base constraints A^{pq} (1 <= p <= q <= n-1),
/// Q = [[C, c], [c^T, gamma]], H = diag(0,..,0,1), PSD cone.
Problem build_submodular_box(const SymMat& C, const Eigen::VectorXd& c, double gamma);

/// The A^{pq} matrix of dimension n encoding u_p - U_pq >= 0.
SymMat submodular_constraint(int p, int q, int n);

/// Standard quadratic optimization: H = ee^T, empty base, DNN
/// (CPP when n <= 4).
Problem build_standard_simplex(const SymMat& Q);

SymMat h1_matrix(int n);   // diag(0,...,0,1)
SymMat ones_matrix(int n); // ee^T

}  // namespace exqp
