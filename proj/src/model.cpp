#include "exqp/model.hpp"

#include <cmath>

namespace exqp {

double QuadFunc::eval(const Eigen::VectorXd& u) const {
  if (u.size() != P.dim()) throw Error("QuadFunc::eval: dimension mismatch");
  return quad_form(P, u) + 2.0 * p.dot(u) + rho;
}

SymMat homogenize(const QuadFunc& q) {
  const int m = q.dim();
  SymMat A(m + 1);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j <= i; ++j) A.set(i, j, q.P(i, j));
    A.set(m, i, q.p[i]);
  }
  A.set(m, m, q.rho);
  return A;
}

QuadFunc dehomogenize(const SymMat& A) {
  const int n = A.dim();
  if (n < 2) throw Error("dehomogenize: need dimension >= 2");
  QuadFunc q{SymMat(n - 1), Eigen::VectorXd(n - 1), A(n - 1, n - 1)};
  for (int i = 0; i + 1 < n; ++i) {
    for (int j = 0; j <= i; ++j) q.P.set(i, j, A(i, j));
    q.p[i] = A(n - 1, i);
  }
  return q;
}

double eval_quad(const SymMat& A, const Eigen::VectorXd& x) { return quad_form(A, x); }

FaceSpec FaceSpec::from_matrix(const SymMat& F, double tol) {
  EigDecomp d = eig(F);
  const double scale = 1.0 + std::abs(d.vals(F.dim() - 1));
  if (d.vals(0) < -tol * scale) throw Error("FaceSpec: F is not PSD");
  int r = 0;
  while (r < F.dim() && d.vals(r) <= tol * scale) ++r;
  return FaceSpec{F, d.vecs.leftCols(r)};
}

std::vector<SymMat> Problem::all_constraints() const {
  std::vector<SymMat> out = base;
  out.insert(out.end(), added.begin(), added.end());
  return out;
}

void Problem::validate() const {
  if (n <= 0) throw Error("Problem: dimension must be positive");
  if (Q.dim() != n || H.dim() != n) throw Error("Problem: Q/H dimension mismatch");
  if (H.is_zero()) throw Error("Problem: H must be nonzero");
  for (const SymMat& A : base)
    if (A.dim() != n) throw Error("Problem: base constraint dimension mismatch");
  for (const SymMat& B : added)
    if (B.dim() != n) throw Error("Problem: added constraint dimension mismatch");
  if (cone == ConeKind::Cpp && n > 4)
    throw Error("Problem: CPP cone is supported only for n <= 4 (CP^n = DN^n)");
  if (face && face->F.dim() != n) throw Error("Problem: face dimension mismatch");
  if (base_class.tag == ClassTag::RogRank2 && !base_class.anchor)
    throw Error("Problem: rog_rank2 class requires an anchor vector");
  if (base_class.tag == ClassTag::StdQp && !base_class.subclass)
    throw Error("Problem: stdqp class requires a subclass");
}

SymMat submodular_constraint(int p, int q, int n) {
  if (!(0 <= p && p <= q && q < n - 1)) throw Error("submodular_constraint: bad indices");
  SymMat A(n);
  A.set(n - 1, p, 0.5);
  if (p != q)
    A.set(q, p, -0.5);
  else
    A.set(p, p, -1.0);
  return A;
}

Problem build_submodular_box(const SymMat& C, const Eigen::VectorXd& c, double gamma) {
  const int m = C.dim();
  if (c.size() != m) throw Error("build_submodular_box: dimension mismatch");
  const int n = m + 1;
  Problem prob;
  prob.n = n;
  prob.cone = ConeKind::Psd;
  prob.Q = homogenize(QuadFunc{C, c, gamma});
  prob.H = h1_matrix(n);
  for (int p = 0; p < m; ++p)
    for (int q = p; q < m; ++q) prob.base.push_back(submodular_constraint(p, q, n));
  prob.base_class.tag = ClassTag::SubmodularBox;
  return prob;
}

Problem build_standard_simplex(const SymMat& Q) {
  Problem prob;
  prob.n = Q.dim();
  prob.cone = prob.n <= 4 ? ConeKind::Cpp : ConeKind::Dnn;
  prob.Q = Q;
  prob.H = ones_matrix(prob.n);
  prob.base_class.tag = ClassTag::StdQp;
  prob.base_class.subclass = StdQpSub::Q1;
  return prob;
}

SymMat h1_matrix(int n) {
  SymMat H(n);
  H.set(n - 1, n - 1, 1.0);
  return H;
}

SymMat ones_matrix(int n) {
  SymMat H(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) H.set(i, j, 1.0);
  return H;
}

}  // namespace exqp
