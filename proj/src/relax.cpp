#include "exqp/relax.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "exqp/cones.hpp"

namespace exqp {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIter: return "max_iter";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
  }
  return "max_iter";
}

double KktResiduals::max() const {
  double m = primal_eq;
  for (double v : {primal_ineq, primal_cone, dual_eq, dual_cone, comp_ineq, comp_cone, gap})
    m = std::max(m, v);
  return m;
}

double KktResiduals::sum_squares() const {
  double s = 0.0;
  for (double v : {primal_eq, primal_ineq, primal_cone, dual_eq, dual_cone, comp_ineq, comp_cone, gap})
    s += v * v;
  return s;
}

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

int svec_dim(int n) { return n * (n + 1) / 2; }

Eigen::VectorXd svec(const SymMat& M) {
  const int n = M.dim();
  Eigen::VectorXd v(svec_dim(n));
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j, ++k) v[k] = M(i, j) * (i == j ? 1.0 : kSqrt2);
  return v;
}

SymMat smat(const Eigen::VectorXd& v, int n) {
  SymMat M(n);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j, ++k) M.set(i, j, i == j ? v[k] : v[k] / kSqrt2);
  return M;
}

void psd_project_svec(Eigen::Ref<Eigen::VectorXd> v, int n, Eigen::MatrixXd& scratch) {
  scratch.resize(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j, ++k) {
      const double val = (i == j) ? v[k] : v[k] / kSqrt2;
      scratch(i, j) = val;
      scratch(j, i) = val;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scratch);
  const Eigen::VectorXd w = es.eigenvalues().cwiseMax(0.0);
  scratch.noalias() = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().transpose();
  k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j, ++k) v[k] = scratch(i, j) * (i == j ? 1.0 : kSqrt2);
}

bool dnn_like(const Problem& prob) { return prob.cone != ConeKind::Psd; }

SymMat entrywise_unit(int i, int j, int n) {
  SymMat E(n);
  E.set(i, j, i == j ? 1.0 : 0.5);
  return E;
}

/// Distance of Y to the dual cone of K (restricted to the face when given):
/// PSD: eigenvalue clamp; DNN: distance to S_+ + N via alternating split;
/// with a face the check is compressed (PSD) or shifted along F (DNN).
double dual_cone_violation(const Problem& prob, const SymMat& Y) {
  const bool dnn = dnn_like(prob);
  auto split_dist = [](const SymMat& M) { return dnn_split(M, 400).residual; };
  if (!prob.face) {
    if (!dnn) return std::max(0.0, -min_eig(Y));
    return split_dist(Y);
  }
  const Eigen::MatrixXd& V = prob.face->V;
  if (V.cols() == 0) return 0.0;  // face is {0}; dual cone is everything
  if (!dnn) {
    SymMat C = SymMat::symmetrize(V.transpose() * Y.dense() * V);
    return std::max(0.0, -min_eig(C));
  }
  // minimize over the free face multiplier phi: dist(Y - phi F, S_+ + N).
  const SymMat& F = prob.face->F;
  const double fn = F.frobenius_norm();
  if (fn < 1e-14) return split_dist(Y);
  double lo = -10.0 * (1.0 + Y.frobenius_norm()) / fn, hi = -lo;
  const double gr = 0.6180339887498949;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = split_dist(Y - x1 * F), f2 = split_dist(Y - x2 * F);
  for (int it = 0; it < 80; ++it) {
    if (f1 > f2) {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + gr * (hi - lo); f2 = split_dist(Y - x2 * F);
    } else {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - gr * (hi - lo); f1 = split_dist(Y - x1 * F);
    }
  }
  return std::min(f1, f2);
}

struct ConicData {
  int n = 0;
  int d = 0;                      // svec dimension
  int n_user = 0;                 // |base u added|
  int n_eq = 0;                   // 1 (+1 with face)
  std::vector<SymMat> ineq;       // user constraints then entrywise rows
  Eigen::MatrixXd A;              // rows: equalities then inequalities-with-slack
  Eigen::VectorXd b;
  Eigen::VectorXd row_norm;
  Eigen::VectorXd c;              // scaled cost
  double cost_scale = 1.0;
};

ConicData build_conic(const Problem& prob) {
  ConicData cd;
  cd.n = prob.n;
  cd.d = svec_dim(prob.n);
  std::vector<SymMat> user = prob.all_constraints();
  cd.n_user = static_cast<int>(user.size());
  cd.ineq = std::move(user);
  if (dnn_like(prob))
    for (int i = 0; i < prob.n; ++i)
      for (int j = 0; j <= i; ++j) cd.ineq.push_back(entrywise_unit(i, j, prob.n));
  cd.n_eq = 1 + (prob.face ? 1 : 0);
  const int m = static_cast<int>(cd.ineq.size());
  const int rows = cd.n_eq + m;
  cd.A.setZero(rows, cd.d + m);
  cd.A.row(0).head(cd.d) = svec(prob.H);
  if (prob.face) cd.A.row(1).head(cd.d) = svec(prob.face->F);
  for (int k = 0; k < m; ++k) {
    cd.A.row(cd.n_eq + k).head(cd.d) = svec(cd.ineq[k]);
    cd.A(cd.n_eq + k, cd.d + k) = -1.0;
  }
  cd.row_norm = cd.A.rowwise().norm();
  for (int r = 0; r < rows; ++r)
    if (cd.row_norm[r] < 1e-14) cd.row_norm[r] = 1.0;
  cd.A.array().colwise() /= cd.row_norm.array();
  cd.b.setZero(rows);
  cd.b[0] = 1.0 / cd.row_norm[0];
  cd.cost_scale = std::max(1.0, prob.Q.frobenius_norm());
  cd.c.setZero(cd.d + m);
  cd.c.head(cd.d) = svec(prob.Q) / cd.cost_scale;
  return cd;
}

/// Assembles (X, t, y, Y) in original scale from the splitting iterates.
RelaxSolution extract(const Problem& prob, const ConicData& cd, const Eigen::VectorXd& xt,
                      const Eigen::VectorXd& st, const Eigen::VectorXd& w) {
  RelaxSolution sol;
  const double cs = cd.cost_scale;
  sol.X = smat(xt.head(cd.d), cd.n);
  sol.value = inner(prob.Q, sol.X);
  sol.t = cs * w[0] / cd.row_norm[0];
  const int m = static_cast<int>(cd.ineq.size());
  Eigen::VectorXd ynu(m);
  for (int k = 0; k < m; ++k) ynu[k] = cs * st[cd.d + k] / cd.row_norm[cd.n_eq + k];
  sol.y = ynu.head(cd.n_user);
  SymMat Y = cs * smat(st.head(cd.d), cd.n);
  for (int k = cd.n_user; k < m; ++k) Y += ynu[k] * cd.ineq[k];
  if (prob.face) Y += (cs * w[1] / cd.row_norm[1]) * prob.face->F;
  sol.Y = Y;
  return sol;
}

bool infeasibility_certificate(const Problem& prob, const ConicData& cd,
                               const Eigen::VectorXd& w) {
  const int m = static_cast<int>(cd.ineq.size());
  double tau = w[0] / cd.row_norm[0];
  double phi = prob.face ? w[1] / cd.row_norm[1] : 0.0;
  Eigen::VectorXd yv(m);
  for (int k = 0; k < m; ++k) yv[k] = w[cd.n_eq + k] / cd.row_norm[cd.n_eq + k];
  double nrm = std::abs(tau) + std::abs(phi) + yv.cwiseAbs().sum();
  if (nrm < 1e-8) return false;
  tau /= nrm; phi /= nrm; yv /= nrm;
  if (tau < 1e-3) return false;
  if ((-yv).cwiseMax(0.0).sum() > 1e-7) return false;
  SymMat P = tau * prob.H;
  if (prob.face) P += phi * prob.face->F;
  for (int k = 0; k < m; ++k)
    if (yv[k] > 0.0) P += yv[k] * cd.ineq[k];
  // need -P in the dual cone of K
  const SymMat Z = -P;
  const double scale = 1.0 + Z.frobenius_norm();
  if (!dnn_like(prob)) return min_eig(Z) >= -1e-7 * scale;
  auto s = dnn_dual_membership(Z, 1e-7, 2000);
  return s.has_value();
}

bool unboundedness_certificate(const Problem& prob, const ConicData& cd,
                               const Eigen::VectorXd& xt) {
  SymMat D = smat(xt.head(cd.d), cd.n);
  const double nrm = D.frobenius_norm();
  if (nrm < 1e-8) return false;
  D *= 1.0 / nrm;
  if (inner(prob.Q, D) > -1e-6 * (1.0 + prob.Q.frobenius_norm())) return false;
  if (std::abs(inner(prob.H, D)) > 1e-7 * (1.0 + prob.H.frobenius_norm())) return false;
  if (prob.face &&
      std::abs(inner(prob.face->F, D)) > 1e-7 * (1.0 + prob.face->F.frobenius_norm()))
    return false;
  if (min_eig(D) < -1e-7) return false;
  for (const SymMat& Ak : cd.ineq)
    if (inner(Ak, D) < -1e-7 * (1.0 + Ak.frobenius_norm())) return false;
  return true;
}

}  // namespace

KktResiduals kkt_residuals(const Problem& prob, const RelaxSolution& sol) {
  if (sol.X.dim() != prob.n || sol.Y.dim() != prob.n)
    throw Error("kkt_residuals: dimension mismatch");
  const std::vector<SymMat> cons = prob.all_constraints();
  if (sol.y.size() != static_cast<int>(cons.size()))
    throw Error("kkt_residuals: dual vector length mismatch");
  KktResiduals r;
  r.primal_eq = std::abs(inner(prob.H, sol.X) - 1.0);
  double comp = 0.0;
  for (size_t k = 0; k < cons.size(); ++k) {
    const double v = inner(cons[k], sol.X);
    r.primal_ineq = std::max(r.primal_ineq, -v);
    comp += sol.y[static_cast<int>(k)] * v;
  }
  r.primal_ineq = std::max(0.0, r.primal_ineq);
  r.primal_cone = std::max(0.0, -min_eig(sol.X));
  if (dnn_like(prob)) {
    double mn = 0.0;
    for (int i = 0; i < prob.n; ++i)
      for (int j = 0; j <= i; ++j) mn = std::min(mn, sol.X(i, j));
    r.primal_cone += std::max(0.0, -mn);
  }
  if (prob.face)
    r.primal_cone += std::abs(inner(prob.face->F, sol.X)) / (1.0 + prob.face->F.frobenius_norm());
  SymMat D = prob.Q - sol.t * prob.H - sol.Y;
  for (size_t k = 0; k < cons.size(); ++k) D -= sol.y[static_cast<int>(k)] * cons[k];
  r.dual_eq = D.frobenius_norm();
  r.dual_cone = dual_cone_violation(prob, sol.Y);
  // y >= 0 violations count against dual feasibility as well
  if (sol.y.size() > 0) r.dual_cone += std::max(0.0, -sol.y.minCoeff());
  r.comp_ineq = std::abs(comp);
  r.comp_cone = std::abs(inner(sol.Y, sol.X));
  r.gap = std::abs(inner(prob.Q, sol.X) - sol.t);
  return r;
}

RelaxSolution solve_relaxation(const Problem& prob, const SolveOptions& opts) {
  prob.validate();
  if (opts.tol <= 0.0 || opts.tol > 1e-2) throw Error("solve_relaxation: tol out of range");
  ConicData cd = build_conic(prob);
  const int m = static_cast<int>(cd.ineq.size());
  const int rows = cd.n_eq + m;
  const int nv = cd.d + m;

  Eigen::MatrixXd AAT = cd.A * cd.A.transpose();
  AAT.diagonal().array() += 1e-12;
  Eigen::LLT<Eigen::MatrixXd> llt(AAT);
  if (llt.info() != Eigen::Success) throw Error("solve_relaxation: constraint Gram factorization failed");

  Eigen::VectorXd xt = Eigen::VectorXd::Zero(nv);
  Eigen::VectorXd st = Eigen::VectorXd::Zero(nv);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(rows);
  Eigen::MatrixXd scratch;

  double rho = opts.rho;
  const double alpha = opts.over_relax;

  RelaxSolution best;
  double best_merit = std::numeric_limits<double>::infinity();
  bool have_best = false;

  const double nb = 1.0 + cd.b.norm();
  const double nc = 1.0 + cd.c.norm();

  int it = 0;
  SolveStatus status = SolveStatus::MaxIter;
  for (it = 0; it < opts.max_iter; ++it) {
    // w-step: (A A^T) w = (b - A xt)/rho + A (c - st)
    Eigen::VectorXd rhs = (cd.b - cd.A * xt) / rho + cd.A * (cd.c - st);
    w = llt.solve(rhs);
    Eigen::VectorXd h = cd.A.transpose() * w;
    Eigen::VectorXd hh = alpha * h - (1.0 - alpha) * (st - cd.c);
    st = cd.c - hh - xt / rho;
    psd_project_svec(st.head(cd.d), cd.n, scratch);
    st.tail(m) = st.tail(m).cwiseMax(0.0);
    xt += rho * (hh + st - cd.c);

    if (it % opts.check_every == 0) {
      RelaxSolution cand = extract(prob, cd, xt, st, w);
      KktResiduals res = kkt_residuals(prob, cand);
      const double merit = res.sum_squares();
      if (merit < best_merit) {
        best_merit = merit;
        best = cand;
        best.residuals = res;
        best.iterations = it + 1;
        have_best = true;
        if (opts.on_accept) opts.on_accept(it, merit);
      }
      if (res.max() <= opts.tol) {
        status = SolveStatus::Converged;
        break;
      }
    }
    if (it > 0 && it % opts.divergence_window == 0) {
      if (infeasibility_certificate(prob, cd, w)) {
        status = SolveStatus::Infeasible;
        break;
      }
      if (unboundedness_certificate(prob, cd, xt)) {
        status = SolveStatus::Unbounded;
        break;
      }
      // residual-balancing penalty adaptation
      const double pr = (cd.A * xt - cd.b).norm() / nb;
      const double dr = (cd.A.transpose() * w + st - cd.c).norm() / nc;
      if (pr > 10.0 * dr)
        rho = std::max(rho * 0.7, 1e-6);
      else if (dr > 10.0 * pr)
        rho = std::min(rho / 0.7, 1e6);
    }
  }

  if (status == SolveStatus::Infeasible || status == SolveStatus::Unbounded) {
    RelaxSolution sol = have_best ? best : extract(prob, cd, xt, st, w);
    sol.status = status;
    sol.iterations = it + 1;
    sol.value = status == SolveStatus::Infeasible ? std::numeric_limits<double>::infinity()
                                                  : -std::numeric_limits<double>::infinity();
    return sol;
  }

  RelaxSolution sol = have_best ? best : extract(prob, cd, xt, st, w);
  sol.status = status;
  if (status == SolveStatus::Converged) sol.iterations = it + 1;
  sol.residuals = kkt_residuals(prob, sol);
  // the cheap in-loop check and the final recompute agree up to the split
  // search; re-run the verdict on the recomputed numbers
  if (status == SolveStatus::Converged && sol.residuals.max() > 10.0 * opts.tol)
    sol.status = SolveStatus::MaxIter;
  return sol;
}

}  // namespace exqp
