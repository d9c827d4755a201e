#include "exqp/niqc.hpp"

#include <algorithm>
#include <cmath>

#include "exqp/relax.hpp"
#include "exqp/rng.hpp"

namespace exqp {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Certified: return "certified";
    case Verdict::Falsified: return "falsified";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

namespace detail {

AffineRestriction l1_restriction(int n, const std::optional<FaceSpec>& face) {
  AffineRestriction ar;
  if (!face || face->F.is_zero(0.0)) {
    ar.u0 = Eigen::VectorXd::Zero(n - 1);
    ar.W = Eigen::MatrixXd::Identity(n - 1, n - 1);
    return ar;
  }
  const Eigen::MatrixXd F = face->F.dense();
  const Eigen::MatrixXd Fl = F.leftCols(n - 1);  // n x (n-1), u |-> F (u;0)
  const Eigen::VectorXd f = F.col(n - 1);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Fl, Eigen::ComputeThinU | Eigen::ComputeFullV);
  ar.u0 = svd.solve(-f);
  const double scale = 1.0 + face->F.frobenius_norm();
  if ((Fl * ar.u0 + f).norm() > 1e-8 * scale) {
    ar.empty = true;
    return ar;
  }
  const auto& sv = svd.singularValues();
  int rank = 0;
  const double rtol = 1e-10 * (sv.size() > 0 ? std::max(sv(0), 1.0) : 1.0);
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > rtol) ++rank;
  ar.W = svd.matrixV().rightCols(n - 1 - rank);
  return ar;
}

SymMat restrict_hom(const SymMat& M, const AffineRestriction& ar) {
  const int n = M.dim();
  const int d = static_cast<int>(ar.W.cols());
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, d + 1);
  T.topLeftCorner(n - 1, d) = ar.W;
  T.col(d).head(n - 1) = ar.u0;
  T(n - 1, d) = 1.0;
  return SymMat::symmetrize(T.transpose() * M.dense() * T);
}

std::pair<double, double> max_min_eig(const SymMat& B, const SymMat& Bp, double lo, double hi) {
  auto g = [&](double mu) { return min_eig(Bp + mu * B); };
  const double gr = 0.6180339887498949;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = g(x1), f2 = g(x2);
  for (int it = 0; it < 140; ++it) {
    if (f1 < f2) {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + gr * (hi - lo); f2 = g(x2);
    } else {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - gr * (hi - lo); f1 = g(x1);
    }
  }
  const double mu = 0.5 * (lo + hi);
  return {mu, g(mu)};
}

QuadMin minimize_quad(const QuadFunc& q) {
  QuadMin out;
  const int d = q.dim();
  if (d == 0) {
    out.value = q.rho;
    out.arg = Eigen::VectorXd(0);
    return out;
  }
  EigDecomp ed = eig(q.P);
  const double scale = 1.0 + q.P.frobenius_norm() + q.p.norm();
  const double tol = 1e-12 * scale;
  const Eigen::VectorXd pb = ed.vecs.transpose() * q.p;  // p in eigenbasis
  // descent ray if a negative eigenvalue, or a zero eigenvalue with a linear
  // component along it
  for (int i = 0; i < d; ++i) {
    const bool neg = ed.vals(i) < -tol;
    const bool flat_lin = std::abs(ed.vals(i)) <= tol && std::abs(pb(i)) > tol;
    if (!neg && !flat_lin) continue;
    out.bounded = false;
    Eigen::VectorXd v = ed.vecs.col(i);
    if (pb(i) > 0) v = -v;  // descend
    double t = 1.0;
    Eigen::VectorXd z = t * v;
    for (int k = 0; k < 400 && q.eval(z) > 0.0; ++k) {
      t *= 2.0;
      z = t * v;
    }
    out.value = -std::numeric_limits<double>::infinity();
    out.arg = z;
    return out;
  }
  // PSD quadratic with consistent linear part: z* solves P z = -p
  Eigen::VectorXd zb = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < d; ++i)
    if (ed.vals(i) > tol) zb(i) = -pb(i) / ed.vals(i);
  out.arg = ed.vecs * zb;
  out.value = q.eval(out.arg);
  return out;
}

}  // namespace detail

namespace {

using detail::AffineRestriction;

struct Compressed {
  SymMat B, Bp;
  Eigen::MatrixXd V;  // identity when no face
  bool trivial = false;
};

Compressed compress_pair(const SymMat& B, const SymMat& Bp, const std::optional<FaceSpec>& face) {
  if (B.dim() != Bp.dim()) throw Error("pair check: dimension mismatch");
  if (!face || face->F.is_zero(0.0))
    return {B, Bp, Eigen::MatrixXd::Identity(B.dim(), B.dim()), false};
  const Eigen::MatrixXd& V = face->V;
  if (V.cols() == 0) return {B, Bp, V, true};
  return {SymMat::symmetrize(V.transpose() * B.dense() * V),
          SymMat::symmetrize(V.transpose() * Bp.dense() * V), V, false};
}

/// Roots of x(theta)^T B x(theta) on the circle spanned by (v, w); x unit.
int circle_roots(const SymMat& B, const Eigen::VectorXd& v, const Eigen::VectorXd& w,
                 Eigen::VectorXd* out_x, int max_roots) {
  const Eigen::MatrixXd Bd = B.dense();
  const double bvv = v.dot(Bd * v), bww = w.dot(Bd * w), bvw = v.dot(Bd * w);
  const double a0 = 0.5 * (bvv + bww);
  const double rc = 0.5 * (bvv - bww);
  const double R = std::hypot(rc, bvw);
  if (R < 1e-300 || std::abs(a0) > R) return 0;
  const double phase = std::atan2(bvw, rc);
  const double delta = std::acos(std::clamp(-a0 / R, -1.0, 1.0));
  int cnt = 0;
  for (double s : {phase + delta, phase - delta}) {
    if (cnt >= max_roots) break;
    const double th = 0.5 * s;
    out_x[cnt++] = std::cos(th) * v + std::sin(th) * w;
  }
  return cnt;
}

}  // namespace

ConditionReport check_j0_subset_jplus(const SymMat& B, const SymMat& Bp,
                                      const std::optional<FaceSpec>& face,
                                      const CheckOptions& opts) {
  ConditionReport rep;
  rep.seed = opts.seed;
  Compressed c = compress_pair(B, Bp, face);
  if (c.trivial) {
    rep.verdict = Verdict::Certified;
    rep.mu = 0.0;
    rep.notes = "face is {0}; inclusion vacuous";
    return rep;
  }
  const double nb = c.B.frobenius_norm(), nbp = c.Bp.frobenius_norm();
  if (min_eig(c.Bp) >= -1e-9) {
    rep.verdict = Verdict::Certified;
    rep.mu = 0.0;
    rep.notes = "B' PSD on the face";
    return rep;
  }
  if (nb > 1e-14) {
    const double M = 1e6 * nbp / (nb + 1e-12);
    auto [mu, val] = detail::max_min_eig(c.B, c.Bp, -M, M);
    if (val >= -1e-9) {
      rep.verdict = Verdict::Certified;
      rep.mu = mu;
      return rep;
    }
  }
  // falsifier: sample the quadric x^T B x = 0 on random 2-planes
  Rng rng(opts.seed);
  const int n = c.B.dim();
  Eigen::VectorXd roots[2];
  for (int k = 0; k < opts.samples; ++k) {
    const Eigen::VectorXd v = rng.unit_vec(n);
    Eigen::VectorXd w = rng.unit_vec(n);
    w -= w.dot(v) * v;
    const double wn = w.norm();
    if (wn < 1e-12) continue;
    w /= wn;
    const int cnt = circle_roots(c.B, v, w, roots, 2);
    for (int r = 0; r < cnt; ++r) {
      const Eigen::VectorXd& x = roots[r];
      if (std::abs(quad_form(c.B, x)) <= 1e-9 && quad_form(c.Bp, x) <= -1e-6) {
        rep.verdict = Verdict::Falsified;
        Eigen::VectorXd wit = c.V * x;
        // re-verify in original coordinates
        if (std::abs(quad_form(B, wit)) <= 1e-9 && quad_form(Bp, wit) <= -1e-6) {
          rep.witness = wit;
          rep.samples_used = k + 1;
          return rep;
        }
        rep.verdict = Verdict::Unknown;  // compression round-off; keep sampling
      }
    }
  }
  rep.verdict = Verdict::Unknown;
  rep.samples_used = opts.samples;
  rep.notes = "no certificate found and no counterexample in samples";
  return rep;
}

ConditionReport check_c23_nonhomog(const SymMat& B, const SymMat& Bp,
                                   const std::optional<FaceSpec>& face,
                                   const CheckOptions& opts) {
  if (B.dim() != Bp.dim()) throw Error("check_c23_nonhomog: dimension mismatch");
  ConditionReport rep;
  rep.seed = opts.seed;
  const int n = B.dim();
  AffineRestriction ar = detail::l1_restriction(n, face);
  if (ar.empty) {
    rep.verdict = Verdict::Falsified;
    rep.notes = "L1(F) is empty; nonemptiness precondition fails";
    return rep;
  }
  const SymMat Bt = detail::restrict_hom(B, ar);
  const SymMat Bpt = detail::restrict_hom(Bp, ar);
  const QuadFunc qb = dehomogenize(Bt);
  auto lift_point = [&](const Eigen::VectorXd& z) -> Eigen::VectorXd {
    Eigen::VectorXd u = ar.u0 + ar.W * z;
    Eigen::VectorXd x(n);
    x.head(n - 1) = u;
    x(n - 1) = 1.0;
    return x;
  };

  detail::QuadMin qm = detail::minimize_quad(qb);
  const double scale_b = 1.0 + Bt.frobenius_norm();
  if (qm.bounded && qm.value > 1e-9 * scale_b) {
    rep.verdict = Verdict::Falsified;
    rep.witness = lift_point(qm.arg);
    rep.notes = "B_<= on L1(F) is empty: min q(.,B) = " + std::to_string(qm.value);
    return rep;
  }
  Eigen::VectorXd z0 = qm.arg;  // a point of B_<= (q <= ~0 there)

  // S-procedure sufficient certificate for the inclusion
  const double nb = Bt.frobenius_norm(), nbp = Bpt.frobenius_norm();
  if (min_eig(Bpt) >= -1e-9) {
    rep.verdict = Verdict::Certified;
    rep.mu = 0.0;
    rep.notes = "q(.,B') nonnegative on L1(F)";
    return rep;
  }
  if (nb > 1e-14) {
    const double M = 1e6 * nbp / (nb + 1e-12);
    auto [lam, val] = detail::max_min_eig(Bt, Bpt, 0.0, M);
    if (val >= -1e-9) {
      rep.verdict = Verdict::Certified;
      rep.mu = lam;
      return rep;
    }
  }

  // falsifier: minimize q(.,B') over B_<= by seeded multistart penalty descent
  Rng rng(opts.seed);
  const QuadFunc qp = dehomogenize(Bpt);
  const int d = qb.dim();
  const int starts = std::max(4, opts.samples / 500);
  int used = 0;
  auto grad = [](const QuadFunc& q, const Eigen::VectorXd& z) -> Eigen::VectorXd {
    return 2.0 * (q.P.dense() * z + q.p);
  };
  for (int s = 0; s < starts; ++s) {
    ++used;
    Eigen::VectorXd z = (s == 0) ? z0 : (z0 + std::pow(10.0, rng.uniform(-1.0, 1.5)) *
                                                  rng.normal_vec(d));
    for (double beta : {1e2, 1e4, 1e6, 1e8}) {
      for (int it = 0; it < 300; ++it) {
        const double vb = qb.eval(z);
        Eigen::VectorXd g = grad(qp, z);
        if (vb > 0) g += 2.0 * beta * vb * grad(qb, z);
        const double gn = g.norm();
        if (gn < 1e-12) break;
        double step = 1.0 / (1.0 + gn);
        const double merit0 = qp.eval(z) + beta * std::pow(std::max(qb.eval(z), 0.0), 2);
        bool moved = false;
        for (int bt = 0; bt < 40; ++bt) {
          Eigen::VectorXd zn = z - step * g;
          const double merit =
              qp.eval(zn) + beta * std::pow(std::max(qb.eval(zn), 0.0), 2);
          if (merit < merit0 - 1e-14 * (1.0 + std::abs(merit0))) {
            z = zn;
            moved = true;
            break;
          }
          step *= 0.5;
        }
        if (!moved) break;
      }
      if (qb.eval(z) <= 1e-9 && qp.eval(z) <= -1e-6) break;
    }
    if (qb.eval(z) <= 1e-9 && qp.eval(z) <= -1e-6) {
      Eigen::VectorXd wit = lift_point(z);
      if (eval_quad(B, wit) <= 1e-9 && eval_quad(Bp, wit) <= -1e-6) {
        rep.verdict = Verdict::Falsified;
        rep.witness = wit;
        rep.samples_used = used;
        return rep;
      }
    }
  }
  rep.verdict = Verdict::Unknown;
  rep.samples_used = used;
  rep.notes = "no certificate found and no counterexample from multistart";
  return rep;
}

namespace {

bool mixed_signs(const Eigen::VectorXd& u, double margin) {
  return u.maxCoeff() > margin && u.minCoeff() < -margin;
}

/// Relaxation lower bound on min u_i u_j over B_= (hom form, dim n).
/// Returns true when the bound certifies u_i u_j >= -1e-7.
enum class BoundOutcome { Certified, EmptySet, Inconclusive };

BoundOutcome pair_product_bound(const SymMat& B, int i, int j) {
  const int n = B.dim();
  Problem aux;
  aux.n = n;
  aux.cone = ConeKind::Psd;
  aux.H = h1_matrix(n);
  SymMat Q(n);
  Q.set(std::max(i, j), std::min(i, j), i == j ? 1.0 : 0.5);
  aux.Q = Q;
  aux.added = {B, -B};
  aux.base_class.tag = ClassTag::AssumedExact;
  SolveOptions so;
  so.tol = 1e-8;
  so.max_iter = 30000;
  RelaxSolution sol = solve_relaxation(aux, so);
  if (sol.status == SolveStatus::Infeasible) return BoundOutcome::EmptySet;
  if (sol.status == SolveStatus::Converged && sol.value >= -1e-7) return BoundOutcome::Certified;
  return BoundOutcome::Inconclusive;
}

/// Same bound for the z = 0 slice {u : u^T P u = 0}, normalized to tr = 1.
BoundOutcome slice_product_bound(const SymMat& P, int i, int j) {
  const int m = P.dim();
  Problem aux;
  aux.n = m;
  aux.cone = ConeKind::Psd;
  aux.H = SymMat::identity(m);
  SymMat Q(m);
  Q.set(std::max(i, j), std::min(i, j), i == j ? 1.0 : 0.5);
  aux.Q = Q;
  aux.added = {P, -P};
  aux.base_class.tag = ClassTag::AssumedExact;
  SolveOptions so;
  so.tol = 1e-8;
  so.max_iter = 30000;
  RelaxSolution sol = solve_relaxation(aux, so);
  if (sol.status == SolveStatus::Infeasible) return BoundOutcome::EmptySet;
  if (sol.status == SolveStatus::Converged && sol.value >= -1e-7) return BoundOutcome::Certified;
  return BoundOutcome::Inconclusive;
}

}  // namespace

ConditionReport check_c2_cone(const SymMat& B, ConeKind cone, const CheckOptions& opts) {
  ConditionReport rep;
  rep.seed = opts.seed;
  if (cone == ConeKind::Psd) {
    rep.verdict = Verdict::Certified;
    rep.notes = "vacuous for the PSD cone";
    return rep;
  }
  const int n = B.dim();
  const int m = n - 1;
  const QuadFunc qb = dehomogenize(B);
  Rng rng(opts.seed);
  const double margin = 1e-3;

  // sampling falsifier on B_= (lines) and the slice (circles)
  Eigen::VectorXd roots[2];
  for (int k = 0; k < opts.samples; ++k) {
    if (m >= 1) {
      // line a + s * dir through u-space
      const double radius = std::pow(10.0, rng.uniform(-1.0, 2.0));
      const Eigen::VectorXd a = radius * rng.normal_vec(m);
      const Eigen::VectorXd dir = rng.unit_vec(m);
      const double c2 = quad_form(qb.P, dir);
      const double c1 = 2.0 * (dir.dot(qb.P.dense() * a) + qb.p.dot(dir));
      const double c0 = qb.eval(a);
      double roots_s[2];
      int cnt = 0;
      if (std::abs(c2) > 1e-300) {
        const double disc = c1 * c1 - 4.0 * c2 * c0;
        if (disc >= 0.0) {
          const double sq = std::sqrt(disc);
          roots_s[cnt++] = (-c1 + sq) / (2.0 * c2);
          roots_s[cnt++] = (-c1 - sq) / (2.0 * c2);
        }
      } else if (std::abs(c1) > 1e-300) {
        roots_s[cnt++] = -c0 / c1;
      }
      for (int r = 0; r < cnt; ++r) {
        const Eigen::VectorXd u = a + roots_s[r] * dir;
        const double mg = margin * (1.0 + u.cwiseAbs().maxCoeff());
        if (std::abs(qb.eval(u)) <= 1e-7 * (1.0 + B.frobenius_norm() * u.squaredNorm()) &&
            mixed_signs(u, mg)) {
          Eigen::VectorXd x(n);
          x.head(m) = u;
          x(n - 1) = 1.0;
          rep.verdict = Verdict::Falsified;
          rep.witness = x;
          rep.samples_used = k + 1;
          rep.notes = "point of B_= outside both orthants";
          return rep;
        }
      }
    }
    if (m >= 2) {
      const Eigen::VectorXd v = rng.unit_vec(m);
      Eigen::VectorXd w = rng.unit_vec(m);
      w -= w.dot(v) * v;
      if (w.norm() < 1e-12) continue;
      w.normalize();
      const int cnt = circle_roots(qb.P, v, w, roots, 2);
      for (int r = 0; r < cnt; ++r) {
        const Eigen::VectorXd& u = roots[r];
        if (std::abs(quad_form(qb.P, u)) <= 1e-9 && mixed_signs(u, margin)) {
          Eigen::VectorXd x(n);
          x.head(m) = u;
          x(n - 1) = 0.0;
          rep.verdict = Verdict::Falsified;
          rep.witness = x;
          rep.samples_used = k + 1;
          rep.notes = "direction with u^T P u = 0 outside both orthants";
          return rep;
        }
      }
    }
  }
  rep.samples_used = opts.samples;

  // structural certificates
  bool level_ok = false, slice_ok = false;
  std::string how;
  EigDecomp pd = eig(qb.P);
  const double ptol = 1e-10 * (1.0 + qb.P.frobenius_norm());
  const bool p_posdef = pd.vals(0) > ptol;
  const bool p_negdef = pd.vals(m - 1) < -ptol;
  if (p_posdef || p_negdef) {
    slice_ok = true;  // u^T P u = 0 only at u = 0
    const QuadFunc q = p_posdef ? qb : QuadFunc{-1.0 * qb.P, -qb.p, -qb.rho};
    // q has PD block; level set of q is an ellipsoid boundary or empty
    const Eigen::MatrixXd Pinv = q.P.dense().inverse();
    const Eigen::VectorXd center = -Pinv * q.p;
    const double kappa = -q.eval(center);  // (u-c)^T P (u-c) = kappa on the set
    if (kappa < -1e-12 * (1.0 + std::abs(q.rho))) {
      level_ok = true;
      how = "level set empty (definite quadric)";
    } else {
      bool in_pos = true, in_neg = true;
      for (int i = 0; i < m; ++i) {
        const double ri = std::sqrt(std::max(kappa * Pinv(i, i), 0.0));
        if (center(i) - ri < -1e-9) in_pos = false;
        if (center(i) + ri > 1e-9) in_neg = false;
      }
      if (in_pos || in_neg) {
        level_ok = true;
        how = "interval bounds on the definite quadric";
      }
    }
  }
  if (!level_ok || !slice_ok) {
    bool lvl = true, slc = slice_ok;
    for (int i = 0; i < m && lvl; ++i)
      for (int j = i + 1; j < m && lvl; ++j)
        lvl = pair_product_bound(B, i, j) != BoundOutcome::Inconclusive;
    if (!slice_ok) {
      slc = true;
      for (int i = 0; i < m && slc; ++i)
        for (int j = i + 1; j < m && slc; ++j)
          slc = slice_product_bound(qb.P, i, j) != BoundOutcome::Inconclusive;
    }
    if (lvl && slc) {
      level_ok = slice_ok = true;
      how = how.empty() ? "relaxation lower bounds on pairwise products" : how;
    }
  }
  if (m == 1) {
    // 1-d never has mixed signs
    level_ok = slice_ok = true;
    how = "single variable";
  }
  if (level_ok && slice_ok) {
    rep.verdict = Verdict::Certified;
    rep.notes = how;
    return rep;
  }
  rep.verdict = Verdict::Unknown;
  rep.notes = "no counterexample in " + std::to_string(opts.samples) + " samples";
  return rep;
}

ConditionReport check_pencil(const SymMat& A, const SymMat& Ap, const CheckOptions& opts) {
  if (A.dim() != Ap.dim()) throw Error("check_pencil: dimension mismatch");
  ConditionReport rep;
  rep.seed = opts.seed;
  const int grid = 720;
  auto g = [&](double th) { return min_eig(std::cos(th) * A + std::sin(th) * Ap); };
  double best_th = 0.0, best = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < grid; ++k) {
    const double th = 2.0 * M_PI * k / grid;
    const double v = g(th);
    if (v > best) {
      best = v;
      best_th = th;
    }
  }
  // local refinement (g is not concave in theta; refine around the best cell)
  double lo = best_th - 2.0 * M_PI / grid, hi = best_th + 2.0 * M_PI / grid;
  const double gr = 0.6180339887498949;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = g(x1), f2 = g(x2);
  while (hi - lo > 1e-6) {
    if (f1 < f2) {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + gr * (hi - lo); f2 = g(x2);
    } else {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - gr * (hi - lo); f1 = g(x1);
    }
  }
  const double th = 0.5 * (lo + hi);
  const double val = g(th);
  if (val >= -1e-9) {
    rep.verdict = Verdict::Certified;
    rep.pencil = {std::cos(th), std::sin(th)};
    return rep;
  }
  // eigenvalue sweep Lipschitz bound: |g(t1)-g(t2)| <= L |t1-t2|
  const double L = std::hypot(A.frobenius_norm(), Ap.frobenius_norm());
  const double h = 2.0 * M_PI / grid;
  if (std::max(best, val) <= -(0.5 * h * L) - 1e-9) {
    rep.verdict = Verdict::Falsified;
    rep.notes = "sweep maximum " + std::to_string(std::max(best, val)) +
                " below the Lipschitz margin " + std::to_string(0.5 * h * L);
    return rep;
  }
  rep.verdict = Verdict::Unknown;
  rep.notes = "sweep maximum negative but within the Lipschitz margin";
  return rep;
}

bool check_not_affine(const SymMat& B, const std::optional<FaceSpec>& face) {
  const int n = B.dim();
  AffineRestriction ar = detail::l1_restriction(n, face);
  if (ar.empty) return false;
  const QuadFunc qb = dehomogenize(B);
  const Eigen::MatrixXd R = ar.W.transpose() * qb.P.dense() * ar.W;
  return R.norm() > 1e-10;
}

bool ConditionSet::any_falsified() const {
  for (const auto& e : entries)
    if (!e.informational && e.report.verdict == Verdict::Falsified) return true;
  return false;
}

Verdict ConditionSet::aggregate() const {
  if (any_falsified()) return Verdict::Falsified;
  // pair (i,j) passes when some route certified it
  bool all_ok = true;
  std::vector<std::pair<int, int>> pending;
  for (const auto& e : entries) {
    if (e.informational) continue;
    if (e.condition == "C1" || e.condition == "C2") {
      if (e.report.verdict != Verdict::Certified) all_ok = false;
    } else if (e.report.verdict != Verdict::Certified) {
      pending.push_back({e.i, e.j});
    }
  }
  for (auto [i, j] : pending) {
    bool covered = false;
    for (const auto& e : entries) {
      if (e.informational || e.i != i || e.j != j) continue;
      if ((e.condition == "C3" || e.condition == "C2-3''") &&
          e.report.verdict == Verdict::Certified)
        covered = true;
    }
    if (!covered) all_ok = false;
  }
  return all_ok ? Verdict::Certified : Verdict::Unknown;
}

}  // namespace exqp
