#include "exqp/lift.hpp"

#include <algorithm>
#include <cmath>

#include "exqp/cones.hpp"
#include "exqp/rng.hpp"

namespace exqp {

const char* to_string(LiftPath p) {
  switch (p) {
    case LiftPath::AlreadyRank1: return "already_rank1";
    case LiftPath::CaseI: return "case_i";
    case LiftPath::CaseII: return "case_ii";
  }
  return "already_rank1";
}

std::vector<Eigen::VectorXd> sturm_zhang_split(const std::vector<Eigen::VectorXd>& factors,
                                               const SymMat& B, SturmZhangMode mode,
                                               double tol) {
  if (factors.empty()) return {};
  const int n = static_cast<int>(factors.front().size());
  if (B.dim() != n) throw Error("sturm_zhang_split: dimension mismatch");
  std::vector<Eigen::VectorXd> fs = factors;
  double gram = 0.0;
  for (const auto& f : fs) gram += f.squaredNorm();
  const double scale = 1.0 + B.frobenius_norm() * gram;

  std::vector<double> vals(fs.size());
  auto form = [&](const Eigen::VectorXd& x) { return quad_form(B, x); };
  double total = 0.0;
  for (size_t i = 0; i < fs.size(); ++i) {
    vals[i] = form(fs[i]);
    total += vals[i];
  }
  if (mode == SturmZhangMode::ZeroForm && std::abs(total) > tol * scale)
    throw Error("sturm_zhang_split: ZeroForm requires <B, X> = 0 within tolerance");
  if (mode == SturmZhangMode::NonNegForm && total < -tol * scale)
    throw Error("sturm_zhang_split: NonNegForm requires <B, X> >= 0 within tolerance");

  const size_t max_rot = 4 * fs.size() + 8;
  for (size_t rot = 0; rot < max_rot; ++rot) {
    size_t imax = 0, imin = 0;
    for (size_t i = 1; i < fs.size(); ++i) {
      if (vals[i] > vals[imax]) imax = i;
      if (vals[i] < vals[imin]) imin = i;
    }
    const bool done = (mode == SturmZhangMode::ZeroForm)
                          ? (std::max(std::abs(vals[imax]), std::abs(vals[imin])) <= tol * scale)
                          : (vals[imin] >= -tol * scale);
    if (done) break;
    // an offending value can only be cancelled against one of the opposite
    // sign; with the precondition on the total such a partner exists
    if (vals[imax] <= 0.0 || vals[imin] >= 0.0) break;
    const double fi = vals[imax], fj = vals[imin];
    const double c = fs[imax].dot(B.dense() * fs[imin]);
    const double disc = std::sqrt(c * c - fi * fj);
    // roots of fj g^2 + 2 c g + fi = 0; pick the smaller magnitude, ties to +
    const double g1 = (-c + disc) / fj, g2 = (-c - disc) / fj;
    double g;
    if (std::abs(g1) < std::abs(g2)) g = g1;
    else if (std::abs(g2) < std::abs(g1)) g = g2;
    else g = std::max(g1, g2);
    const double den = std::sqrt(1.0 + g * g);
    const Eigen::VectorXd xi = fs[imax], xj = fs[imin];
    fs[imax] = (xi + g * xj) / den;
    fs[imin] = (xj - g * xi) / den;
    vals[imax] = form(fs[imax]);  // ~0 by construction
    vals[imin] = form(fs[imin]);
  }
  return fs;
}

double line_search_lambda(const SymMat& Xhat, const SymMat& Xbar,
                          const std::vector<SymMat>& Bs) {
  double lambda = 1.0;
  for (const SymMat& B : Bs) {
    const double bar = inner(B, Xbar);
    if (bar <= 0.0)
      throw Error("line_search_lambda: <B, Xbar> > 0 precondition violated");
    const double hat = inner(B, Xhat);
    if (hat < 0.0) lambda = std::min(lambda, bar / (bar - hat));
  }
  return lambda;
}

double feasibility_violation(const Problem& prob, const Eigen::VectorXd& x) {
  if (x.size() != prob.n) throw Error("feasibility_violation: dimension mismatch");
  double v = std::abs(quad_form(prob.H, x) - 1.0);
  for (const SymMat& A : prob.all_constraints())
    v = std::max(v, -quad_form(A, x));
  if (prob.cone != ConeKind::Psd) {
    // xx^T in DNN <=> x in R^n_+ u (-R^n_+)
    const double pos_vio = std::max(0.0, -x.minCoeff());
    const double neg_vio = std::max(0.0, x.maxCoeff());
    v = std::max(v, std::min(pos_vio, neg_vio));
  }
  if (prob.face) v = std::max(v, std::abs(quad_form(prob.face->F, x)));
  return std::max(v, 0.0);
}

namespace {

/// Canonical sign: nonnegative orthant if one fits, else positive last entry.
Eigen::VectorXd canonical_sign(Eigen::VectorXd x) {
  const double mx = x.maxCoeff(), mn = x.minCoeff();
  if (std::abs(mn) > mx) return -x;
  if (mx > std::abs(mn)) return x;
  return x[x.size() - 1] >= 0 ? x : -x;
}

struct Accept {
  bool ok = false;
  std::string why;
};

Accept acceptable_point(const Problem& prob, const RelaxSolution& sol,
                        const Eigen::VectorXd& x, double tol) {
  Accept a;
  const double feas = feasibility_violation(prob, x);
  const double feas_tol = std::max(1e-6, 10.0 * tol);
  if (feas > feas_tol) {
    a.why = "feasibility violation " + std::to_string(feas);
    return a;
  }
  const double obj = quad_form(prob.Q, x);
  const double band = 1e-6 * (1.0 + std::abs(sol.value));
  if (std::abs(obj - sol.value) > std::max(band, 10.0 * tol * (1.0 + std::abs(sol.value)))) {
    a.why = "objective " + std::to_string(obj) + " off the relaxation value " +
            std::to_string(sol.value);
    return a;
  }
  // complementarity with the relaxation duals
  const std::vector<SymMat> cons = prob.all_constraints();
  double comp = 0.0;
  for (size_t k = 0; k < cons.size(); ++k) comp += sol.y[static_cast<int>(k)] * quad_form(cons[k], x);
  const double comp_scale = 1.0 + (sol.y.size() ? sol.y.cwiseAbs().maxCoeff() : 0.0);
  if (std::abs(comp) > 100.0 * tol * comp_scale) {
    a.why = "constraint complementarity " + std::to_string(comp);
    return a;
  }
  const double yc = quad_form(sol.Y, x);
  if (std::abs(yc) > 100.0 * tol * (1.0 + sol.Y.frobenius_norm())) {
    a.why = "cone complementarity " + std::to_string(yc);
    return a;
  }
  a.ok = true;
  return a;
}

}  // namespace

LiftResult rank_one_lift(const Problem& prob, const RelaxSolution& sol,
                         const ExactnessOracle& oracle, double tol) {
  prob.validate();
  {
    const KktResiduals res = kkt_residuals(prob, sol);
    if (res.max() > 10.0 * tol)
      throw LiftError(LiftErrorKind::KktNotSatisfied,
                      "rank_one_lift: KKT residuals " + std::to_string(res.max()) +
                          " exceed tolerance");
  }
  const std::vector<SymMat>& Bs = prob.added;
  const size_t m = Bs.size();

  SymMat Xcur = sol.X;
  std::optional<double> lambda_hat;
  bool blended = false;

  for (size_t round = 0; round <= m + 1; ++round) {
    std::vector<Eigen::VectorXd> factors = rank1_factors(Xcur, 1e-8 * std::max(max_eig(Xcur), 0.0));
    const int r = static_cast<int>(factors.size());
    if (r == 0)
      throw LiftError(LiftErrorKind::NoValidFactor, "rank_one_lift: iterate is numerically zero");

    if (r == 1) {
      const double tau = quad_form(prob.H, factors[0]);
      if (tau <= tol)
        throw LiftError(LiftErrorKind::NoValidFactor,
                        "rank_one_lift: rank-1 iterate has nonpositive H-weight");
      Eigen::VectorXd x = canonical_sign(factors[0] / std::sqrt(tau));
      Accept acc = acceptable_point(prob, sol, x, tol);
      if (!acc.ok)
        throw LiftError(LiftErrorKind::NoValidFactor, "rank_one_lift: " + acc.why);
      return LiftResult{x, tau, 1, blended ? LiftPath::CaseII : LiftPath::AlreadyRank1,
                        lambda_hat, quad_form(prob.Q, x)};
    }

    // active added constraints at the current iterate
    std::vector<std::pair<double, int>> active;
    const double xn = Xcur.frobenius_norm();
    for (size_t p = 0; p < m; ++p) {
      const double v = inner(Bs[p], Xcur);
      if (v <= 1e-7 * (1.0 + Bs[p].frobenius_norm() * xn)) active.push_back({v, static_cast<int>(p)});
    }
    std::sort(active.begin(), active.end(),
              [](const auto& a, const auto& b) { return std::abs(a.first) < std::abs(b.first); });

    if (!active.empty()) {
      // case (i): zero-form split on an active constraint, then pick a factor
      // with tau >= 1/r (several active constraints: take the numerically
      // safest that yields a verified factor)
      std::string last_err = "no active constraint produced a valid factor";
      for (const auto& [val, p] : active) {
        std::vector<Eigen::VectorXd> ys;
        try {
          ys = sturm_zhang_split(factors, Bs[static_cast<size_t>(p)], SturmZhangMode::ZeroForm,
                                 std::max(1e-8, tol));
        } catch (const Error& e) {
          last_err = e.what();
          continue;
        }
        std::vector<std::pair<double, size_t>> taus;
        for (size_t i = 0; i < ys.size(); ++i) {
          const double tau = quad_form(prob.H, ys[i]);
          if (tau >= 1.0 / r - 1e-9) taus.push_back({tau, i});
        }
        std::sort(taus.begin(), taus.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
        for (const auto& [tau, i] : taus) {
          Eigen::VectorXd x = canonical_sign(ys[i] / std::sqrt(tau));
          Accept acc = acceptable_point(prob, sol, x, tol);
          if (acc.ok)
            return LiftResult{x, tau, r, blended ? LiftPath::CaseII : LiftPath::CaseI,
                              lambda_hat, quad_form(prob.Q, x)};
          last_err = acc.why;
        }
      }
      throw LiftError(LiftErrorKind::NoValidFactor,
                      "rank_one_lift: " + last_err + " (r=" + std::to_string(r) + ")");
    }

    // case (ii): all added constraints strictly inactive; bring in a rank-1
    // base optimum and blend toward the iterate until one activates
    if (blended)
      throw LiftError(LiftErrorKind::NoValidFactor,
                      "rank_one_lift: blend failed to activate a constraint");
    Eigen::VectorXd xhat;
    try {
      xhat = oracle(prob, sol);
    } catch (const LiftError&) {
      throw;
    } catch (const Error& e) {
      throw LiftError(LiftErrorKind::OracleFailed, std::string("rank_one_lift: oracle: ") + e.what());
    }
    const double tau_hat = quad_form(prob.H, xhat);
    if (!(tau_hat > 0.0))
      throw LiftError(LiftErrorKind::OracleFailed, "rank_one_lift: oracle point has <H,xx^T> <= 0");
    xhat /= std::sqrt(tau_hat);
    const double obj_hat = quad_form(prob.Q, xhat);
    if (std::abs(obj_hat - sol.value) > 1e-5 * (1.0 + std::abs(sol.value)))
      throw LiftError(LiftErrorKind::OracleFailed,
                      "rank_one_lift: oracle objective " + std::to_string(obj_hat) +
                          " does not match the relaxation value " + std::to_string(sol.value));

    double worst = 0.0;
    for (const SymMat& B : Bs) worst = std::min(worst, quad_form(B, xhat));
    if (worst >= -tol * (1.0 + xhat.squaredNorm())) {
      Eigen::VectorXd x = canonical_sign(xhat);
      Accept acc = acceptable_point(prob, sol, x, tol);
      if (!acc.ok) throw LiftError(LiftErrorKind::NoValidFactor, "rank_one_lift: " + acc.why);
      return LiftResult{x, tau_hat, 1, LiftPath::CaseII, 1.0, quad_form(prob.Q, x)};
    }
    const SymMat Xhat = rank1(xhat);
    const double lam = line_search_lambda(Xhat, Xcur, Bs);
    lambda_hat = lam;
    Xcur = lam * Xhat + (1.0 - lam) * Xcur;
    blended = true;
  }
  throw LiftError(LiftErrorKind::NoValidFactor, "rank_one_lift: blend budget exhausted");
}

// ---------------------------------------------------------------------------
// class validation

namespace {

bool offdiag_nonpositive(const SymMat& M, double tol) {
  for (int i = 0; i < M.dim(); ++i)
    for (int j = 0; j < i; ++j)
      if (M(i, j) > tol) return false;
  return true;
}

}  // namespace

ClassCheck validate_class(const Problem& prob, const CheckOptions& opts) {
  ClassCheck out;
  out.ok = true;
  auto fail = [&](const std::string& r) {
    out.ok = false;
    out.reasons.push_back(r);
  };
  switch (prob.base_class.tag) {
    case ClassTag::RogRank2: {
      const Eigen::VectorXd& a = *prob.base_class.anchor;
      const double s = a.squaredNorm();
      if (s < 1e-14) {
        fail("anchor vector is zero");
        break;
      }
      for (size_t k = 0; k < prob.base.size(); ++k) {
        const Eigen::MatrixXd A = prob.base[k].dense();
        const Eigen::VectorXd Aa = A * a;
        const Eigen::VectorXd d = (Aa - a * (a.dot(Aa) / (2.0 * s))) / s;
        const double res = (A - a * d.transpose() - d * a.transpose()).norm();
        if (res > 1e-9 * (1.0 + A.norm()))
          fail("base constraint " + std::to_string(k) + " is not a d a^T + a d^T matrix");
      }
      break;
    }
    case ClassTag::Convex: {
      const QuadFunc q = dehomogenize(prob.Q);
      if (min_eig(q.P) < -1e-9 * (1.0 + q.P.frobenius_norm()))
        fail("objective quadratic block is not PSD");
      for (size_t k = 0; k < prob.base.size(); ++k) {
        const QuadFunc qa = dehomogenize(prob.base[k]);
        if (max_eig(qa.P) > 1e-9 * (1.0 + qa.P.frobenius_norm()))
          fail("constraint " + std::to_string(k) + " is not concave (its negation not convex)");
      }
      break;
    }
    case ClassTag::SignPattern: {
      if (!offdiag_nonpositive(prob.Q, 1e-12)) fail("objective has a positive off-diagonal entry");
      for (size_t k = 0; k < prob.base.size(); ++k) {
        SymMat negA = -1.0 * prob.base[k];
        if (!offdiag_nonpositive(negA, 1e-12))
          fail("constraint " + std::to_string(k) + " violates the sign pattern");
      }
      break;
    }
    case ClassTag::SubmodularBox: {
      const int m = prob.n - 1;
      if ((prob.H - h1_matrix(prob.n)).max_abs() > 1e-12) fail("H must be H1");
      size_t idx = 0;
      bool family_ok = prob.base.size() == static_cast<size_t>(m * (m + 1) / 2);
      if (family_ok) {
        for (int p = 0; p < m && family_ok; ++p)
          for (int q = p; q < m && family_ok; ++q, ++idx)
            family_ok = (prob.base[idx] - submodular_constraint(p, q, prob.n)).max_abs() <= 1e-12;
      }
      if (!family_ok) fail("base constraints are not the box family A^{pq}");
      const QuadFunc qq = dehomogenize(prob.Q);
      if (!offdiag_nonpositive(qq.P, 1e-12)) fail("C has a positive off-diagonal entry");
      break;
    }
    case ClassTag::CombinatorialFace: {
      if (prob.cone == ConeKind::Psd) {
        fail("combinatorial face class requires the DNN or CPP cone");
        break;
      }
      for (size_t k = 0; k < prob.base.size(); ++k) {
        SymMat negA = -1.0 * prob.base[k];
        if (!dnn_dual_membership(negA, 1e-9))
          fail("could not verify -A_" + std::to_string(k) + " in (DN^n)*");
      }
      break;
    }
    case ClassTag::StdQp: {
      if ((prob.H - ones_matrix(prob.n)).max_abs() > 1e-12) fail("H must be ee^T");
      if (prob.cone == ConeKind::Psd) fail("stdqp class requires the DNN or CPP cone");
      if (!prob.base.empty()) fail("stdqp class requires an empty base constraint set");
      const StdQpClassReport rep = stdqp_class(prob.Q);
      switch (*prob.base_class.subclass) {
        case StdQpSub::Q1:
          if (!rep.q1) fail("Q is not in Q^1");
          break;
        case StdQpSub::Concave:
          if (!rep.concave) fail("Q is not concave on e^perp");
          break;
        case StdQpSub::Convex:
          if (!rep.convex) fail("Q is not convex on e^perp");
          break;
      }
      break;
    }
    case ClassTag::RogNiqcBase: {
      for (size_t i = 0; i < prob.base.size(); ++i)
        for (size_t j = 0; j < prob.base.size(); ++j) {
          if (i == j) continue;
          ConditionReport rep = check_j0_subset_jplus(prob.base[i], prob.base[j], prob.face, opts);
          if (rep.verdict != Verdict::Certified)
            fail("base pair (" + std::to_string(i) + "," + std::to_string(j) +
                 ") lacks a NIQC certificate");
        }
      break;
    }
    case ClassTag::AssumedExact:
      break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// oracles

Eigen::VectorXd oracle_convex(const Problem& prob, const RelaxSolution& sol) {
  if ((prob.H - h1_matrix(prob.n)).max_abs() > 1e-12)
    throw LiftError(LiftErrorKind::OracleFailed, "oracle_convex: requires H = H1");
  const int n = prob.n;
  Eigen::VectorXd x(n);
  for (int i = 0; i + 1 < n; ++i) x[i] = sol.X(i, n - 1);
  x[n - 1] = 1.0;
  for (size_t k = 0; k < prob.base.size(); ++k)
    if (quad_form(prob.base[k], x) < -1e-6 * (1.0 + prob.base[k].frobenius_norm()))
      throw LiftError(LiftErrorKind::OracleFailed,
                      "oracle_convex: column point infeasible for base constraint " +
                          std::to_string(k));
  const double obj = quad_form(prob.Q, x);
  if (obj > sol.value + 1e-6 * (1.0 + std::abs(sol.value)))
    throw LiftError(LiftErrorKind::OracleFailed,
                    "oracle_convex: column point exceeds the relaxation value");
  return x;
}

Eigen::VectorXd oracle_sign_pattern(const Problem& prob, const RelaxSolution& sol) {
  if ((prob.H - h1_matrix(prob.n)).max_abs() > 1e-12)
    throw LiftError(LiftErrorKind::OracleFailed, "oracle_sign_pattern: requires H = H1");
  const int n = prob.n;
  Eigen::VectorXd x(n);
  for (int i = 0; i + 1 < n; ++i) x[i] = std::sqrt(std::max(sol.X(i, i), 0.0));
  x[n - 1] = 1.0;
  for (size_t k = 0; k < prob.base.size(); ++k)
    if (quad_form(prob.base[k], x) <
        inner(prob.base[k], sol.X) - 1e-6 * (1.0 + prob.base[k].frobenius_norm()))
      throw LiftError(LiftErrorKind::OracleFailed,
                      "oracle_sign_pattern: sqrt-diagonal point lost constraint " +
                          std::to_string(k));
  const double obj = quad_form(prob.Q, x);
  if (obj > sol.value + 1e-6 * (1.0 + std::abs(sol.value)))
    throw LiftError(LiftErrorKind::OracleFailed,
                    "oracle_sign_pattern: sqrt-diagonal point exceeds the relaxation value");
  return x;
}

Eigen::VectorXd oracle_rog_niqc(const Problem& prob, const RelaxSolution& sol, double tol) {
  Problem base = prob;
  base.base.clear();
  base.added = prob.base;
  base.base_class = ExactnessClass{ClassTag::AssumedExact, std::nullopt, std::nullopt};
  SolveOptions so;
  so.tol = std::min(tol, 1e-7);
  RelaxSolution bsol = solve_relaxation(base, so);
  if (bsol.status != SolveStatus::Converged)
    throw LiftError(LiftErrorKind::OracleFailed,
                    std::string("oracle_rog_niqc: base relaxation did not converge (") +
                        to_string(bsol.status) + ")");
  if (std::abs(bsol.value - sol.value) > 1e-5 * (1.0 + std::abs(sol.value)))
    throw LiftError(LiftErrorKind::OracleFailed,
                    "oracle_rog_niqc: base value " + std::to_string(bsol.value) +
                        " differs from the extended value " + std::to_string(sol.value));
  // plain eigen-factor pick for the unconstrained base of the recursion
  ExactnessOracle eigen_pick = [](const Problem& p, const RelaxSolution& s) -> Eigen::VectorXd {
    std::vector<Eigen::VectorXd> fs = rank1_factors(s.X);
    double best_tau = 0.0;
    Eigen::VectorXd best;
    for (const auto& f : fs) {
      const double tau = quad_form(p.H, f);
      if (tau > best_tau) {
        best_tau = tau;
        best = f;
      }
    }
    if (best_tau <= 0.0)
      throw LiftError(LiftErrorKind::OracleFailed, "eigen pick: no factor with positive H-weight");
    return best / std::sqrt(best_tau);
  };
  LiftResult lr = rank_one_lift(base, bsol, eigen_pick, tol);
  return lr.x;
}

namespace {

Eigen::VectorXd project_simplex(Eigen::VectorXd v) {
  // Euclidean projection onto {x >= 0, sum x = 1}
  const int n = static_cast<int>(v.size());
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0, theta = 0.0;
  int rho = 0;
  for (int i = 0; i < n; ++i) {
    css += u[static_cast<size_t>(i)];
    const double t = (css - 1.0) / (i + 1);
    if (u[static_cast<size_t>(i)] - t > 0) {
      rho = i + 1;
      theta = t;
    }
  }
  for (int i = 0; i < n; ++i) v[i] = std::max(v[i] - theta, 0.0);
  return v;
}

/// Projected descent on a quadratic with backtracking; proj must be the
/// Euclidean projection onto the feasible set.
Eigen::VectorXd projected_descent(const QuadFunc& q, Eigen::VectorXd u,
                                  const std::function<Eigen::VectorXd(Eigen::VectorXd)>& proj,
                                  int iters) {
  u = proj(u);
  double step = 1.0 / (1.0 + q.P.frobenius_norm());
  const Eigen::MatrixXd P = q.P.dense();
  for (int it = 0; it < iters; ++it) {
    const Eigen::VectorXd g = 2.0 * (P * u + q.p);
    bool moved = false;
    double s = step;
    const double f0 = q.eval(u);
    for (int bt = 0; bt < 30; ++bt) {
      Eigen::VectorXd un = proj(u - s * g);
      if (q.eval(un) < f0 - 1e-15 * (1.0 + std::abs(f0))) {
        u = un;
        step = s * 1.3;
        moved = true;
        break;
      }
      s *= 0.5;
    }
    if (!moved) break;
  }
  return u;
}

}  // namespace

Eigen::VectorXd oracle_search_fallback(const Problem& prob, const RelaxSolution& sol,
                                       const SearchBudget& budget) {
  if (budget.starts <= 0 || budget.iters <= 0)
    throw LiftError(LiftErrorKind::BudgetExhausted, "oracle_search_fallback: zero budget");
  const int n = prob.n;
  Rng rng(budget.seed);
  const double accept_tol = 1e-5 * (1.0 + std::abs(sol.value));

  const bool simplex = (prob.H - ones_matrix(n)).max_abs() <= 1e-12;
  const bool h1 = (prob.H - h1_matrix(n)).max_abs() <= 1e-12;
  if (!simplex && !h1)
    throw LiftError(LiftErrorKind::OracleFailed,
                    "oracle_search_fallback: supports H = H1 or H = ee^T normalizations");

  const bool box = prob.base_class.tag == ClassTag::SubmodularBox;
  const bool nonneg = prob.cone != ConeKind::Psd;

  auto try_candidate = [&](const Eigen::VectorXd& x) -> bool {
    return std::abs(quad_form(prob.Q, x) - sol.value) <= accept_tol &&
           feasibility_violation(prob, x) <= 1e-6 * (1.0 + x.squaredNorm());
  };

  if (simplex) {
    const QuadFunc q{prob.Q, Eigen::VectorXd::Zero(n), 0.0};
    for (int s = 0; s < budget.starts; ++s) {
      Eigen::VectorXd x0(n);
      if (s < n) {
        x0.setZero();
        x0[s] = 1.0;  // vertices first
      } else {
        for (int i = 0; i < n; ++i) x0[i] = rng.uniform();
      }
      Eigen::VectorXd x = projected_descent(q, x0, project_simplex, budget.iters);
      if (try_candidate(x)) return x;
    }
    throw LiftError(LiftErrorKind::BudgetExhausted,
                    "oracle_search_fallback: no simplex point matches the relaxation value");
  }

  // H = H1: search in u with x = (u; 1)
  const QuadFunc q = dehomogenize(prob.Q);
  const int m = n - 1;

  std::function<Eigen::VectorXd(Eigen::VectorXd)> proj;
  if (box)
    proj = [m](Eigen::VectorXd u) {
      for (int i = 0; i < m; ++i) u[i] = std::min(std::max(u[i], 0.0), 1.0);
      return u;
    };
  else if (nonneg)
    proj = [m](Eigen::VectorXd u) {
      for (int i = 0; i < m; ++i) u[i] = std::max(u[i], 0.0);
      return u;
    };
  else
    proj = [](Eigen::VectorXd u) { return u; };

  const double spread = box ? 1.0 : 2.0 * (1.0 + std::sqrt(std::abs(sol.value)));
  for (int s = 0; s < budget.starts; ++s) {
    Eigen::VectorXd u0(m);
    if (box && s < (1 << std::min(m, 16))) {
      for (int i = 0; i < m; ++i) u0[i] = (s >> i) & 1 ? 1.0 : 0.0;  // corners
    } else {
      for (int i = 0; i < m; ++i) u0[i] = rng.uniform(0.0, spread);
      if (!nonneg && !box) u0 = spread * rng.normal_vec(m);
    }
    Eigen::VectorXd u = u0;
    if (prob.base.empty()) {
      u = projected_descent(q, u, proj, budget.iters);
    } else {
      // penalty rounds for the base constraints
      for (double beta : {1e2, 1e4, 1e6}) {
        for (int it = 0; it < budget.iters; ++it) {
          Eigen::VectorXd x(n);
          x.head(m) = u;
          x[m] = 1.0;
          Eigen::VectorXd g = 2.0 * (q.P.dense() * u + q.p);
          for (const SymMat& A : prob.base) {
            const double v = quad_form(A, x);
            if (v < 0) {
              const QuadFunc qa = dehomogenize(A);
              g += 2.0 * beta * v * (2.0 * (qa.P.dense() * u + qa.p));
            }
          }
          const double gn = g.norm();
          if (gn < 1e-12) break;
          u = proj(u - (0.2 / (1.0 + gn)) * g);
        }
      }
    }
    Eigen::VectorXd x(n);
    x.head(m) = u;
    x[m] = 1.0;
    if (try_candidate(x)) return x;
  }
  throw LiftError(LiftErrorKind::BudgetExhausted,
                  "oracle_search_fallback: no point matched the relaxation value within budget");
}

ExactnessOracle class_oracle(const Problem& prob, const SearchBudget& budget) {
  switch (prob.base_class.tag) {
    case ClassTag::Convex:
      return [](const Problem& p, const RelaxSolution& s) { return oracle_convex(p, s); };
    case ClassTag::SignPattern:
      return [](const Problem& p, const RelaxSolution& s) { return oracle_sign_pattern(p, s); };
    case ClassTag::RogRank2:
    case ClassTag::RogNiqcBase:
      // no constructive extraction for the rank-2 class itself; try the
      // ROG recursion first and fall back to verified search
      return [budget](const Problem& p, const RelaxSolution& s) -> Eigen::VectorXd {
        try {
          return oracle_rog_niqc(p, s);
        } catch (const LiftError&) {
          return oracle_search_fallback(p, s, budget);
        }
      };
    default:
      return [budget](const Problem& p, const RelaxSolution& s) {
        return oracle_search_fallback(p, s, budget);
      };
  }
}

ExactnessReport certify_exactness(const Problem& prob, const CertifyOptions& opts) {
  ExactnessReport rep;
  rep.seed = opts.seed;
  prob.validate();

  CheckOptions copts;
  copts.seed = opts.seed;
  rep.conditions = check_all_conditions(prob, copts);
  if (rep.conditions.aggregate() == Verdict::Falsified) {
    rep.failed_stage = "conditions";
    rep.message = "a condition is falsified";
    return rep;
  }

  SolveOptions so;
  so.tol = opts.tol;
  so.max_iter = opts.max_iter;
  RelaxSolution sol = solve_relaxation(prob, so);
  rep.solve_status = sol.status;
  rep.value = sol.value;
  rep.iterations = sol.iterations;
  rep.residuals = sol.residuals;
  if (sol.status != SolveStatus::Converged) {
    rep.failed_stage = "solve";
    rep.message = std::string("relaxation solve: ") + to_string(sol.status);
    return rep;
  }

  const KktResiduals res = kkt_residuals(prob, sol);
  rep.residuals = res;
  if (res.max() > 10.0 * opts.tol) {
    rep.failed_stage = "kkt";
    rep.message = "KKT residuals above tolerance: " + std::to_string(res.max());
    return rep;
  }

  SearchBudget budget;
  budget.seed = opts.seed;
  LiftResult lr;
  try {
    lr = rank_one_lift(prob, sol, class_oracle(prob, budget), opts.tol);
  } catch (const LiftError& e) {
    rep.failed_stage = "lift";
    rep.message = e.what();
    return rep;
  }
  rep.x = lr.x;
  rep.objective = lr.objective;
  rep.path = lr.path;
  rep.lambda_hat = lr.lambda_hat;
  rep.tau = lr.tau;
  rep.factor_count = lr.factor_count;
  rep.objective_gap = std::abs(lr.objective - sol.value);
  rep.max_violation = feasibility_violation(prob, lr.x);

  if (rep.objective_gap > opts.gap_tol_rel * (1.0 + std::abs(sol.value))) {
    rep.failed_stage = "verify";
    rep.message = "objective gap " + std::to_string(rep.objective_gap) + " above tolerance";
    return rep;
  }
  if (rep.max_violation > opts.feas_tol) {
    rep.failed_stage = "verify";
    rep.message = "feasibility violation " + std::to_string(rep.max_violation) + " above tolerance";
    return rep;
  }
  rep.exact = true;
  return rep;
}

}  // namespace exqp
