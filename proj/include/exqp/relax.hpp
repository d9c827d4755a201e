#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "exqp/model.hpp"

namespace exqp {

enum class SolveStatus { Converged, MaxIter, Infeasible, Unbounded };

const char* to_string(SolveStatus s);

/// Residuals of the KKT system for the relaxation, all nonnegative:
///   primal: <H,X> = 1, <A_k,X> >= 0, X in cone (and face);
///   dual:   Q - H t - sum_k y_k A_k = Y in the dual cone, y >= 0;
///   complementarity: sum_k y_k <A_k,X> = 0, <Y,X> = 0.
struct KktResiduals {
  double primal_eq = 0.0;
  double primal_ineq = 0.0;
  double primal_cone = 0.0;
  double dual_eq = 0.0;
  double dual_cone = 0.0;
  double comp_ineq = 0.0;
  double comp_cone = 0.0;
  double gap = 0.0;

  double max() const;
  double sum_squares() const;
};

struct RelaxSolution {
  SolveStatus status = SolveStatus::MaxIter;
  double value = std::numeric_limits<double>::quiet_NaN();  // <Q,X>; +-inf on infeasible/unbounded
  SymMat X;
  double t = 0.0;          // dual of <H,X> = 1
  Eigen::VectorXd y;       // duals of <A_k,X> >= 0, k over base then added
  SymMat Y;                // cone dual slack (includes the face multiplier part)
  KktResiduals residuals;
  int iterations = 0;
};

struct SolveOptions {
  double tol = 1e-7;
  int max_iter = 200000;
  double rho = 1.0;            // ADMM penalty, adapted during the run
  double over_relax = 1.5;
  int check_every = 50;        // KKT residual cadence
  int divergence_window = 5000;
  /// Called after each accepted (merit-improving) step with the merit value.
  std::function<void(int iter, double merit)> on_accept;
};

/// Solves COP(K cap J_+(base u added), Q, H): minimize <Q,X> subject to
/// <H,X> = 1, <A,X> >= 0, X in K (PSD, or DNN via entrywise rows; CPP is
/// mapped to DNN for n <= 4) and <F,X> = 0 when a face is present.
/// First-order operator splitting on the dual with over-relaxation,
/// residual-balancing penalty adaptation and best-iterate tracking.
RelaxSolution solve_relaxation(const Problem& prob, const SolveOptions& opts = {});

/// Recomputes every KKT residual from scratch for the given quadruple
/// (X, t, y, Y); independent of solver internals.
KktResiduals kkt_residuals(const Problem& prob, const RelaxSolution& sol);

}  // namespace exqp
