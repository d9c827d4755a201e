#pragma once

#include <functional>

#include "exqp/niqc.hpp"
#include "exqp/relax.hpp"

namespace exqp {

enum class SturmZhangMode { ZeroForm, NonNegForm };

/// Rotates a rank-1 decomposition so every piece's value on B matches the
/// total's sign: ZeroForm drives each x_i^T B x_i to zero (requires total
/// ~ 0), NonNegForm drives them nonnegative (requires total >= 0). The Gram
/// sum x_i x_i^T is preserved exactly by each rotation.
std::vector<Eigen::VectorXd> sturm_zhang_split(const std::vector<Eigen::VectorXd>& factors,
                                               const SymMat& B, SturmZhangMode mode,
                                               double tol = 1e-8);

/// lambda_hat = max { l in (0,1] : <B^k, l Xhat + (1-l) Xbar> >= 0 for all k }.
/// Requires <B^k, Xbar> > 0 for all k; returns 1 when Xhat is feasible.
double line_search_lambda(const SymMat& Xhat, const SymMat& Xbar,
                          const std::vector<SymMat>& Bs);

enum class LiftPath { AlreadyRank1, CaseI, CaseII };

const char* to_string(LiftPath p);

struct LiftResult {
  Eigen::VectorXd x;       // scaled so <H, xx^T> = 1
  double tau = 1.0;        // <H, x_j x_j^T> of the chosen factor before scaling
  int factor_count = 1;    // r of the decomposition the factor was chosen from
  LiftPath path = LiftPath::AlreadyRank1;
  std::optional<double> lambda_hat;
  double objective = 0.0;  // <Q, xx^T>
};

enum class LiftErrorKind { OracleFailed, NoValidFactor, KktNotSatisfied, BudgetExhausted };

class LiftError : public Error {
 public:
  LiftError(LiftErrorKind kind, const std::string& what) : Error(what), kind(kind) {}
  LiftErrorKind kind;
};

/// Returns a rank-1 base-optimal point (objective matches sol.value, feasible
/// for the base problem, <H, xx^T> = 1).
using ExactnessOracle =
    std::function<Eigen::VectorXd(const Problem& prob, const RelaxSolution& sol)>;

/// Constructive extraction of a rank-1 optimal solution from a KKT point of
/// the relaxation: case (i) splits the decomposition on an active added
/// constraint, case (ii) blends a rank-1 base optimum toward the iterate
/// until one activates.
LiftResult rank_one_lift(const Problem& prob, const RelaxSolution& sol,
                         const ExactnessOracle& oracle, double tol = 1e-7);

struct ClassCheck {
  bool ok = false;
  std::vector<std::string> reasons;
};

/// Validates the (C1) hypothesis behind the declared exactness class.
ClassCheck validate_class(const Problem& prob, const CheckOptions& opts = {});

// Per-class rank-1 base oracles. Each verifies its output (feasibility and
// objective match) before returning; failures throw LiftError.
Eigen::VectorXd oracle_convex(const Problem& prob, const RelaxSolution& sol);
Eigen::VectorXd oracle_sign_pattern(const Problem& prob, const RelaxSolution& sol);
Eigen::VectorXd oracle_rog_niqc(const Problem& prob, const RelaxSolution& sol, double tol = 1e-7);

struct SearchBudget {
  int starts = 64;
  int iters = 400;
  uint64_t seed = 20240001;
};

/// Verified rounding for classes without a constructive extraction:
/// multistart projected local search on the standard form, accepted only if
/// the objective matches sol.value within 1e-5 * (1 + |value|).
Eigen::VectorXd oracle_search_fallback(const Problem& prob, const RelaxSolution& sol,
                                       const SearchBudget& budget = {});

/// The oracle the class tag prescribes (with the rog->fallback chain where
/// the paper gives no constructive extraction).
ExactnessOracle class_oracle(const Problem& prob, const SearchBudget& budget = {});

struct ExactnessReport {
  bool exact = false;
  std::string failed_stage;  // empty when exact
  std::string message;
  ConditionSet conditions;
  SolveStatus solve_status = SolveStatus::MaxIter;
  double value = 0.0;
  KktResiduals residuals;
  Eigen::VectorXd x;
  double objective = 0.0;
  double objective_gap = 0.0;   // |<Q,xx^T> - value|
  double max_violation = 0.0;   // worst feasibility violation of x
  LiftPath path = LiftPath::AlreadyRank1;
  std::optional<double> lambda_hat;
  double tau = 1.0;
  int factor_count = 1;
  int iterations = 0;
  uint64_t seed = 0;
};

struct CertifyOptions {
  double tol = 1e-7;
  uint64_t seed = 20240001;
  int max_iter = 200000;
  double gap_tol_rel = 1e-5;   // |obj - value| <= gap_tol_rel * (1 + |value|)
  double feas_tol = 1e-6;
};

/// End-to-end pipeline: conditions -> relaxation -> KKT verification ->
/// rank-1 lift -> a-posteriori certificate. Exact only when every stage
/// passes (condition Unknowns are reported but do not block, since the
/// final point is verified directly).
ExactnessReport certify_exactness(const Problem& prob, const CertifyOptions& opts = {});

/// Worst violation of x against <H,xx^T>=1, constraints, cone and face.
double feasibility_violation(const Problem& prob, const Eigen::VectorXd& x);

}  // namespace exqp
