#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "exqp/model.hpp"

namespace exqp {

enum class Verdict { Certified, Falsified, Unknown };

const char* to_string(Verdict v);

/// Tri-state outcome of one NIQC-type check. Certified carries a multiplier
/// that re-verifies by min_eig; Falsified carries a point that re-verifies
/// by eval_quad.
struct ConditionReport {
  Verdict verdict = Verdict::Unknown;
  std::optional<double> mu;                              // single-multiplier certificate
  std::optional<std::pair<double, double>> pencil;       // (alpha, alpha')
  std::optional<Eigen::VectorXd> witness;
  int samples_used = 0;
  uint64_t seed = 0;
  std::string notes;
};

struct CheckOptions {
  uint64_t seed = 20240001;
  int samples = 10000;
};

/// J_0(B) subseteq J_+(B') on the face: certified by mu with
/// B' + mu B >= -1e-9, falsified by unit x with x^T B x = 0 and
/// x^T B' x <= -1e-6. This is condition (C3) for a pair.
ConditionReport check_j0_subset_jplus(const SymMat& B, const SymMat& Bp,
                                      const std::optional<FaceSpec>& face = std::nullopt,
                                      const CheckOptions& opts = {});

/// Non-homogenized pair condition: emptyset != L1(F) cap B_<= subseteq
/// L1(F) cap B'_>=. Nonemptiness is decided analytically (quadratic
/// minimum); the inclusion is certified by an S-procedure multiplier
/// lambda >= 0 on the homogenized restrictions.
ConditionReport check_c23_nonhomog(const SymMat& B, const SymMat& Bp,
                                   const std::optional<FaceSpec>& face = std::nullopt,
                                   const CheckOptions& opts = {});

/// Cone-membership condition J_0(B) subseteq K for K in {DNN, CPP}, decided
/// through the level-set/orthant characterization: B_= and the z = 0 slice
/// both inside R_+ u (-R_+). Vacuously certified for PSD. Never certifies
/// from sampling alone; structural certificates are interval bounds on a
/// definite quadric or relaxation lower bounds on pairwise products u_i u_j.
ConditionReport check_c2_cone(const SymMat& B, ConeKind cone, const CheckOptions& opts = {});

/// Pencil condition: exists (alpha, alpha') != 0 with
/// alpha A + alpha' A' PSD. Falsified only with a Lipschitz-margin sweep.
ConditionReport check_pencil(const SymMat& A, const SymMat& Ap, const CheckOptions& opts = {});

/// True iff q(., B) restricted to L1(F) has a nonvanishing quadratic term.
bool check_not_affine(const SymMat& B, const std::optional<FaceSpec>& face = std::nullopt);

struct LabeledReport {
  std::string condition;  // "C1", "C2", "C3", "C2-3''", "C3-redundant"
  int i = -1;             // index into added (B)
  int j = -1;             // index into base+added (B')
  bool informational = false;
  ConditionReport report;
};

struct ConditionSet {
  std::vector<LabeledReport> entries;

  bool any_falsified() const;
  /// Certified / Falsified / Unknown across all required entries; a pair
  /// passes when either its homogenized or its non-homogenized route is
  /// certified.
  Verdict aggregate() const;
};

/// Runs (C1) class validation, (C2) per added constraint, (C3) over ordered
/// added pairs and the non-homogenized route against base u added.
ConditionSet check_all_conditions(const Problem& prob, const CheckOptions& opts = {});

// internal helpers shared with tests
namespace detail {
/// Affine parametrization u = u0 + W z of L1(F); empty when F(u;1)=0 has no
/// solution. Without a face u0 = 0, W = I.
struct AffineRestriction {
  bool empty = false;
  Eigen::VectorXd u0;
  Eigen::MatrixXd W;
};
AffineRestriction l1_restriction(int n, const std::optional<FaceSpec>& face);
/// T^T M T for T = [[W, u0], [0, 1]] (hom matrix of q(., M) on u0 + W z).
SymMat restrict_hom(const SymMat& M, const AffineRestriction& ar);
/// Maximizes min_eig(Bp + mu B) over mu in [lo, hi] (concave); returns
/// (mu*, value).
std::pair<double, double> max_min_eig(const SymMat& B, const SymMat& Bp, double lo, double hi);
/// Analytic minimum of a quadratic q: value (or -inf) and a point with
/// q(point) <= value + tol when the value is finite, else a point on a
/// descent ray with q <= 0 when reachable.
struct QuadMin {
  bool bounded = true;
  double value = 0.0;
  Eigen::VectorXd arg;
};
QuadMin minimize_quad(const QuadFunc& q);
}  // namespace detail

}  // namespace exqp
