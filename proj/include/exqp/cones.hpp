#pragma once

#include <optional>

#include "exqp/model.hpp"

namespace exqp {

/// A = S + N with S PSD and N entrywise nonnegative, up to residual.
struct DualSplit {
  SymMat S;
  SymMat N;
  double residual = 0.0;
};

/// Best split of A against S^n_+ + N^n found by alternating minimization of
/// ||A - S - N||_F over the two blocks.
DualSplit dnn_split(const SymMat& A, int max_iter = 50000);

/// Searches for A in (DN^n)* = S^n_+ + N^n. Membership is only asserted
/// positively: nullopt means "not found within budget", not "not a member".
std::optional<DualSplit> dnn_dual_membership(const SymMat& A, double tol = 1e-9,
                                             int max_iter = 50000);

/// CP^n = DN^n for n <= 4: PSD plus entrywise nonnegative. Throws for n > 4.
bool cpp_small(const SymMat& X, double tol = 1e-9);

struct StdQpClassReport {
  bool q1 = false;
  bool concave = false;
  bool convex = false;
};

/// Classifies Q against the simplex-exactness classes: Q^1 (min entry is
/// attained on the diagonal), Q^concave / Q^convex (form sign on e^perp).
StdQpClassReport stdqp_class(const SymMat& Q);

/// Orthonormal basis of {d : e^T d = 0} as columns (n x (n-1)).
Eigen::MatrixXd simplex_tangent_basis(int n);

}  // namespace exqp
