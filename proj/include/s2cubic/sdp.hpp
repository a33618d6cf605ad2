#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace s2cubic::sdp {

/// Block-diagonal real symmetric matrix, one dense block per cone.
using BlockMatrix = std::vector<Eigen::MatrixXd>;

enum class Sense { kMinimize, kMaximize };

struct Constraint {
  BlockMatrix coeffs;  // <coeffs, X> = rhs
  double rhs = 0.0;
};

/// optimize <objective, X>  s.t.  <A_i, X> = b_i,  X = diag(X_1, ..., X_k) >= 0.
struct SdpProblem {
  std::vector<int> block_sizes;
  BlockMatrix objective;  // empty means zero (pure feasibility)
  std::vector<Constraint> constraints;
  Sense sense = Sense::kMinimize;

  /// Throws std::invalid_argument on shape or symmetry violations, or when
  /// the total number of real entries exceeds 10^4.
  void validate() const;
  int num_constraints() const { return static_cast<int>(constraints.size()); }
};

enum class SolveStatus {
  kOptimal,
  /// No feasible X. `dual_ray` holds y with sum_i y_i A_i >= 0 and b^T y < 0.
  kPrimalInfeasible,
  /// Dual infeasible. `primal_ray` holds X >= 0 with A(X) = 0 and an
  /// improving objective.
  kDualInfeasible,
  kNumericalFailure,
};

std::string to_string(SolveStatus s);

/// Primal X, dual multipliers y and slack S in the caller's sense:
/// S = C - sum y_i A_i when minimizing, S = sum y_i A_i - C when maximizing.
/// Residuals and gap are relative:
///   primal_infeasibility = ||A(X) - b|| / (1 + ||b||)
///   dual_infeasibility   = ||S - (C - A^T y)|| / (1 + ||C||)   (sign per sense)
///   gap                  = |<C,X> - b^T y| / (1 + |<C,X>| + |b^T y|)
struct SdpSolution {
  SolveStatus status = SolveStatus::kNumericalFailure;
  BlockMatrix primal;
  Eigen::VectorXd dual;
  BlockMatrix dual_slack;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  Eigen::VectorXd dual_ray;
  BlockMatrix primal_ray;
};

/// Per-iteration snapshot for tracing.
struct IterateInfo {
  int iteration;
  double mu;
  double tau;
  double kappa;
  double primal_infeasibility;
  double dual_infeasibility;
  double gap;
  double step;
};

struct SolverOptions {
  double tol_gap = 1e-9;
  double tol_feas = 1e-9;
  int max_iter = 200;
  std::function<void(const IterateInfo&)> on_iterate;
};

/// Primal-dual interior-point method on the homogeneous self-dual embedding.
/// Deterministic: fixed identity starting point, no randomization.
SdpSolution solve(const SdpProblem& prob, const SolverOptions& opts = {});

struct KktReport {
  double primal_residual = 0.0;      // ||A(X) - b|| / (1 + ||b||)
  double dual_residual = 0.0;        // ||C - A^T y - S|| / (1 + ||C||), sense-adjusted
  double complementarity = 0.0;      // |<X, S>| / (1 + |<C,X>|)
  double gap = 0.0;                  // relative objective gap
  double min_eig_primal = 0.0;
  double min_eig_slack = 0.0;
  bool primal_ok = false;
  bool dual_ok = false;
  bool complementarity_ok = false;
  bool cones_ok = false;
  bool passed = false;
};

/// Recomputes every optimality residual from the problem data and the
/// returned (X, y, S); flags each one against 10 * tol.
KktReport check_kkt(const SdpProblem& prob, const SdpSolution& sol, double tol = 1e-9);

/// <U, V> summed over blocks.
double block_inner(const BlockMatrix& u, const BlockMatrix& v);
/// sum_i y_i A_i.
BlockMatrix adjoint_apply(const SdpProblem& prob, const Eigen::VectorXd& y);
/// (<A_i, X>)_i.
Eigen::VectorXd constraint_apply(const SdpProblem& prob, const BlockMatrix& x);

}  // namespace s2cubic::sdp
