#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "s2cubic/hermitian.hpp"
#include "s2cubic/sdp.hpp"
#include "s2cubic/sphere_moment.hpp"

namespace s2cubic {

/// Raised when the conic solver fails to reach its tolerances.
class SolverFailure : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

/// Pair (B, C), B of size d+1 and C of size 2d, both PSD, with
/// H = B + gamma_adjoint(C). Witnesses H in the dual cone C_d^*.
struct NonnegCertificate {
  HermitianMatrix b;
  HermitianMatrix c;
};

enum class Verdict { kInside, kOutside, kBoundaryTolerance };
std::string to_string(Verdict v);

/// |margin| at or below this gives a boundary-tolerance verdict in
/// in_dual_cone.
inline constexpr double kBoundaryBand = 1e-7;

struct ConeMembershipResult {
  Verdict verdict = Verdict::kOutside;
  /// in_cone_Cd: min(lambda_min(A), lambda_min(G_A^Gamma)).
  /// in_dual_cone: max t with H - t H_1 in C_d^* (the minimum of p_H on S^2).
  double margin = 0.0;
  /// Degree above 3: the semidefinite conditions are necessary only.
  bool relaxation_only = false;
  std::optional<NonnegCertificate> certificate;
  /// Separating element of the opposite cone: for in_cone_Cd a matrix of
  /// C_d^* with <H, A> < 0, for in_dual_cone a matrix A of C_d with
  /// <H, A> < 0 and <H_1, A> = 1.
  std::optional<HermitianMatrix> separator;
};

/// Membership in the conic hull of the moment manifold via A >= 0 and
/// G_A^Gamma >= 0. Exact for d <= 3.
ConeMembershipResult in_cone_Cd(const HermitianMatrix& a, int d);

/// Membership in the dual cone, i.e. nonnegativity of p_H on S^2.
/// Throws SolverFailure if the conic solver does not converge.
ConeMembershipResult in_dual_cone(const HermitianMatrix& h, int d,
                                  const sdp::SolverOptions& opts = {});

/// Result of maximizing t subject to H0 + t * D in C_d^*.
struct ShiftResult {
  double value = 0.0;
  /// Certificate for H0 + value * D.
  NonnegCertificate certificate;
  /// Dual optimum: A in C_d with <D, A> = -1 and <H0, A> = value.
  HermitianMatrix moment;
  sdp::SdpProblem problem;
  sdp::SdpSolution solution;
};

/// Solves max t s.t. H0 + t D in C_d^* as one SDP in the real embedding.
/// Throws std::invalid_argument for D = 0 and SolverFailure if the solver
/// does not report an optimum (e.g. the shift is unbounded).
ShiftResult max_shift(const HermitianMatrix& h0, const HermitianMatrix& dir,
                      const sdp::SolverOptions& opts = {});

struct VerifyTolerances {
  double psd = 1e-7;
  double residual = 1e-7;
};

struct CertificateReport {
  double residual = 0.0;      // ||H - B - gamma_adjoint(C)||_F
  double psd_margin_b = 0.0;  // lambda_min(B)
  double psd_margin_c = 0.0;  // lambda_min(C)
  bool passed = false;
  std::string message;
};

/// Solver-independent check of a certificate: eigenvalues of B and C and
/// the residual of the defining linear identity.
CertificateReport verify_certificate(const HermitianMatrix& h, const NonnegCertificate& cert,
                                     const VerifyTolerances& tol = {});

/// One real linear equation in the unknowns (B, C) with a right-hand side
/// affine in the 16 cubic coefficients:
///   b_coeffs . coords(B) + c_coeffs . coords(C) = rhs_constant + rhs_linear . c
struct SystemRow {
  std::string label;
  Eigen::VectorXd b_coeffs;    // 16
  Eigen::VectorXd c_coeffs;    // 36
  double rhs_constant = 0.0;
  Eigen::VectorXd rhs_linear;  // 16, cubic_basis() order
};

/// Sixteen real equations (real and imaginary parts of ten complex ones).
struct ConeSystem {
  std::vector<SystemRow> rows;
};

/// The explicit equations for nonnegative cubics on the sphere, transcribed
/// entry by entry (1-based subscripts converted with from_one_based).
const ConeSystem& theorem_nonneg_system();
/// The explicit equations for the unit ball of homogeneous cubics.
const ConeSystem& theorem_unit_ball_system();

/// Same equations assembled from the bijection matrix and the adjoint of
/// A -> diag(A, G_A^Gamma), one row per entry the explicit system uses.
ConeSystem generated_nonneg_system();
/// generated_nonneg_system() evaluated at ||x||^2 + p for homogeneous p.
ConeSystem generated_unit_ball_system();
/// Applies the substitution c_200 = c_020 = c_002 = 1 and
/// c_110 = c_101 = c_011 = 0 to a nonnegativity system.
ConeSystem substitute_unit_ball(const ConeSystem& nonneg);

/// Largest absolute entry difference between two systems (structure must
/// match row by row). Returns +inf on a shape mismatch.
double system_difference(const ConeSystem& a, const ConeSystem& b);

/// Feasibility SDP in the real embedding: block 0 holds B (8x8), block 1
/// holds C (12x12); one constraint per system row.
sdp::SdpProblem system_to_sdp(const ConeSystem& sys, const CubicOnSphere& p);
sdp::SdpProblem nonneg_cubic_system(const CubicOnSphere& p);
/// Requires a homogeneous cubic (std::invalid_argument otherwise).
sdp::SdpProblem unit_ball_system(const CubicOnSphere& p);

/// Largest violation of the system's equations by a certificate.
double system_residual(const ConeSystem& sys, const NonnegCertificate& cert, const CubicOnSphere& p);

/// Outcome of solving a system's feasibility SDP directly.
struct FeasibilityOutcome {
  sdp::SolveStatus status = sdp::SolveStatus::kNumericalFailure;
  std::optional<NonnegCertificate> certificate;
  /// From the Farkas ray: A in C_3 with <H_p, A> < 0.
  std::optional<HermitianMatrix> separator;
  sdp::SdpSolution solution;
};

FeasibilityOutcome solve_feasibility(const ConeSystem& sys, const CubicOnSphere& p,
                                     const sdp::SolverOptions& opts = {});

}  // namespace s2cubic
