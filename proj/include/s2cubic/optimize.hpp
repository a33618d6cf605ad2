#pragma once

#include <string>
#include <vector>

#include "s2cubic/cones.hpp"
#include "s2cubic/hermitian.hpp"
#include "s2cubic/sdp.hpp"
#include "s2cubic/sphere_moment.hpp"

namespace s2cubic {

/// Thrown by extract_atoms when the matrix is not a small atomic measure.
class ExtractionFailure : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

struct Atom {
  double weight = 0.0;
  RiemannPoint point;
};

/// A = sum_k weight_k * Z(point_k).
struct AtomMeasure {
  std::vector<Atom> atoms;
  double residual = 0.0;  // ||A - assemble(d)||_F of the source matrix

  HermitianMatrix assemble(int d) const;
  double total_weight() const;
};

/// Recovers the atoms of A = sum_k w_k Z(z_k) from the shift structure of
/// its range. Rank is counted against rank_tol * lambda_max. Throws
/// ExtractionFailure when the rank exceeds d or the fit residual exceeds
/// 1e-6 * ||A||_F.
AtomMeasure extract_atoms(const HermitianMatrix& a, double rank_tol = 1e-7);

struct OracleResult {
  double value = 0.0;
  SpherePoint argmin{1.0, 0.0, 0.0};
};

/// Deterministic sampling bound: Fibonacci grid, then polish_minimum from
/// the best n_polish grid points. Returns an upper bound on
/// the minimum. Requires n_grid >= 1000.
OracleResult oracle_minimum(const CubicOnSphere& p, int n_grid = 20000, int n_polish = 20);

/// Local descent on the sphere: Riemannian Newton steps where the projected
/// Hessian is positive definite, projected gradient steps otherwise, both
/// with backtracking and renormalization. Stops when the tangential
/// gradient norm drops to grad_tol.
SpherePoint polish_minimum(const CubicOnSphere& p, const SpherePoint& start, double grad_tol = 1e-10,
                           int max_iter = 500);

/// Fibonacci lattice with n points.
std::vector<Eigen::Vector3d> fibonacci_sphere(int n);

struct OptimizeOptions {
  sdp::SolverOptions solver;
  double rank_tol = 1e-7;
  int oracle_grid = 20000;
  int oracle_polish = 20;
  bool run_oracle = true;
  double minimizer_tol = 1e-6;
  /// Cap on minimizers reported by the local-search fallback (non-isolated
  /// optima such as constant p have infinitely many).
  int max_fallback_points = 8;
};

struct OptimizationResult {
  double value = 0.0;
  /// Minimizers (maximizers for maximize_on_sphere).
  std::vector<SpherePoint> minimizers;
  /// Certificate that p - value (value - p when maximizing) is nonnegative.
  NonnegCertificate certificate;
  /// Optimal moment matrix, normalized to <H_1, A> = 1.
  HermitianMatrix moment;
  double oracle_value = 0.0;
  /// Distance from the sampled bound: oracle - value when minimizing,
  /// value - oracle when maximizing. Nonnegative up to solver tolerance.
  double gap_to_oracle = 0.0;
  bool oracle_run = false;
  /// Atom extraction failed; minimizers then come from local polishing of
  /// grid points and are only those that attain value within minimizer_tol.
  bool extraction_failed = false;
  std::string warning;
  int iterations = 0;
};

OptimizationResult minimize_on_sphere(const CubicOnSphere& p, const OptimizeOptions& opts = {});
OptimizationResult maximize_on_sphere(const CubicOnSphere& p, const OptimizeOptions& opts = {});

/// Largest lambda >= 0 with max |lambda p| <= 1 on S^2 for homogeneous p != 0.
double scale_to_ball_boundary(const CubicOnSphere& p, const sdp::SolverOptions& opts = {});

/// Unit-ball membership of a homogeneous cubic via nonnegativity of
/// ||x||^2 + p.
ConeMembershipResult in_unit_ball(const CubicOnSphere& p, const sdp::SolverOptions& opts = {});

}  // namespace s2cubic
