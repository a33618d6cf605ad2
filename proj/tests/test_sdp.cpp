#include <gtest/gtest.h>

#include "s2cubic/hermitian.hpp"
#include "s2cubic/sdp.hpp"
#include "support.hpp"

namespace s2cubic::sdp {
namespace {

using s2cubic::testing::Rng;

Eigen::MatrixXd e11() {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
  m(0, 0) = 1.0;
  return m;
}

SdpProblem trace_min() {
  SdpProblem prob;
  prob.block_sizes = {2};
  prob.objective = {Eigen::MatrixXd::Identity(2, 2)};
  prob.constraints.push_back(Constraint{{e11()}, 1.0});
  return prob;
}

TEST(Solve, TraceMinimization) {
  const SdpProblem prob = trace_min();
  const SdpSolution sol = solve(prob);
  ASSERT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_NEAR(sol.primal_objective, 1.0, 1e-8);
  EXPECT_LE((sol.primal[0] - e11()).norm(), 1e-8);
  const KktReport rep = check_kkt(prob, sol);
  EXPECT_TRUE(rep.passed);
  EXPECT_LE(rep.primal_residual, 1e-8);
  EXPECT_LE(rep.dual_residual, 1e-8);
  EXPECT_LE(rep.complementarity, 1e-8);
}

TEST(Solve, NegativeDiagonalIsInfeasible) {
  SdpProblem prob;
  prob.block_sizes = {2};
  prob.constraints.push_back(Constraint{{e11()}, -1.0});
  const SdpSolution sol = solve(prob);
  ASSERT_EQ(sol.status, SolveStatus::kPrimalInfeasible);
  ASSERT_EQ(sol.dual_ray.size(), 1);
  // sum y_i A_i >= 0 and b^T y < 0.
  const BlockMatrix ray = adjoint_apply(prob, sol.dual_ray);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ray[0]);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-9);
  EXPECT_LT(-1.0 * sol.dual_ray(0), 0.0);
}

TEST(Solve, InconsistentEqualitiesAreInfeasible) {
  SdpProblem prob = trace_min();
  prob.constraints.push_back(Constraint{{e11() * 2.0}, 3.0});
  const SdpSolution sol = solve(prob);
  ASSERT_EQ(sol.status, SolveStatus::kPrimalInfeasible);
  const Eigen::Vector2d b(1.0, 3.0);
  EXPECT_LT(b.dot(sol.dual_ray), 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(adjoint_apply(prob, sol.dual_ray)[0]);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-9);
}

TEST(Solve, DependentRowsAreDropped) {
  SdpProblem prob = trace_min();
  prob.constraints.push_back(Constraint{{e11() * 2.0}, 2.0});
  const SdpSolution sol = solve(prob);
  ASSERT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_NEAR(sol.primal_objective, 1.0, 1e-8);
  EXPECT_TRUE(check_kkt(prob, sol).passed);
}

TEST(Solve, UnboundedIsDualInfeasible) {
  SdpProblem prob;
  prob.block_sizes = {2};
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2, 2);
  c(1, 1) = -1.0;
  prob.objective = {c};
  prob.constraints.push_back(Constraint{{e11()}, 1.0});
  const SdpSolution sol = solve(prob);
  EXPECT_EQ(sol.status, SolveStatus::kDualInfeasible);
}

TEST(Solve, MaximizeSense) {
  // max -trace(X) s.t. X_11 = 1 equals -1.
  SdpProblem prob = trace_min();
  prob.objective = {-Eigen::MatrixXd::Identity(2, 2)};
  prob.sense = Sense::kMaximize;
  const SdpSolution sol = solve(prob);
  ASSERT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_NEAR(sol.primal_objective, -1.0, 1e-8);
  EXPECT_TRUE(check_kkt(prob, sol).passed);
}

TEST(Solve, MatchesLinearProgramsByVertexEnumeration) {
  Rng rng(40);
  for (int t = 0; t < 50; ++t) {
    const int n = rng.integer(3, 7);
    const int m = rng.integer(1, n - 1);
    const testing::LpInstance lp = testing::random_lp(rng, n, m);
    const SdpProblem prob = testing::lp_to_sdp(lp);
    const SdpSolution sol = solve(prob);
    ASSERT_EQ(sol.status, SolveStatus::kOptimal) << "instance " << t;
    const double opt = testing::lp_vertex_optimum(lp);
    EXPECT_NEAR(sol.primal_objective, opt, 1e-8 * (1.0 + std::abs(opt))) << "instance " << t;
    EXPECT_TRUE(check_kkt(prob, sol).passed) << "instance " << t;
    EXPECT_GE(sol.primal_objective - sol.dual_objective, -1e-9 * (1.0 + std::abs(opt)));
  }
}

TEST(Solve, IsDeterministic) {
  Rng rng(41);
  const SdpProblem prob = testing::lp_to_sdp(testing::random_lp(rng, 6, 3));
  const SdpSolution a = solve(prob), b = solve(prob);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(a.primal_objective, b.primal_objective);
  EXPECT_EQ(a.dual_objective, b.dual_objective);
  EXPECT_TRUE((a.primal[0].array() == b.primal[0].array()).all());
  EXPECT_TRUE((a.dual.array() == b.dual.array()).all());
}

TEST(Solve, ComplexProblemViaEmbedding) {
  // min <C, X> s.t. trace X = 1, X Hermitian PSD, has value lambda_min(C).
  // Blocks carry embed(F) / 2 so that <embed(F)/2, Y> = <F, hermitian_part(Y)>.
  Rng rng(42);
  for (int t = 0; t < 20; ++t) {
    const int n = rng.integer(2, 5);
    const HermitianMatrix c = testing::random_hermitian(rng, n);
    SdpProblem prob;
    prob.block_sizes = {2 * n};
    prob.objective = {0.5 * embed_real(c)};
    prob.constraints.push_back(Constraint{{0.5 * embed_real(HermitianMatrix::Identity(n))}, 1.0});
    const SdpSolution sol = solve(prob);
    ASSERT_EQ(sol.status, SolveStatus::kOptimal);
    EXPECT_NEAR(sol.primal_objective, min_eigenvalue(c), 1e-8);
    const HermitianMatrix x = hermitian_part(sol.primal[0]);
    EXPECT_NEAR(x.trace(), 1.0, 1e-8);
    EXPECT_NEAR(inner(c, x), min_eigenvalue(c), 1e-8);
    EXPECT_TRUE(check_kkt(prob, sol).passed);
  }
}

TEST(Solve, MultipleBlocks) {
  // min x + trace(Y) s.t. x + Y_11 = 2, Y_22 = 1 with Y 2x2: value 3.
  SdpProblem prob;
  prob.block_sizes = {1, 2};
  prob.objective = {Eigen::MatrixXd::Identity(1, 1), Eigen::MatrixXd::Identity(2, 2)};
  Eigen::MatrixXd e22 = Eigen::MatrixXd::Zero(2, 2);
  e22(1, 1) = 1.0;
  prob.constraints.push_back(Constraint{{Eigen::MatrixXd::Identity(1, 1), e11()}, 2.0});
  prob.constraints.push_back(Constraint{{Eigen::MatrixXd::Zero(1, 1), e22}, 1.0});
  const SdpSolution sol = solve(prob);
  ASSERT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_NEAR(sol.primal_objective, 3.0, 1e-8);
  EXPECT_TRUE(check_kkt(prob, sol).passed);
}

TEST(CheckKkt, FlagsPerturbedPrimal) {
  const SdpProblem prob = trace_min();
  SdpSolution sol = solve(prob);
  ASSERT_TRUE(check_kkt(prob, sol).passed);
  sol.primal[0](0, 0) += 1e-3;
  const KktReport rep = check_kkt(prob, sol);
  EXPECT_NEAR(rep.primal_residual, 1e-3 / 2.0, 1e-5);
  EXPECT_FALSE(rep.primal_ok);
  EXPECT_FALSE(rep.passed);
}

TEST(CheckKkt, FlagsIndefiniteSlack) {
  const SdpProblem prob = trace_min();
  SdpSolution sol = solve(prob);
  sol.dual_slack[0](1, 1) = -1e-3;
  EXPECT_FALSE(check_kkt(prob, sol).passed);
}

TEST(Validate, RejectsMalformedProblems) {
  SdpProblem asym = trace_min();
  asym.constraints[0].coeffs[0](0, 1) = 1.0;
  EXPECT_THROW(asym.validate(), std::invalid_argument);
  SdpProblem shape = trace_min();
  shape.constraints[0].coeffs[0] = Eigen::MatrixXd::Zero(3, 3);
  EXPECT_THROW(shape.validate(), std::invalid_argument);
  SdpProblem huge;
  huge.block_sizes = {150};  // 11325 free entries
  EXPECT_THROW(huge.validate(), std::invalid_argument);
}

TEST(Helpers, InnerProductsAndAdjoint) {
  Rng rng(43);
  const SdpProblem prob = testing::lp_to_sdp(testing::random_lp(rng, 5, 2));
  BlockMatrix x = {Eigen::MatrixXd::Random(5, 5)};
  x[0] = (x[0] + x[0].transpose()).eval();
  const Eigen::Vector2d y(0.3, -1.2);
  EXPECT_NEAR(constraint_apply(prob, x).dot(y), block_inner(adjoint_apply(prob, y), x), 1e-12);
}

}  // namespace
}  // namespace s2cubic::sdp
