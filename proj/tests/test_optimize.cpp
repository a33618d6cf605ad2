#include <gtest/gtest.h>

#include <numbers>

#include "s2cubic/optimize.hpp"
#include "support.hpp"

namespace s2cubic {
namespace {

using testing::random_cubic;
using testing::Rng;

const double kC111Min = -std::pow(3.0, -1.5);

CubicOnSphere x1_norm2() {
  return CubicOnSphere::monomial(3, 0, 0) + CubicOnSphere::monomial(1, 2, 0) + CubicOnSphere::monomial(1, 0, 2);
}

AtomMeasure measure(std::initializer_list<Atom> atoms) {
  AtomMeasure m;
  m.atoms = atoms;
  return m;
}

TEST(ExtractAtoms, SingleAtom) {
  const RiemannPoint z(Complex(1.0, 1.0));
  const AtomMeasure m = extract_atoms(moment_matrix(z, 3));
  ASSERT_EQ(m.atoms.size(), 1u);
  EXPECT_NEAR(m.atoms[0].weight, 1.0, 1e-10);
  EXPECT_LE(std::abs(m.atoms[0].point.value() - z.value()), 1e-10);
}

TEST(ExtractAtoms, ZeroAndInfinity) {
  const AtomMeasure truth = measure({{0.5, RiemannPoint(Complex(0.0))}, {0.5, RiemannPoint::Infinity()}});
  const HermitianMatrix a = truth.assemble(3);
  const AtomMeasure got = extract_atoms(a);
  EXPECT_LE(got.residual, 1e-10);
  const auto [dz, dw] = testing::match_atoms(truth.atoms, got.atoms);
  EXPECT_LE(dz, 1e-10);
  EXPECT_LE(dw, 1e-10);
}

TEST(ExtractAtoms, ThreeRealAtoms) {
  const double w = 1.0 / 3.0;
  const AtomMeasure truth = measure(
      {{w, RiemannPoint(Complex(0.0))}, {w, RiemannPoint(Complex(1.0))}, {w, RiemannPoint(Complex(-1.0))}});
  const AtomMeasure got = extract_atoms(truth.assemble(3));
  const auto [dz, dw] = testing::match_atoms(truth.atoms, got.atoms);
  EXPECT_LE(dz, 1e-9);
  EXPECT_LE(dw, 1e-9);
  EXPECT_LE(got.residual, 1e-10);
}

TEST(ExtractAtoms, RandomMeasuresRoundTrip) {
  Rng rng(60);
  for (int t = 0; t < 100; ++t) {
    AtomMeasure truth;
    const int r = 1 + t % 3;
    for (int k = 0; k < r; ++k) {
      const bool infinite = (t % 10 == 0 && k == 0);
      truth.atoms.push_back(
          Atom{rng.uniform(0.1, 1.0), infinite ? RiemannPoint::Infinity() : RiemannPoint(testing::random_complex(rng))});
    }
    const HermitianMatrix a = truth.assemble(3);
    const AtomMeasure got = extract_atoms(a);
    EXPECT_LE(got.residual, 1e-6 * a.frobenius_norm()) << "measure " << t;
    const auto [dz, dw] = testing::match_atoms(truth.atoms, got.atoms);
    EXPECT_LE(dz, 1e-6) << "measure " << t;
    EXPECT_LE(dw, 1e-6) << "measure " << t;
    EXPECT_NEAR(got.total_weight(), inner(normalizing_matrix(3), a), 1e-9);
  }
}

TEST(ExtractAtoms, TooManyAtomsFails) {
  const AtomMeasure four = measure({{0.25, RiemannPoint(Complex(0.0))},
                                    {0.25, RiemannPoint(Complex(1.0))},
                                    {0.25, RiemannPoint(Complex(0.0, 1.0))},
                                    {0.25, RiemannPoint::Infinity()}});
  EXPECT_THROW(extract_atoms(four.assemble(3)), ExtractionFailure);
}

TEST(ExtractAtoms, OffManifoldRankOneFails) {
  Eigen::Vector4cd v(1.0, 0.0, 0.0, 1.0);
  EXPECT_THROW(extract_atoms(HermitianMatrix(Eigen::MatrixXcd(v * v.adjoint()))), ExtractionFailure);
}

TEST(Fibonacci, PointsAreUnitAndDistinct) {
  const auto pts = fibonacci_sphere(1000);
  ASSERT_EQ(pts.size(), 1000u);
  double min_dist = 10.0;
  for (size_t i = 0; i < pts.size(); ++i) {
    EXPECT_NEAR(pts[i].norm(), 1.0, 1e-14);
    for (size_t j = i + 1; j < pts.size(); ++j) min_dist = std::min(min_dist, (pts[i] - pts[j]).norm());
  }
  EXPECT_GT(min_dist, 0.02);
  EXPECT_EQ(fibonacci_sphere(500), fibonacci_sphere(500));
}

TEST(Oracle, Examples) {
  const OracleResult a = oracle_minimum(x1_norm2(), 5000, 20);
  EXPECT_LE(a.value, -1.0 + 1e-8);
  EXPECT_LE((a.argmin.vec() - Eigen::Vector3d(-1, 0, 0)).norm(), 1e-4);
  EXPECT_NEAR(oracle_minimum(CubicOnSphere::monomial(1, 1, 1)).value, kC111Min, 1e-8);
  EXPECT_NEAR(oracle_minimum(CubicOnSphere::one(), 1000, 5).value, 1.0, 1e-14);
  EXPECT_THROW(oracle_minimum(CubicOnSphere::one(), 999, 5), std::invalid_argument);
}

TEST(Polish, ConvergesToStationaryMinimum) {
  const CubicOnSphere p = CubicOnSphere::monomial(1, 1, 1);
  const SpherePoint x = polish_minimum(p, SpherePoint(-0.5, -0.6, -0.55));
  const double s = 1.0 / std::sqrt(3.0);
  EXPECT_LE((x.vec() - Eigen::Vector3d(-s, -s, -s)).norm(), 1e-9);
  EXPECT_NEAR(p.evaluate(x), kC111Min, 1e-14);
}

TEST(Minimize, X1TimesNormSquared) {
  const OptimizationResult r = minimize_on_sphere(x1_norm2());
  EXPECT_NEAR(r.value, -1.0, 1e-8);
  ASSERT_EQ(r.minimizers.size(), 1u);
  EXPECT_LE((r.minimizers[0].vec() - Eigen::Vector3d(-1, 0, 0)).norm(), 1e-6);
  EXPECT_FALSE(r.extraction_failed);
  EXPECT_TRUE(r.oracle_run);
  EXPECT_GE(r.gap_to_oracle, -1e-7);
  const HermitianMatrix shifted = poly_to_h(x1_norm2()) - normalizing_matrix(3) * r.value;
  EXPECT_TRUE(verify_certificate(shifted, r.certificate).passed);
}

TEST(Minimize, ProductCubicHasFourMinimizers) {
  const CubicOnSphere p = CubicOnSphere::monomial(1, 1, 1);
  const OptimizationResult r = minimize_on_sphere(p);
  EXPECT_NEAR(r.value, kC111Min, 1e-6);
  ASSERT_EQ(r.minimizers.size(), 4u);
  for (const auto& x : r.minimizers) {
    const Eigen::Vector3d v = x.vec() * std::sqrt(3.0);
    EXPECT_LE((v.cwiseAbs() - Eigen::Vector3d::Ones()).norm(), 1e-6);
    const int negatives = (v.array() < 0).count();
    EXPECT_EQ(negatives % 2, 1);
  }
}

TEST(Minimize, ConstantHasEveryPointOptimal) {
  const OptimizationResult r = minimize_on_sphere(CubicOnSphere::one());
  EXPECT_NEAR(r.value, 1.0, 1e-8);
  ASSERT_GE(r.minimizers.size(), 1u);
  EXPECT_LE(static_cast<int>(r.minimizers.size()), OptimizeOptions{}.max_fallback_points);
  for (const auto& x : r.minimizers) EXPECT_NEAR(CubicOnSphere::one().evaluate(x), 1.0, 1e-12);
}

TEST(Minimize, AgreesWithOracleAndCertifies) {
  Rng rng(61);
  OptimizeOptions opts;
  for (int t = 0; t < 50; ++t) {
    const CubicOnSphere p = random_cubic(rng);
    const OptimizationResult r = minimize_on_sphere(p, opts);
    EXPECT_LE(r.value, r.oracle_value + 1e-7) << "instance " << t;
    EXPECT_LE(r.oracle_value - r.value, 1e-5) << "instance " << t;
    const HermitianMatrix shifted = poly_to_h(p) - normalizing_matrix(3) * r.value;
    EXPECT_TRUE(verify_certificate(shifted, r.certificate).passed) << "instance " << t;
    EXPECT_FALSE(r.minimizers.empty());
    for (const auto& x : r.minimizers) {
      EXPECT_LE(std::abs(p.evaluate(x) - r.value), 1e-6);
      EXPECT_LE(std::abs(x.vec().norm() - 1.0), 1e-12);
    }
    EXPECT_NEAR(inner(normalizing_matrix(3), r.moment), 1.0, 1e-8);
  }
}

TEST(Minimize, OracleCanBeSkipped) {
  OptimizeOptions opts;
  opts.run_oracle = false;
  const OptimizationResult r = minimize_on_sphere(x1_norm2(), opts);
  EXPECT_FALSE(r.oracle_run);
  EXPECT_NEAR(r.value, -1.0, 1e-8);
}

TEST(Maximize, Examples) {
  const OptimizationResult a = maximize_on_sphere(x1_norm2());
  EXPECT_NEAR(a.value, 1.0, 1e-8);
  ASSERT_EQ(a.minimizers.size(), 1u);
  EXPECT_LE((a.minimizers[0].vec() - Eigen::Vector3d(1, 0, 0)).norm(), 1e-6);
  EXPECT_NEAR(maximize_on_sphere(CubicOnSphere::monomial(1, 1, 1)).value, -kC111Min, 1e-6);
  // The certificate is for value - p.
  const HermitianMatrix shifted = normalizing_matrix(3) * a.value - poly_to_h(x1_norm2());
  EXPECT_TRUE(verify_certificate(shifted, a.certificate).passed);
}

TEST(Maximize, OddParityForHomogeneousCubics) {
  Rng rng(62);
  OptimizeOptions opts;
  opts.run_oracle = false;
  for (int t = 0; t < 20; ++t) {
    const CubicOnSphere p = random_cubic(rng, true);
    EXPECT_NEAR(maximize_on_sphere(p, opts).value, -minimize_on_sphere(p, opts).value, 1e-8);
  }
}

TEST(Scale, Examples) {
  EXPECT_NEAR(scale_to_ball_boundary(CubicOnSphere::monomial(3, 0, 0)), 1.0, 1e-7);
  EXPECT_NEAR(scale_to_ball_boundary(CubicOnSphere::monomial(3, 0, 0, 2.0)), 0.5, 1e-7);
  EXPECT_NEAR(scale_to_ball_boundary(CubicOnSphere::monomial(1, 1, 1)), std::pow(3.0, 1.5), 1e-6);
  EXPECT_THROW(scale_to_ball_boundary(CubicOnSphere()), std::invalid_argument);
  EXPECT_THROW(scale_to_ball_boundary(CubicOnSphere::one()), std::invalid_argument);
}

TEST(Scale, ReciprocalOfMaximumModulus) {
  Rng rng(63);
  OptimizeOptions opts;
  opts.run_oracle = false;
  for (int t = 0; t < 20; ++t) {
    const CubicOnSphere p = random_cubic(rng, true);
    const double max_abs = maximize_on_sphere(p, opts).value;
    EXPECT_NEAR(scale_to_ball_boundary(p), 1.0 / max_abs, 1e-6);
  }
}

TEST(UnitBall, Membership) {
  EXPECT_EQ(in_unit_ball(CubicOnSphere::monomial(3, 0, 0)).verdict, Verdict::kBoundaryTolerance);
  EXPECT_EQ(in_unit_ball(CubicOnSphere()).verdict, Verdict::kInside);
  EXPECT_EQ(in_unit_ball(CubicOnSphere::monomial(3, 0, 0, 0.5)).verdict, Verdict::kInside);
  const ConeMembershipResult out = in_unit_ball(CubicOnSphere::monomial(3, 0, 0, 2.0));
  EXPECT_EQ(out.verdict, Verdict::kOutside);
  ASSERT_TRUE(out.separator.has_value());
  EXPECT_THROW(in_unit_ball(CubicOnSphere::one()), std::invalid_argument);
}

}  // namespace
}  // namespace s2cubic
