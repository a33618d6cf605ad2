#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "s2cubic/hermitian.hpp"
#include "s2cubic/symbolic.hpp"

namespace s2cubic {

/// Point on the unit sphere S^2. Normalized at construction.
class SpherePoint {
 public:
  SpherePoint(double x1, double x2, double x3);
  explicit SpherePoint(const Eigen::Vector3d& x) : SpherePoint(x(0), x(1), x(2)) {}

  double x1() const { return x_(0); }
  double x2() const { return x_(1); }
  double x3() const { return x_(2); }
  const Eigen::Vector3d& vec() const { return x_; }
  SpherePoint antipode() const { return SpherePoint(-x_); }

 private:
  Eigen::Vector3d x_;
};

/// Point of the extended complex plane.
class RiemannPoint {
 public:
  explicit RiemannPoint(Complex z) : z_(z), infinite_(false) {}
  static RiemannPoint Infinity() { return RiemannPoint(); }

  bool is_infinite() const { return infinite_; }
  /// Finite value; throws std::logic_error at infinity.
  Complex value() const;

 private:
  RiemannPoint() : infinite_(true) {}
  Complex z_{0.0, 0.0};
  bool infinite_;
};

/// z(x) = (x3 - i x2) / (1 + x1); infinity when 1 + x1 <= 1e-12.
RiemannPoint to_riemann(const SpherePoint& x);
/// Inverse of to_riemann.
SpherePoint to_sphere(const RiemannPoint& z);

/// |z| above this is treated as the point at infinity by moment_matrix.
inline constexpr double kInfinityModulus = 1e8;

/// Z(z) = v v^* / (1 + |z|^2)^d with v = (1, z, ..., z^d). Rank one, PSD,
/// and <H_1(d), Z> = 1.
HermitianMatrix moment_matrix(const RiemannPoint& z, int d);
/// Same matrix, built from the polynomial entry formulas in x directly.
HermitianMatrix moment_matrix_from_x(const SpherePoint& x, int d);

/// diag(binom(d, 0), ..., binom(d, d)); represents the constant 1 on S^2.
HermitianMatrix normalizing_matrix(int d);

/// Exponent triple of x1^j x2^k x3^l.
struct Monomial {
  int j, k, l;
  int degree() const { return j + k + l; }
  bool operator==(const Monomial&) const = default;
};

inline constexpr int kCubicDim = 16;

/// Monomial basis of cubics on the sphere, ordered by (degree, j, k, l)
/// ascending: 002 011 020 101 110 200 | 003 012 021 030 102 111 120 201 210 300.
const std::array<Monomial, kCubicDim>& cubic_basis();
/// Position of x1^j x2^k x3^l in cubic_basis(), or -1.
int monomial_index(int j, int k, int l);
/// Three-digit key "jkl".
std::string monomial_key(const Monomial& m);

/// Real polynomial sum c_jkl x1^j x2^k x3^l over 2 <= j+k+l <= 3: the
/// unique representative of a cubic on S^2 with quadratic and cubic
/// homogeneous parts only.
class CubicOnSphere {
 public:
  CubicOnSphere() { c_.fill(0.0); }
  explicit CubicOnSphere(const Eigen::Matrix<double, kCubicDim, 1>& coeffs);

  /// ||x||^2, the constant 1 on the sphere.
  static CubicOnSphere one();
  /// kappa * ||x||^2.
  static CubicOnSphere constant(double kappa);
  static CubicOnSphere monomial(int j, int k, int l, double c = 1.0);

  double coeff(int j, int k, int l) const;
  void set(int j, int k, int l, double v);
  double operator[](int i) const { return c_[i]; }
  double& operator[](int i) { return c_[i]; }
  Eigen::Matrix<double, kCubicDim, 1> vec() const;

  /// True if every degree-2 coefficient is zero.
  bool is_homogeneous_cubic() const;
  /// Degree-3 part only.
  CubicOnSphere cubic_part() const;

  /// Polynomial value at an arbitrary point of R^3.
  double evaluate(const Eigen::Vector3d& x) const;
  double evaluate(const SpherePoint& x) const { return evaluate(x.vec()); }
  /// Euclidean gradient at an arbitrary point of R^3.
  Eigen::Vector3d gradient(const Eigen::Vector3d& x) const;
  /// Euclidean Hessian of the coefficient polynomial.
  Eigen::Matrix3d hessian(const Eigen::Vector3d& x) const;

  CubicOnSphere operator+(const CubicOnSphere& o) const;
  CubicOnSphere operator-(const CubicOnSphere& o) const;
  CubicOnSphere operator-() const;
  CubicOnSphere operator*(double s) const;
  friend CubicOnSphere operator*(double s, const CubicOnSphere& p) { return p * s; }

 private:
  std::array<double, kCubicDim> c_;
};

/// Entry Z_kl(x) of the degree-d moment matrix as an exact polynomial in x.
symbolic::Polynomial moment_entry_polynomial(int k, int l, int d);

/// Exact coefficient map: column m holds the coefficients (cubic_basis()
/// order) of <E_m, Z(x)> where E_m = coord_basis(4, m).
std::array<std::array<symbolic::Rational, kCubicDim>, kCubicDim> generate_bijection_matrix_exact();
/// Floating-point copy of the exact map. Only d = 3 is supported.
Eigen::MatrixXd generate_bijection_matrix(int d = 3);

/// Cached forward map and its exact inverse.
const Eigen::MatrixXd& bijection_matrix();
const Eigen::MatrixXd& bijection_inverse();

/// p_H with p_H(x) = <H, Z(x)> on S^2. H must be 4 x 4.
CubicOnSphere h_to_poly(const HermitianMatrix& h);
/// Inverse of h_to_poly.
HermitianMatrix poly_to_h(const CubicOnSphere& p);

}  // namespace s2cubic
