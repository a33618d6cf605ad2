#include "s2cubic/sphere_moment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace s2cubic {

using symbolic::GaussRational;
using symbolic::Polynomial;
using symbolic::Rational;

SpherePoint::SpherePoint(double x1, double x2, double x3) : x_(x1, x2, x3) {
  const double n = x_.norm();
  if (!std::isfinite(n) || n == 0.0) throw std::invalid_argument("SpherePoint: zero or non-finite vector");
  x_ /= n;
}

Complex RiemannPoint::value() const {
  if (infinite_) throw std::logic_error("RiemannPoint: value() at infinity");
  return z_;
}

RiemannPoint to_riemann(const SpherePoint& x) {
  if (1.0 + x.x1() <= 1e-12) return RiemannPoint::Infinity();
  if (x.x1() >= 0.0) return RiemannPoint(Complex(x.x3(), -x.x2()) / (1.0 + x.x1()));
  // (x3 - i x2)(x3 + i x2) = (1 - x1)(1 + x1); this form avoids cancellation near -e1.
  const Complex den(x.x3(), x.x2());
  if (den == Complex(0.0, 0.0)) return RiemannPoint::Infinity();
  return RiemannPoint((1.0 - x.x1()) / den);
}

SpherePoint to_sphere(const RiemannPoint& zp) {
  if (zp.is_infinite()) return SpherePoint(-1.0, 0.0, 0.0);
  const Complex z = zp.value();
  const double r2 = std::norm(z);
  const double x1 = (1.0 - r2) / (1.0 + r2);
  const double s = 2.0 / (1.0 + r2);  // 1 + x1
  return SpherePoint(x1, -s * z.imag(), s * z.real());
}

HermitianMatrix moment_matrix(const RiemannPoint& zp, int d) {
  if (d < 1) throw std::invalid_argument("moment_matrix: degree must be positive");
  Eigen::VectorXcd v(d + 1);
  double scale;
  if (zp.is_infinite() || std::abs(zp.value()) > kInfinityModulus) {
    v.setZero();
    v(d) = 1.0;
    scale = 1.0;
  } else if (std::abs(zp.value()) <= 1.0) {
    const Complex z = zp.value();
    v(0) = 1.0;
    for (int k = 1; k <= d; ++k) v(k) = v(k - 1) * z;
    scale = std::pow(1.0 + std::norm(z), -d);
  } else {
    // Second form: v = (w^d, ..., w, 1) with w = 1/z.
    const Complex w = 1.0 / zp.value();
    v(d) = 1.0;
    for (int k = d - 1; k >= 0; --k) v(k) = v(k + 1) * w;
    scale = std::pow(1.0 + std::norm(w), -d);
  }
  return HermitianMatrix(Eigen::MatrixXcd(scale * v * v.adjoint()));
}

HermitianMatrix moment_matrix_from_x(const SpherePoint& x, int d) {
  if (d < 1) throw std::invalid_argument("moment_matrix_from_x: degree must be positive");
  const Complex a(x.x3(), -x.x2());  // -i x2 + x3
  const Complex abar = std::conj(a);
  const double minus = 1.0 - x.x1();
  const double plus = 1.0 + x.x1();
  Eigen::MatrixXcd z(d + 1, d + 1);
  for (int k = 0; k <= d; ++k) {
    for (int l = 0; l <= d; ++l) {
      const int lo = std::min(k, l);
      const int hi = std::max(k, l);
      z(k, l) = std::pow(a, k - lo) * std::pow(abar, l - lo) * std::pow(minus, lo) *
                std::pow(plus, d - hi) / std::pow(2.0, d);
    }
  }
  return HermitianMatrix(z);
}

HermitianMatrix normalizing_matrix(int d) {
  Eigen::VectorXd diag(d + 1);
  double binom = 1.0;
  for (int k = 0; k <= d; ++k) {
    diag(k) = binom;
    binom = binom * (d - k) / (k + 1);
  }
  return HermitianMatrix::Diagonal(diag);
}

const std::array<Monomial, kCubicDim>& cubic_basis() {
  static const std::array<Monomial, kCubicDim> basis = [] {
    std::array<Monomial, kCubicDim> b{};
    int idx = 0;
    for (int deg = 2; deg <= 3; ++deg) {
      for (int j = 0; j <= deg; ++j) {
        for (int k = 0; j + k <= deg; ++k) b[idx++] = Monomial{j, k, deg - j - k};
      }
    }
    return b;
  }();
  return basis;
}

int monomial_index(int j, int k, int l) {
  const auto& b = cubic_basis();
  for (int i = 0; i < kCubicDim; ++i) {
    if (b[i] == Monomial{j, k, l}) return i;
  }
  return -1;
}

std::string monomial_key(const Monomial& m) {
  return std::to_string(m.j) + std::to_string(m.k) + std::to_string(m.l);
}

CubicOnSphere::CubicOnSphere(const Eigen::Matrix<double, kCubicDim, 1>& coeffs) {
  for (int i = 0; i < kCubicDim; ++i) c_[i] = coeffs(i);
}

CubicOnSphere CubicOnSphere::one() { return constant(1.0); }

CubicOnSphere CubicOnSphere::constant(double kappa) {
  CubicOnSphere p;
  p.set(2, 0, 0, kappa);
  p.set(0, 2, 0, kappa);
  p.set(0, 0, 2, kappa);
  return p;
}

CubicOnSphere CubicOnSphere::monomial(int j, int k, int l, double c) {
  CubicOnSphere p;
  p.set(j, k, l, c);
  return p;
}

double CubicOnSphere::coeff(int j, int k, int l) const {
  const int i = monomial_index(j, k, l);
  if (i < 0) throw std::invalid_argument("CubicOnSphere: monomial degree must be 2 or 3");
  return c_[i];
}

void CubicOnSphere::set(int j, int k, int l, double v) {
  const int i = monomial_index(j, k, l);
  if (i < 0) throw std::invalid_argument("CubicOnSphere: monomial degree must be 2 or 3");
  c_[i] = v;
}

Eigen::Matrix<double, kCubicDim, 1> CubicOnSphere::vec() const {
  Eigen::Matrix<double, kCubicDim, 1> v;
  for (int i = 0; i < kCubicDim; ++i) v(i) = c_[i];
  return v;
}

bool CubicOnSphere::is_homogeneous_cubic() const {
  const auto& b = cubic_basis();
  for (int i = 0; i < kCubicDim; ++i) {
    if (b[i].degree() == 2 && c_[i] != 0.0) return false;
  }
  return true;
}

CubicOnSphere CubicOnSphere::cubic_part() const {
  CubicOnSphere r;
  const auto& b = cubic_basis();
  for (int i = 0; i < kCubicDim; ++i) {
    if (b[i].degree() == 3) r.c_[i] = c_[i];
  }
  return r;
}

double CubicOnSphere::evaluate(const Eigen::Vector3d& x) const {
  const auto& b = cubic_basis();
  double s = 0.0;
  for (int i = 0; i < kCubicDim; ++i) {
    if (c_[i] == 0.0) continue;
    s += c_[i] * std::pow(x(0), b[i].j) * std::pow(x(1), b[i].k) * std::pow(x(2), b[i].l);
  }
  return s;
}

Eigen::Vector3d CubicOnSphere::gradient(const Eigen::Vector3d& x) const {
  const auto& b = cubic_basis();
  Eigen::Vector3d g = Eigen::Vector3d::Zero();
  auto pw = [](double v, int e) { return e <= 0 ? 1.0 : std::pow(v, e); };
  for (int i = 0; i < kCubicDim; ++i) {
    if (c_[i] == 0.0) continue;
    const auto& m = b[i];
    if (m.j > 0) g(0) += c_[i] * m.j * pw(x(0), m.j - 1) * pw(x(1), m.k) * pw(x(2), m.l);
    if (m.k > 0) g(1) += c_[i] * m.k * pw(x(0), m.j) * pw(x(1), m.k - 1) * pw(x(2), m.l);
    if (m.l > 0) g(2) += c_[i] * m.l * pw(x(0), m.j) * pw(x(1), m.k) * pw(x(2), m.l - 1);
  }
  return g;
}

Eigen::Matrix3d CubicOnSphere::hessian(const Eigen::Vector3d& x) const {
  const auto& b = cubic_basis();
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  // d/dx_a of x^e: factor e and exponent e - 1, zero when e = 0.
  auto term = [&x](std::array<int, 3> e, int a, int bb) {
    double f = 1.0;
    for (int ax : {a, bb}) {
      if (e[ax] == 0) return 0.0;
      f *= e[ax];
      --e[ax];
    }
    for (int ax = 0; ax < 3; ++ax) f *= e[ax] == 0 ? 1.0 : std::pow(x(ax), e[ax]);
    return f;
  };
  for (int i = 0; i < kCubicDim; ++i) {
    if (c_[i] == 0.0) continue;
    const std::array<int, 3> e{b[i].j, b[i].k, b[i].l};
    for (int a = 0; a < 3; ++a) {
      for (int bb = a; bb < 3; ++bb) {
        const double v = c_[i] * term(e, a, bb);
        h(a, bb) += v;
        if (bb != a) h(bb, a) += v;
      }
    }
  }
  return h;
}

CubicOnSphere CubicOnSphere::operator+(const CubicOnSphere& o) const {
  CubicOnSphere r;
  for (int i = 0; i < kCubicDim; ++i) r.c_[i] = c_[i] + o.c_[i];
  return r;
}

CubicOnSphere CubicOnSphere::operator-(const CubicOnSphere& o) const { return *this + (-o); }

CubicOnSphere CubicOnSphere::operator-() const { return *this * -1.0; }

CubicOnSphere CubicOnSphere::operator*(double s) const {
  CubicOnSphere r;
  for (int i = 0; i < kCubicDim; ++i) r.c_[i] = c_[i] * s;
  return r;
}

Polynomial moment_entry_polynomial(int k, int l, int d) {
  if (k < 0 || l < 0 || k > d || l > d) throw std::invalid_argument("moment_entry_polynomial: index out of range");
  const GaussRational one(Rational(1));
  const GaussRational i_unit(Rational(0), Rational(1));
  const GaussRational minus_i(Rational(0), Rational(-1));
  const Polynomial x1 = Polynomial::variable(0);
  const Polynomial x2 = Polynomial::variable(1);
  const Polynomial x3 = Polynomial::variable(2);
  const Polynomial z_num = x2 * minus_i + x3;    // -i x2 + x3
  const Polynomial zbar_num = x2 * i_unit + x3;  //  i x2 + x3
  const Polynomial c1 = Polynomial::constant(one);
  const int lo = std::min(k, l);
  const int hi = std::max(k, l);
  const Polynomial p = z_num.pow(k - lo) * zbar_num.pow(l - lo) * (c1 - x1).pow(lo) * (c1 + x1).pow(d - hi);
  return p * GaussRational(Rational(1, std::int64_t{1} << d));
}

std::array<std::array<Rational, kCubicDim>, kCubicDim> generate_bijection_matrix_exact() {
  constexpr int n = 4;
  constexpr int d = 3;
  std::array<std::array<Rational, kCubicDim>, kCubicDim> m{};
  for (int col = 0; col < kCubicDim; ++col) {
    // Hermitian basis element with exact entries.
    std::array<std::array<GaussRational, n>, n> e{};
    if (col < n) {
      e[col][col] = GaussRational(Rational(1));
    } else {
      int idx = n;
      for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
          if (idx == col) {
            e[j][k] = GaussRational(Rational(1));
            e[k][j] = GaussRational(Rational(1));
          } else if (idx + 1 == col) {
            e[j][k] = GaussRational(Rational(0), Rational(1));
            e[k][j] = GaussRational(Rational(0), Rational(-1));
          }
          idx += 2;
        }
      }
    }
    // <E, Z> = sum_kl E_kl Z_lk.
    Polynomial p;
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) {
        if (e[k][l].is_zero()) continue;
        p = p + moment_entry_polynomial(l, k, d) * e[k][l];
      }
    }
    const Polynomial reduced = symbolic::reduce_on_sphere(p, d);
    for (const auto& [exp, c] : reduced.terms()) {
      if (c.im.numerator() != 0) throw std::logic_error("generate_bijection_matrix: non-real coefficient");
      const int row = monomial_index(exp[0], exp[1], exp[2]);
      if (row < 0) throw std::logic_error("generate_bijection_matrix: monomial outside the basis");
      m[row][col] = c.re;
    }
  }
  return m;
}

Eigen::MatrixXd generate_bijection_matrix(int d) {
  if (d != 3) throw std::invalid_argument("generate_bijection_matrix: only degree 3 is supported");
  const auto exact = generate_bijection_matrix_exact();
  Eigen::MatrixXd m(kCubicDim, kCubicDim);
  for (int r = 0; r < kCubicDim; ++r) {
    for (int c = 0; c < kCubicDim; ++c) m(r, c) = boost::rational_cast<double>(exact[r][c]);
  }
  return m;
}

namespace {

// Gauss-Jordan elimination over the rationals.
Eigen::MatrixXd exact_inverse(std::array<std::array<Rational, kCubicDim>, kCubicDim> a) {
  std::array<std::array<Rational, kCubicDim>, kCubicDim> inv{};
  for (int i = 0; i < kCubicDim; ++i) inv[i][i] = Rational(1);
  for (int col = 0; col < kCubicDim; ++col) {
    int pivot = -1;
    for (int r = col; r < kCubicDim; ++r) {
      if (a[r][col].numerator() != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) throw std::logic_error("bijection matrix is singular");
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    const Rational p = a[col][col];
    for (int c = 0; c < kCubicDim; ++c) {
      a[col][c] /= p;
      inv[col][c] /= p;
    }
    for (int r = 0; r < kCubicDim; ++r) {
      if (r == col || a[r][col].numerator() == 0) continue;
      const Rational f = a[r][col];
      for (int c = 0; c < kCubicDim; ++c) {
        a[r][c] -= f * a[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  Eigen::MatrixXd out(kCubicDim, kCubicDim);
  for (int r = 0; r < kCubicDim; ++r) {
    for (int c = 0; c < kCubicDim; ++c) out(r, c) = boost::rational_cast<double>(inv[r][c]);
  }
  return out;
}

}  // namespace

const Eigen::MatrixXd& bijection_matrix() {
  static const Eigen::MatrixXd m = generate_bijection_matrix(3);
  return m;
}

const Eigen::MatrixXd& bijection_inverse() {
  static const Eigen::MatrixXd inv = exact_inverse(generate_bijection_matrix_exact());
  return inv;
}

CubicOnSphere h_to_poly(const HermitianMatrix& h) {
  if (h.size() != 4) throw std::invalid_argument("h_to_poly: expected a 4x4 matrix");
  const Eigen::VectorXd c = bijection_matrix() * to_coords(h);
  return CubicOnSphere(Eigen::Matrix<double, kCubicDim, 1>(c));
}

HermitianMatrix poly_to_h(const CubicOnSphere& p) {
  const Eigen::VectorXd coords = bijection_inverse() * p.vec();
  return from_coords(coords, 4);
}

}  // namespace s2cubic
