#pragma once

// Exact polynomial arithmetic in x1, x2, x3 with Gaussian-rational
// coefficients. Only used to generate the coefficient map between
// Hermitian matrices and cubics on the sphere.

#include <array>
#include <cstdint>
#include <map>

#include <boost/rational.hpp>

namespace s2cubic::symbolic {

using Rational = boost::rational<std::int64_t>;

struct GaussRational {
  Rational re{0};
  Rational im{0};

  GaussRational() = default;
  GaussRational(Rational r, Rational i = Rational(0)) : re(r), im(i) {}

  bool is_zero() const { return re.numerator() == 0 && im.numerator() == 0; }
  GaussRational operator+(const GaussRational& o) const { return {re + o.re, im + o.im}; }
  GaussRational operator-(const GaussRational& o) const { return {re - o.re, im - o.im}; }
  GaussRational operator*(const GaussRational& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  bool operator==(const GaussRational& o) const { return re == o.re && im == o.im; }
};

using Exponent = std::array<int, 3>;

class Polynomial {
 public:
  Polynomial() = default;
  static Polynomial constant(GaussRational c);
  /// The coordinate x_{axis+1}, axis in {0, 1, 2}.
  static Polynomial variable(int axis);

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(const GaussRational& s) const;
  Polynomial pow(int e) const;

  GaussRational coeff(const Exponent& e) const;
  const std::map<Exponent, GaussRational>& terms() const { return terms_; }
  int degree() const;
  /// Part of total degree exactly `deg`.
  Polynomial homogeneous_part(int deg) const;

 private:
  void add_term(const Exponent& e, const GaussRational& c);
  std::map<Exponent, GaussRational> terms_;
};

/// Representative of p modulo (x1^2 + x2^2 + x3^2 - 1) in the span of
/// homogeneous parts of degree `top - 1` and `top`: lower homogeneous parts
/// are lifted by multiplication with powers of ||x||^2 of matching parity.
Polynomial reduce_on_sphere(const Polynomial& p, int top);

}  // namespace s2cubic::symbolic
