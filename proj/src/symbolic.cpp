#include "s2cubic/symbolic.hpp"

#include <algorithm>
#include <stdexcept>

namespace s2cubic::symbolic {

Polynomial Polynomial::constant(GaussRational c) {
  Polynomial p;
  p.add_term({0, 0, 0}, c);
  return p;
}

Polynomial Polynomial::variable(int axis) {
  if (axis < 0 || axis > 2) throw std::invalid_argument("Polynomial::variable: axis out of range");
  Exponent e{0, 0, 0};
  e[axis] = 1;
  Polynomial p;
  p.add_term(e, GaussRational(Rational(1)));
  return p;
}

void Polynomial::add_term(const Exponent& e, const GaussRational& c) {
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    if (!c.is_zero()) terms_.emplace(e, c);
    return;
  }
  it->second = it->second + c;
  if (it->second.is_zero()) terms_.erase(it);
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  Polynomial r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, GaussRational(-c.re, -c.im));
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial r;
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      r.add_term({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}, ca * cb);
    }
  }
  return r;
}

Polynomial Polynomial::operator*(const GaussRational& s) const {
  Polynomial r;
  for (const auto& [e, c] : terms_) r.add_term(e, c * s);
  return r;
}

Polynomial Polynomial::pow(int e) const {
  if (e < 0) throw std::invalid_argument("Polynomial::pow: negative exponent");
  Polynomial r = constant(GaussRational(Rational(1)));
  for (int i = 0; i < e; ++i) r = r * *this;
  return r;
}

GaussRational Polynomial::coeff(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? GaussRational() : it->second;
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e[0] + e[1] + e[2]);
  return d;
}

Polynomial Polynomial::homogeneous_part(int deg) const {
  Polynomial r;
  for (const auto& [e, c] : terms_) {
    if (e[0] + e[1] + e[2] == deg) r.add_term(e, c);
  }
  return r;
}

Polynomial reduce_on_sphere(const Polynomial& p, int top) {
  if (p.degree() > top) throw std::invalid_argument("reduce_on_sphere: degree exceeds target");
  const Polynomial norm2 =
      Polynomial::variable(0).pow(2) + Polynomial::variable(1).pow(2) + Polynomial::variable(2).pow(2);
  Polynomial r;
  for (int deg = 0; deg <= top; ++deg) {
    const Polynomial part = p.homogeneous_part(deg);
    const int target = ((top - deg) % 2 == 0) ? top : top - 1;
    r = r + part * norm2.pow((target - deg) / 2);
  }
  return r;
}

}  // namespace s2cubic::symbolic
