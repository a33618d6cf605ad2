#include "s2cubic/hermitian.hpp"

#include <utility>

namespace s2cubic {

HermitianMatrix::HermitianMatrix(int n) : m_(Eigen::MatrixXcd::Zero(n, n)) {
  if (n < 0) throw std::invalid_argument("HermitianMatrix: negative size");
}

HermitianMatrix::HermitianMatrix(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("HermitianMatrix: matrix is not square");
  const double dev = (m - m.adjoint()).norm();
  if (dev > 1e-10 * (1.0 + m.norm())) {
    throw std::invalid_argument("HermitianMatrix: input deviates from Hermitian by " +
                                std::to_string(dev));
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianMatrix HermitianMatrix::Identity(int n) {
  HermitianMatrix h(n);
  h.m_.setIdentity();
  return h;
}

HermitianMatrix HermitianMatrix::Diagonal(const Eigen::VectorXd& diag) {
  HermitianMatrix h(static_cast<int>(diag.size()));
  h.m_.diagonal() = diag.cast<Complex>();
  return h;
}

HermitianMatrix HermitianMatrix::FromReal(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("HermitianMatrix: matrix is not square");
  Eigen::MatrixXd sym = m.selfadjointView<Eigen::Upper>();
  HermitianMatrix h(static_cast<int>(m.rows()));
  h.m_ = sym.cast<Complex>();
  return h;
}

void HermitianMatrix::set(int i, int j, Complex v) {
  if (i == j) {
    m_(i, i) = v.real();
  } else {
    m_(i, j) = v;
    m_(j, i) = std::conj(v);
  }
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const {
  HermitianMatrix r(*this);
  r += o;
  return r;
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& o) const {
  HermitianMatrix r(*this);
  r -= o;
  return r;
}

HermitianMatrix HermitianMatrix::operator-() const {
  HermitianMatrix r(*this);
  r.m_ = -r.m_;
  return r;
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& o) {
  if (o.size() != size()) throw std::invalid_argument("HermitianMatrix: size mismatch");
  m_ += o.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& o) {
  if (o.size() != size()) throw std::invalid_argument("HermitianMatrix: size mismatch");
  m_ -= o.m_;
  return *this;
}

HermitianMatrix HermitianMatrix::operator*(double s) const {
  HermitianMatrix r(*this);
  r.m_ *= s;
  return r;
}

double inner(const HermitianMatrix& u, const HermitianMatrix& v) {
  if (u.size() != v.size()) throw std::invalid_argument("inner: size mismatch");
  // tr(UV) = sum_jk U_jk V_kj = sum_jk U_jk conj(V_jk)
  return u.matrix().cwiseProduct(v.matrix().conjugate()).sum().real();
}

HermitianMatrix BlockHermitian2xd::assembled() const {
  Eigen::MatrixXcd g(2 * d, 2 * d);
  g << ul, ur, ll, lr;
  return HermitianMatrix(g);
}

BlockHermitian2xd split_blocks(const HermitianMatrix& g) {
  if (g.size() % 2 != 0 || g.size() == 0) {
    throw std::invalid_argument("split_blocks: size must be even and positive");
  }
  const int d = g.size() / 2;
  const auto& m = g.matrix();
  return BlockHermitian2xd{d, m.topLeftCorner(d, d), m.topRightCorner(d, d),
                           m.bottomLeftCorner(d, d), m.bottomRightCorner(d, d)};
}

BlockHermitian2xd duplicate_center(const HermitianMatrix& a) {
  const int d = a.size() - 1;
  if (d < 1) throw std::invalid_argument("duplicate_center: matrix size must be at least 2");
  const auto& m = a.matrix();
  return BlockHermitian2xd{d, m.topLeftCorner(d, d), m.topRightCorner(d, d),
                           m.bottomLeftCorner(d, d), m.bottomRightCorner(d, d)};
}

HermitianMatrix partial_transpose(const BlockHermitian2xd& g) {
  return BlockHermitian2xd{g.d, g.ul, g.ll, g.ur, g.lr}.assembled();
}

namespace {

// Position in A of entry (i, j) of G_A^Gamma.
std::pair<int, int> gamma_source(int i, int j, int d) {
  if (i < d && j < d) return {i, j};
  if (i < d) return {i + 1, j - d};
  if (j < d) return {i - d, j + 1};
  return {i - d + 1, j - d + 1};
}

}  // namespace

HermitianMatrix gamma_map(const HermitianMatrix& a) {
  const int d = a.size() - 1;
  if (d < 1) throw std::invalid_argument("gamma_map: matrix size must be at least 2");
  Eigen::MatrixXcd g(2 * d, 2 * d);
  for (int i = 0; i < 2 * d; ++i) {
    for (int j = 0; j < 2 * d; ++j) {
      auto [r, s] = gamma_source(i, j, d);
      g(i, j) = a(r, s);
    }
  }
  return HermitianMatrix(g);
}

HermitianMatrix gamma_adjoint(const HermitianMatrix& c) {
  if (c.size() % 2 != 0 || c.size() == 0) {
    throw std::invalid_argument("gamma_adjoint: size must be even and positive");
  }
  const int d = c.size() / 2;
  Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(d + 1, d + 1);
  for (int i = 0; i < 2 * d; ++i) {
    for (int j = 0; j < 2 * d; ++j) {
      auto [r, s] = gamma_source(i, j, d);
      k(r, s) += c(i, j);
    }
  }
  return HermitianMatrix(k);
}

Eigen::VectorXd eigenvalues(const HermitianMatrix& m) {
  if (m.size() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() == Eigen::Success) return solver.eigenvalues();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> real_solver(embed_real(m),
                                                             Eigen::EigenvaluesOnly);
  if (real_solver.info() != Eigen::Success) {
    throw NumericalFailure("eigenvalues: iteration did not converge");
  }
  // Each eigenvalue appears twice in the embedding.
  const Eigen::VectorXd& doubled = real_solver.eigenvalues();
  Eigen::VectorXd out(m.size());
  for (int i = 0; i < m.size(); ++i) out(i) = doubled(2 * i);
  return out;
}

double min_eigenvalue(const HermitianMatrix& m) {
  if (m.size() == 0) throw std::invalid_argument("min_eigenvalue: empty matrix");
  return eigenvalues(m)(0);
}

double psd_tolerance(const HermitianMatrix& m) { return 1e-8 * (1.0 + m.frobenius_norm()); }

bool is_psd(const HermitianMatrix& m, double eps) { return min_eigenvalue(m) >= -eps; }

bool is_psd(const HermitianMatrix& m) { return is_psd(m, psd_tolerance(m)); }

Eigen::MatrixXd embed_real(const HermitianMatrix& m) {
  const int n = m.size();
  const Eigen::MatrixXd p = m.matrix().real();
  const Eigen::MatrixXd q = m.matrix().imag();
  Eigen::MatrixXd y(2 * n, 2 * n);
  y << p, -q, q, p;
  return y;
}

HermitianMatrix hermitian_part(const Eigen::MatrixXd& y) {
  if (y.rows() != y.cols() || y.rows() % 2 != 0) {
    throw std::invalid_argument("hermitian_part: expected a square matrix of even size");
  }
  const int n = static_cast<int>(y.rows() / 2);
  const Eigen::MatrixXd sym = 0.5 * (y + y.transpose());
  Eigen::MatrixXcd h(n, n);
  h.real() = 0.5 * (sym.topLeftCorner(n, n) + sym.bottomRightCorner(n, n));
  h.imag() = 0.5 * (sym.bottomLeftCorner(n, n) - sym.topRightCorner(n, n));
  return HermitianMatrix(h);
}

int coord_count(int n) { return n * n; }

Eigen::VectorXd to_coords(const HermitianMatrix& h) {
  const int n = h.size();
  Eigen::VectorXd v(coord_count(n));
  int idx = 0;
  for (int i = 0; i < n; ++i) v(idx++) = h(i, i).real();
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      v(idx++) = h(j, k).real();
      v(idx++) = h(j, k).imag();
    }
  }
  return v;
}

HermitianMatrix from_coords(const Eigen::VectorXd& coords, int n) {
  if (coords.size() != coord_count(n)) throw std::invalid_argument("from_coords: wrong length");
  HermitianMatrix h(n);
  int idx = 0;
  for (int i = 0; i < n; ++i) h.set(i, i, coords(idx++));
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      const double re = coords(idx++);
      const double im = coords(idx++);
      h.set(j, k, Complex(re, im));
    }
  }
  return h;
}

HermitianMatrix coord_basis(int n, int index) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(coord_count(n));
  e(index) = 1.0;
  return from_coords(e, n);
}

EntryIndex from_one_based(int row, int col) {
  if (row < 1 || col < 1) throw std::invalid_argument("from_one_based: subscripts start at 1");
  return EntryIndex{row - 1, col - 1};
}

}  // namespace s2cubic
