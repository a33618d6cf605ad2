#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace s2cubic {

using Complex = std::complex<double>;

/// Raised when an eigenvalue iteration or factorization does not converge.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense complex Hermitian matrix.
///
/// The Hermitian property is checked at construction and then enforced
/// exactly: the stored matrix is (M + M^*)/2, so the diagonal is real.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(int n);
  /// Throws std::invalid_argument if `m` is not square or deviates from
  /// Hermitian by more than 1e-10 relative to its norm.
  explicit HermitianMatrix(const Eigen::MatrixXcd& m);

  static HermitianMatrix Zero(int n) { return HermitianMatrix(n); }
  static HermitianMatrix Identity(int n);
  static HermitianMatrix Diagonal(const Eigen::VectorXd& diag);
  /// Real symmetric input; only the upper triangle is read.
  static HermitianMatrix FromReal(const Eigen::MatrixXd& m);

  int size() const { return static_cast<int>(m_.rows()); }
  Complex operator()(int i, int j) const { return m_(i, j); }
  const Eigen::MatrixXcd& matrix() const { return m_; }

  /// Sets entry (i, j) and its mirror (j, i) to the conjugate.
  void set(int i, int j, Complex v);

  double frobenius_norm() const { return m_.norm(); }
  double trace() const { return m_.diagonal().real().sum(); }

  HermitianMatrix operator+(const HermitianMatrix& o) const;
  HermitianMatrix operator-(const HermitianMatrix& o) const;
  HermitianMatrix operator-() const;
  HermitianMatrix& operator+=(const HermitianMatrix& o);
  HermitianMatrix& operator-=(const HermitianMatrix& o);
  HermitianMatrix operator*(double s) const;
  friend HermitianMatrix operator*(double s, const HermitianMatrix& h) { return h * s; }

 private:
  Eigen::MatrixXcd m_;
};

/// Frobenius inner product tr(UV); real for Hermitian arguments.
double inner(const HermitianMatrix& u, const HermitianMatrix& v);

/// 2x2 block matrix with d x d corners, A_ll = A_ur^*.
struct BlockHermitian2xd {
  int d = 0;
  Eigen::MatrixXcd ul, ur, ll, lr;

  HermitianMatrix assembled() const;
};

/// Splits a 2d x 2d Hermitian matrix into its four d x d corners.
BlockHermitian2xd split_blocks(const HermitianMatrix& g);

/// G_A: the 2d x 2d matrix obtained from A (size d+1) by duplicating the
/// central d-1 rows and columns. Corners are A[0..d-1], A[0..d-1, 1..d],
/// A[1..d, 0..d-1] and A[1..d].
BlockHermitian2xd duplicate_center(const HermitianMatrix& a);

/// Blockwise conjugate transpose: (ul, ur; ll, lr) -> (ul, ll; ur, lr).
HermitianMatrix partial_transpose(const BlockHermitian2xd& g);

/// A -> G_A^Gamma, the second diagonal block of the spectrahedral map.
HermitianMatrix gamma_map(const HermitianMatrix& a);

/// Adjoint of gamma_map under the trace inner product:
/// <C, gamma_map(A)> = <gamma_adjoint(C), A> for all A.
HermitianMatrix gamma_adjoint(const HermitianMatrix& c);

/// Ascending eigenvalues. Falls back to the real embedding if the complex
/// solver fails; throws NumericalFailure if both fail.
Eigen::VectorXd eigenvalues(const HermitianMatrix& m);
double min_eigenvalue(const HermitianMatrix& m);

/// Default PSD acceptance threshold 1e-8 * (1 + ||M||_F).
double psd_tolerance(const HermitianMatrix& m);
bool is_psd(const HermitianMatrix& m, double eps);
bool is_psd(const HermitianMatrix& m);

/// [[P, -Q], [Q, P]] for M = P + iQ. Spectrum doubles in multiplicity and
/// <embed(U), embed(V)> = 2 <U, V>.
Eigen::MatrixXd embed_real(const HermitianMatrix& m);

/// Hermitian part of a real symmetric 2n x 2n matrix Y:
/// ((Y11 + Y22) + i (Y21 - Y12)) / 2. Inverse of embed_real on its range,
/// and <embed(F), Y> = 2 <F, hermitian_part(Y)> for every Hermitian F.
/// PSD Y maps to PSD output.
HermitianMatrix hermitian_part(const Eigen::MatrixXd& y);

/// Real coordinates of an n x n Hermitian matrix: the n diagonal entries,
/// then (Re H_jk, Im H_jk) for j < k in row-major order. n^2 values.
Eigen::VectorXd to_coords(const HermitianMatrix& h);
HermitianMatrix from_coords(const Eigen::VectorXd& coords, int n);
int coord_count(int n);

/// Basis element with coordinate `index` equal to one.
HermitianMatrix coord_basis(int n, int index);

/// Matrix entry position, 0-based.
struct EntryIndex {
  int row;
  int col;
};

/// Converts the 1-based (row, col) subscripts used in printed theorem
/// statements into storage indices. The only place where that conversion
/// happens.
EntryIndex from_one_based(int row, int col);

}  // namespace s2cubic
