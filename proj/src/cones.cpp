#include "s2cubic/cones.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace s2cubic {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kInside:
      return "inside";
    case Verdict::kOutside:
      return "outside";
    case Verdict::kBoundaryTolerance:
      return "boundary-tolerance";
  }
  return "unknown";
}

namespace {

constexpr int kBSize = 4;
constexpr int kCSize = 6;

// Coefficients over to_coords(M) of Re M_jk or Im M_jk.
Eigen::VectorXd entry_functional(int n, int j, int k, bool imag) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(coord_count(n));
  if (j == k) {
    if (!imag) f(j) = 1.0;
    return f;
  }
  const int lo = std::min(j, k);
  const int hi = std::max(j, k);
  int idx = n;
  for (int a = 0; a < lo; ++a) idx += 2 * (n - a - 1);
  idx += 2 * (hi - lo - 1);
  if (imag) {
    f(idx + 1) = (j < k) ? 1.0 : -1.0;
  } else {
    f(idx) = 1.0;
  }
  return f;
}

// Hermitian F with <F, M> = coeffs . to_coords(M).
HermitianMatrix functional_matrix(int n, const Eigen::VectorXd& coeffs) {
  HermitianMatrix f(n);
  for (int m = 0; m < coord_count(n); ++m) {
    if (coeffs(m) == 0.0) continue;
    const double w = m < n ? 1.0 : 0.5;
    f += coord_basis(n, m) * (w * coeffs(m));
  }
  return f;
}

sdp::BlockMatrix embedded_pair(const HermitianMatrix& fb, const HermitianMatrix& fc) {
  return {0.5 * embed_real(fb), 0.5 * embed_real(fc)};
}

struct Term {
  char matrix;  // 'B' or 'C'
  int row;      // 1-based, as printed
  int col;
};

struct LiteralEquation {
  std::vector<Term> lhs;
  double lhs_sign;
  double re_constant;
  std::vector<std::pair<const char*, double>> re;
  std::vector<std::pair<const char*, double>> im;
};

Eigen::VectorXd coefficient_vector(const std::vector<std::pair<const char*, double>>& terms) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(kCubicDim);
  for (const auto& [key, c] : terms) {
    const std::string k(key);
    const int idx = monomial_index(k[0] - '0', k[1] - '0', k[2] - '0');
    if (idx < 0) throw std::logic_error("theorem system: bad monomial key " + k);
    v(idx) += c;
  }
  return v;
}

std::string describe(const std::vector<Term>& lhs) {
  std::string s;
  for (const auto& t : lhs) {
    if (!s.empty()) s += " + ";
    s += t.matrix + std::to_string(t.row) + std::to_string(t.col);
  }
  return s;
}

ConeSystem build_literal(const std::vector<LiteralEquation>& eqs) {
  ConeSystem sys;
  for (const auto& eq : eqs) {
    for (bool imag : {false, true}) {
      SystemRow row;
      row.label = std::string(imag ? "Im(" : "Re(") + describe(eq.lhs) + ")";
      row.b_coeffs = Eigen::VectorXd::Zero(coord_count(kBSize));
      row.c_coeffs = Eigen::VectorXd::Zero(coord_count(kCSize));
      for (const auto& t : eq.lhs) {
        const EntryIndex e = from_one_based(t.row, t.col);
        if (t.matrix == 'B') {
          row.b_coeffs += entry_functional(kBSize, e.row, e.col, imag);
        } else {
          row.c_coeffs += entry_functional(kCSize, e.row, e.col, imag);
        }
      }
      row.rhs_constant = imag ? 0.0 : eq.re_constant;
      row.rhs_linear = coefficient_vector(imag ? eq.im : eq.re);
      // Normalize "-(lhs) = rhs" to "lhs = -rhs".
      if (eq.lhs_sign < 0) {
        row.rhs_constant = -row.rhs_constant;
        row.rhs_linear = -row.rhs_linear;
      }
      sys.rows.push_back(std::move(row));
    }
  }
  return sys;
}

// Position of the single B entry in a row, used to regenerate the row.
std::pair<EntryIndex, bool> b_entry_of(const SystemRow& row) {
  for (int j = 0; j < kBSize; ++j) {
    for (int k = 0; k < kBSize; ++k) {
      for (bool imag : {false, true}) {
        if ((entry_functional(kBSize, j, k, imag) - row.b_coeffs).cwiseAbs().maxCoeff() == 0.0) {
          return {EntryIndex{j, k}, imag};
        }
      }
    }
  }
  throw std::logic_error("theorem system row without a single B entry: " + row.label);
}

}  // namespace

const ConeSystem& theorem_nonneg_system() {
  static const ConeSystem sys = build_literal({
      {{{'B', 1, 1}, {'C', 1, 1}}, 1, 0, {{"200", 1}, {"300", 1}}, {}},
      {{{'B', 4, 4}, {'C', 6, 6}}, 1, 0, {{"200", 1}, {"300", -1}}, {}},
      {{{'B', 1, 2}, {'C', 1, 2}, {'C', 4, 1}}, 1, 0,
       {{"201", 1}, {"101", 1}}, {{"210", 1}, {"110", 1}}},
      {{{'B', 3, 4}, {'C', 6, 3}, {'C', 5, 6}}, 1, 0,
       {{"201", 1}, {"101", -1}}, {{"210", 1}, {"110", -1}}},
      {{{'B', 2, 2}, {'C', 2, 2}, {'C', 4, 4}, {'C', 1, 5}, {'C', 5, 1}}, 1, 0,
       {{"020", 2}, {"002", 2}, {"200", -1}, {"120", 2}, {"102", 2}, {"300", -3}}, {}},
      {{{'B', 3, 3}, {'C', 3, 3}, {'C', 5, 5}, {'C', 2, 6}, {'C', 6, 2}}, 1, 0,
       {{"020", 2}, {"002", 2}, {"200", -1}, {"120", -2}, {"102", -2}, {"300", 3}}, {}},
      {{{'B', 2, 3}, {'C', 1, 6}, {'C', 2, 3}, {'C', 5, 2}, {'C', 4, 5}}, 1, 0,
       {{"003", 3}, {"021", 1}, {"201", -2}}, {{"030", 3}, {"012", 1}, {"210", -2}}},
      {{{'B', 4, 1}, {'C', 3, 4}}, 1, 0,
       {{"003", 1}, {"021", -1}}, {{"030", 1}, {"012", -1}}},
      {{{'B', 2, 4}, {'C', 5, 3}, {'C', 4, 6}}, 1, 0,
       {{"002", 1}, {"020", -1}, {"120", 1}, {"102", -1}}, {{"011", 1}, {"111", -1}}},
      {{{'B', 1, 3}, {'C', 1, 3}, {'C', 4, 2}}, 1, 0,
       {{"002", 1}, {"020", -1}, {"120", -1}, {"102", 1}}, {{"011", 1}, {"111", 1}}},
  });
  return sys;
}

const ConeSystem& theorem_unit_ball_system() {
  static const ConeSystem sys = build_literal({
      {{{'B', 1, 1}, {'C', 1, 1}}, 1, 1, {{"300", 1}}, {}},
      {{{'B', 4, 4}, {'C', 6, 6}}, 1, 1, {{"300", -1}}, {}},
      {{{'B', 1, 2}, {'C', 1, 2}, {'C', 4, 1}}, 1, 0, {{"201", 1}}, {{"210", 1}}},
      {{{'B', 3, 4}, {'C', 6, 3}, {'C', 5, 6}}, 1, 0, {{"201", 1}}, {{"210", 1}}},
      {{{'B', 2, 2}, {'C', 2, 2}, {'C', 4, 4}, {'C', 1, 5}, {'C', 5, 1}}, 1, 3,
       {{"120", 2}, {"102", 2}, {"300", -3}}, {}},
      {{{'B', 3, 3}, {'C', 3, 3}, {'C', 5, 5}, {'C', 2, 6}, {'C', 6, 2}}, 1, 3,
       {{"120", -2}, {"102", -2}, {"300", 3}}, {}},
      {{{'B', 2, 3}, {'C', 1, 6}, {'C', 2, 3}, {'C', 5, 2}, {'C', 4, 5}}, 1, 0,
       {{"003", 3}, {"021", 1}, {"201", -2}}, {{"030", 3}, {"012", 1}, {"210", -2}}},
      {{{'B', 4, 1}, {'C', 3, 4}}, 1, 0, {{"003", 1}, {"021", -1}}, {{"030", 1}, {"012", -1}}},
      {{{'B', 2, 4}, {'C', 5, 3}, {'C', 4, 6}}, 1, 0, {{"120", 1}, {"102", -1}}, {{"111", -1}}},
      {{{'B', 1, 3}, {'C', 1, 3}, {'C', 4, 2}}, -1, 0, {{"120", 1}, {"102", -1}}, {{"111", -1}}},
  });
  return sys;
}

ConeSystem generated_nonneg_system() {
  const Eigen::MatrixXd& inv = bijection_inverse();
  ConeSystem sys;
  for (const auto& lit : theorem_nonneg_system().rows) {
    const auto [e, imag] = b_entry_of(lit);
    SystemRow row;
    row.label = lit.label;
    row.b_coeffs = entry_functional(kBSize, e.row, e.col, imag);
    row.c_coeffs = Eigen::VectorXd::Zero(coord_count(kCSize));
    for (int m = 0; m < coord_count(kCSize); ++m) {
      const Complex v = gamma_adjoint(coord_basis(kCSize, m))(e.row, e.col);
      row.c_coeffs(m) = imag ? v.imag() : v.real();
    }
    // Re/Im H_jk as a function of the coefficients: H coords = inv * c.
    row.rhs_linear = inv.transpose() * row.b_coeffs;
    row.rhs_constant = 0.0;
    sys.rows.push_back(std::move(row));
  }
  return sys;
}

ConeSystem substitute_unit_ball(const ConeSystem& nonneg) {
  const Eigen::VectorXd one = CubicOnSphere::one().vec();
  ConeSystem sys = nonneg;
  const auto& basis = cubic_basis();
  for (auto& row : sys.rows) {
    row.rhs_constant += row.rhs_linear.dot(one);
    for (int i = 0; i < kCubicDim; ++i) {
      if (basis[i].degree() == 2) row.rhs_linear(i) = 0.0;
    }
  }
  return sys;
}

ConeSystem generated_unit_ball_system() { return substitute_unit_ball(generated_nonneg_system()); }

double system_difference(const ConeSystem& a, const ConeSystem& b) {
  if (a.rows.size() != b.rows.size()) return std::numeric_limits<double>::infinity();
  double diff = 0.0;
  for (size_t i = 0; i < a.rows.size(); ++i) {
    const auto& ra = a.rows[i];
    const auto& rb = b.rows[i];
    diff = std::max(diff, (ra.b_coeffs - rb.b_coeffs).cwiseAbs().maxCoeff());
    diff = std::max(diff, (ra.c_coeffs - rb.c_coeffs).cwiseAbs().maxCoeff());
    diff = std::max(diff, (ra.rhs_linear - rb.rhs_linear).cwiseAbs().maxCoeff());
    diff = std::max(diff, std::abs(ra.rhs_constant - rb.rhs_constant));
  }
  return diff;
}

sdp::SdpProblem system_to_sdp(const ConeSystem& sys, const CubicOnSphere& p) {
  sdp::SdpProblem prob;
  prob.block_sizes = {2 * kBSize, 2 * kCSize};
  const Eigen::VectorXd c = p.vec();
  for (const auto& row : sys.rows) {
    sdp::Constraint con;
    con.coeffs = embedded_pair(functional_matrix(kBSize, row.b_coeffs), functional_matrix(kCSize, row.c_coeffs));
    con.rhs = row.rhs_constant + row.rhs_linear.dot(c);
    prob.constraints.push_back(std::move(con));
  }
  return prob;
}

sdp::SdpProblem nonneg_cubic_system(const CubicOnSphere& p) { return system_to_sdp(theorem_nonneg_system(), p); }

sdp::SdpProblem unit_ball_system(const CubicOnSphere& p) {
  if (!p.is_homogeneous_cubic()) throw std::invalid_argument("unit_ball_system: expected a homogeneous cubic");
  return system_to_sdp(theorem_unit_ball_system(), p);
}

double system_residual(const ConeSystem& sys, const NonnegCertificate& cert, const CubicOnSphere& p) {
  const Eigen::VectorXd b = to_coords(cert.b);
  const Eigen::VectorXd c = to_coords(cert.c);
  double worst = 0.0;
  for (const auto& row : sys.rows) {
    const double lhs = row.b_coeffs.dot(b) + row.c_coeffs.dot(c);
    const double rhs = row.rhs_constant + row.rhs_linear.dot(p.vec());
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

FeasibilityOutcome solve_feasibility(const ConeSystem& sys, const CubicOnSphere& p, const sdp::SolverOptions& opts) {
  FeasibilityOutcome out;
  const sdp::SdpProblem prob = system_to_sdp(sys, p);
  out.solution = sdp::solve(prob, opts);
  out.status = out.solution.status;
  if (out.status == sdp::SolveStatus::kOptimal) {
    out.certificate = NonnegCertificate{hermitian_part(out.solution.primal[0]), hermitian_part(out.solution.primal[1])};
  } else if (out.status == sdp::SolveStatus::kPrimalInfeasible) {
    HermitianMatrix a(kBSize);
    for (size_t i = 0; i < sys.rows.size(); ++i) {
      a += functional_matrix(kBSize, sys.rows[i].b_coeffs) * out.solution.dual_ray(static_cast<Eigen::Index>(i));
    }
    out.separator = a;
  }
  return out;
}

ShiftResult max_shift(const HermitianMatrix& h0, const HermitianMatrix& dir, const sdp::SolverOptions& opts) {
  const int n = h0.size();
  if (n < 2 || dir.size() != n) throw std::invalid_argument("max_shift: size mismatch");
  const double dnorm2 = inner(dir, dir);
  if (dnorm2 == 0.0) throw std::invalid_argument("max_shift: zero direction");

  // Orthonormal basis of the complement of span(dir).
  std::vector<HermitianMatrix> basis;
  const HermitianMatrix u = dir * (1.0 / std::sqrt(dnorm2));
  std::vector<std::pair<double, HermitianMatrix>> candidates;
  for (int m = 0; m < coord_count(n); ++m) {
    HermitianMatrix e = coord_basis(n, m);
    e = e * (1.0 / e.frobenius_norm());
    e -= u * inner(e, u);
    for (const auto& q : basis) e -= q * inner(e, q);
    const double nrm = e.frobenius_norm();
    if (nrm > 1e-8) basis.push_back(e * (1.0 / nrm));
  }
  if (static_cast<int>(basis.size()) != coord_count(n) - 1) {
    throw std::logic_error("max_shift: failed to build complement basis");
  }

  const HermitianMatrix a0 = dir * (1.0 / dnorm2);
  ShiftResult res;
  auto& prob = res.problem;
  prob.block_sizes = {2 * n, 2 * (2 * (n - 1))};
  prob.sense = sdp::Sense::kMaximize;
  prob.objective = embedded_pair(a0, gamma_map(a0));
  for (const auto& e : basis) {
    prob.constraints.push_back(sdp::Constraint{embedded_pair(e, gamma_map(e)), inner(e, h0)});
  }

  res.solution = sdp::solve(prob, opts);
  if (res.solution.status != sdp::SolveStatus::kOptimal) {
    throw SolverFailure("max_shift: solver returned " + sdp::to_string(res.solution.status));
  }

  HermitianMatrix b = hermitian_part(res.solution.primal[0]);
  const HermitianMatrix c = hermitian_part(res.solution.primal[1]);
  const HermitianMatrix k = b + gamma_adjoint(c);
  res.value = inner(a0, k - h0);
  // Fold the remaining equation residual into B.
  b += (h0 + dir * res.value) - k;
  res.certificate = NonnegCertificate{b, c};

  HermitianMatrix moment = -a0;
  for (size_t i = 0; i < basis.size(); ++i) moment += basis[i] * res.solution.dual(static_cast<Eigen::Index>(i));
  res.moment = moment;
  return res;
}

ConeMembershipResult in_cone_Cd(const HermitianMatrix& a, int d) {
  if (d < 1 || a.size() != d + 1) throw std::invalid_argument("in_cone_Cd: matrix size must be d + 1");
  ConeMembershipResult res;
  res.relaxation_only = d > 3;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ea(a.matrix());
  const HermitianMatrix g = gamma_map(a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eg(g.matrix());
  if (ea.info() != Eigen::Success || eg.info() != Eigen::Success) {
    throw NumericalFailure("in_cone_Cd: eigenvalue iteration failed");
  }
  const double la = ea.eigenvalues()(0);
  const double lg = eg.eigenvalues()(0);
  res.margin = std::min(la, lg);
  const double eps = 1e-8 * (1.0 + std::max(a.frobenius_norm(), g.frobenius_norm()));
  if (res.margin >= -eps) {
    res.verdict = Verdict::kInside;
    return res;
  }
  res.verdict = Verdict::kOutside;
  // Separator in the dual cone from the offending eigenvector.
  if (la <= lg) {
    const Eigen::VectorXcd v = ea.eigenvectors().col(0);
    res.separator = HermitianMatrix(Eigen::MatrixXcd(v * v.adjoint()));
  } else {
    const Eigen::VectorXcd w = eg.eigenvectors().col(0);
    res.separator = gamma_adjoint(HermitianMatrix(Eigen::MatrixXcd(w * w.adjoint())));
  }
  return res;
}

ConeMembershipResult in_dual_cone(const HermitianMatrix& h, int d, const sdp::SolverOptions& opts) {
  if (d < 1 || h.size() != d + 1) throw std::invalid_argument("in_dual_cone: matrix size must be d + 1");
  const HermitianMatrix h1 = normalizing_matrix(d);
  const ShiftResult shift = max_shift(h, -h1, opts);

  ConeMembershipResult res;
  res.relaxation_only = d > 3;
  res.margin = shift.value;
  if (shift.value < -kBoundaryBand) {
    res.verdict = Verdict::kOutside;
    res.separator = shift.moment;
    return res;
  }
  res.verdict = shift.value > kBoundaryBand ? Verdict::kInside : Verdict::kBoundaryTolerance;
  // H = (B + t H_1) + gamma_adjoint(C).
  res.certificate = NonnegCertificate{shift.certificate.b + h1 * shift.value, shift.certificate.c};
  return res;
}

CertificateReport verify_certificate(const HermitianMatrix& h, const NonnegCertificate& cert,
                                     const VerifyTolerances& tol) {
  CertificateReport rep;
  const int n = h.size();
  if (cert.b.size() != n || cert.c.size() != 2 * (n - 1)) {
    rep.message = "size mismatch: expected B of size " + std::to_string(n) + " and C of size " +
                  std::to_string(2 * (n - 1));
    rep.residual = std::numeric_limits<double>::infinity();
    return rep;
  }
  rep.residual = (h - cert.b - gamma_adjoint(cert.c)).frobenius_norm();
  rep.psd_margin_b = min_eigenvalue(cert.b);
  rep.psd_margin_c = min_eigenvalue(cert.c);
  std::string msg;
  if (rep.residual > tol.residual) msg += "residual " + std::to_string(rep.residual) + " exceeds tolerance; ";
  if (rep.psd_margin_b < -tol.psd) msg += "B has eigenvalue " + std::to_string(rep.psd_margin_b) + "; ";
  if (rep.psd_margin_c < -tol.psd) msg += "C has eigenvalue " + std::to_string(rep.psd_margin_c) + "; ";
  rep.passed = msg.empty();
  rep.message = rep.passed ? "ok" : msg.substr(0, msg.size() - 2);
  return rep;
}

}  // namespace s2cubic
