#include "s2cubic/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace s2cubic {

HermitianMatrix AtomMeasure::assemble(int d) const {
  HermitianMatrix a(d + 1);
  for (const auto& at : atoms) a += moment_matrix(at.point, d) * at.weight;
  return a;
}

double AtomMeasure::total_weight() const {
  double s = 0.0;
  for (const auto& at : atoms) s += at.weight;
  return s;
}

namespace {

// Moebius map z -> (a z + b) / (c z + e) for a unitary g = [[a, b], [c, e]].
struct Rotation {
  Complex a, b, c, e;

  static Rotation from_angles(double theta, double phi) {
    const Complex ph = std::polar(1.0, phi);
    return {Complex(std::cos(theta)), std::sin(theta) * ph, -std::sin(theta) * std::conj(ph),
            Complex(std::cos(theta))};
  }

  Rotation inverse() const { return {std::conj(a), std::conj(c), std::conj(b), std::conj(e)}; }

  RiemannPoint apply(const RiemannPoint& zp) const {
    if (zp.is_infinite()) {
      if (std::abs(c) == 0.0) return RiemannPoint::Infinity();
      return RiemannPoint(a / c);
    }
    const Complex z = zp.value();
    const Complex den = c * z + e;
    const Complex num = a * z + b;
    if (std::abs(den) <= std::abs(num) / kInfinityModulus) return RiemannPoint::Infinity();
    return RiemannPoint(num / den);
  }

  // T with v(g z) (c z + e)^d = T v(z); then T Z(z) T^* = Z(g z).
  Eigen::MatrixXcd sym_power(int d) const {
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(d + 1, d + 1);
    for (int k = 0; k <= d; ++k) {
      // Coefficients of (a z + b)^k (c z + e)^(d-k) in ascending powers.
      std::vector<Complex> poly{Complex(1.0)};
      auto mul = [&poly](Complex hi, Complex lo) {
        std::vector<Complex> out(poly.size() + 1, Complex(0.0));
        for (size_t j = 0; j < poly.size(); ++j) {
          out[j] += lo * poly[j];
          out[j + 1] += hi * poly[j];
        }
        poly = std::move(out);
      };
      for (int i = 0; i < k; ++i) mul(a, b);
      for (int i = k; i < d; ++i) mul(c, e);
      for (int j = 0; j <= d; ++j) t(k, j) = poly[j];
    }
    return t;
  }
};

const std::vector<Rotation>& rotations() {
  static const std::vector<Rotation> rs = [] {
    std::vector<Rotation> v{Rotation::from_angles(0.0, 0.0)};
    for (double theta : {0.35, 0.8, 1.2}) {
      for (double phi : {0.4, 2.1}) v.push_back(Rotation::from_angles(theta, phi));
    }
    return v;
  }();
  return rs;
}

Eigen::VectorXd vectorize(const HermitianMatrix& m) {
  const int n = m.size();
  Eigen::VectorXd v(2 * n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      v(2 * (i * n + j)) = m(i, j).real();
      v(2 * (i * n + j) + 1) = m(i, j).imag();
    }
  }
  return v;
}

// Nonnegative least squares over few columns by enumerating active sets.
Eigen::VectorXd small_nnls(const Eigen::MatrixXd& m, const Eigen::VectorXd& target) {
  const int k = static_cast<int>(m.cols());
  Eigen::VectorXd best = Eigen::VectorXd::Zero(k);
  double best_res = target.norm();
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < k; ++i) {
      if (mask & (1u << i)) idx.push_back(i);
    }
    Eigen::MatrixXd sub(m.rows(), static_cast<Eigen::Index>(idx.size()));
    for (size_t i = 0; i < idx.size(); ++i) sub.col(static_cast<Eigen::Index>(i)) = m.col(idx[i]);
    const Eigen::VectorXd w = sub.colPivHouseholderQr().solve(target);
    if ((w.array() < 0.0).any()) continue;
    const double res = (sub * w - target).norm();
    if (res < best_res) {
      best_res = res;
      best.setZero();
      for (size_t i = 0; i < idx.size(); ++i) best(idx[i]) = w(static_cast<Eigen::Index>(i));
    }
  }
  return best;
}

double chordal(const SpherePoint& x, const SpherePoint& y) { return (x.vec() - y.vec()).norm(); }

void add_unique(std::vector<SpherePoint>& pts, const SpherePoint& x) {
  for (const auto& q : pts) {
    if (chordal(q, x) < 1e-5) return;
  }
  pts.push_back(x);
}

}  // namespace

AtomMeasure extract_atoms(const HermitianMatrix& a, double rank_tol) {
  const int n = a.size();
  const int d = n - 1;
  if (d < 1) throw std::invalid_argument("extract_atoms: matrix too small");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.matrix());
  if (es.info() != Eigen::Success) throw NumericalFailure("extract_atoms: eigensolver failed");
  const Eigen::VectorXd lam = es.eigenvalues();
  const double lmax = lam(n - 1);
  if (!(lmax > 0.0)) throw ExtractionFailure("extract_atoms: matrix has no positive eigenvalue");
  int r = 0;
  for (int i = 0; i < n; ++i) {
    if (lam(i) > rank_tol * lmax) ++r;
  }
  if (r > d) {
    throw ExtractionFailure("extract_atoms: numerical rank " + std::to_string(r) + " exceeds " +
                            std::to_string(d));
  }

  // Range basis for each rotated copy; keep the best-conditioned shift.
  const Eigen::MatrixXcd u0 =
      es.eigenvectors().rightCols(r) * lam.tail(r).cwiseSqrt().cast<Complex>().asDiagonal();
  double best_cond = -1.0;
  const Rotation* best_rot = nullptr;
  Eigen::MatrixXcd best_u;
  for (const auto& rot : rotations()) {
    const Eigen::MatrixXcd u = rot.sym_power(d) * u0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(u.topRows(d));
    const double smax = Eigen::JacobiSVD<Eigen::MatrixXcd>(u).singularValues()(0);
    const double cond = svd.singularValues()(r - 1) / smax;
    if (cond > best_cond) {
      best_cond = cond;
      best_rot = &rot;
      best_u = u;
    }
    if (cond > 1e-2) break;
  }

  const Eigen::MatrixXcd up = best_u.topRows(d);
  const Eigen::MatrixXcd down = best_u.bottomRows(d);
  const Eigen::MatrixXcd pencil = up.completeOrthogonalDecomposition().solve(down);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(pencil);
  if (ces.info() != Eigen::Success) throw NumericalFailure("extract_atoms: pencil eigensolver failed");

  const Rotation back = best_rot->inverse();
  std::vector<RiemannPoint> pts;
  for (int k = 0; k < r; ++k) pts.push_back(back.apply(RiemannPoint(ces.eigenvalues()(k))));

  Eigen::MatrixXd cols(2 * n * n, r);
  for (int k = 0; k < r; ++k) cols.col(k) = vectorize(moment_matrix(pts[static_cast<size_t>(k)], d));
  const Eigen::VectorXd w = small_nnls(cols, vectorize(a));

  AtomMeasure out;
  for (int k = 0; k < r; ++k) {
    if (w(k) >= 1e-9) out.atoms.push_back(Atom{w(k), pts[static_cast<size_t>(k)]});
  }
  out.residual = (a - out.assemble(d)).frobenius_norm();
  if (out.atoms.empty() || out.residual > 1e-6 * a.frobenius_norm()) {
    throw ExtractionFailure("extract_atoms: reconstruction residual " + std::to_string(out.residual) +
                            " exceeds tolerance");
  }
  return out;
}

std::vector<Eigen::Vector3d> fibonacci_sphere(int n) {
  std::vector<Eigen::Vector3d> pts;
  pts.reserve(static_cast<size_t>(n));
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double y = 1.0 - 2.0 * (i + 0.5) / n;
    const double rad = std::sqrt(std::max(0.0, 1.0 - y * y));
    const double phi = golden * i;
    pts.emplace_back(y, rad * std::cos(phi), rad * std::sin(phi));
  }
  return pts;
}

SpherePoint polish_minimum(const CubicOnSphere& p, const SpherePoint& start, double grad_tol, int max_iter) {
  Eigen::Vector3d x = start.vec();
  double f = p.evaluate(x);
  auto tangent_grad = [&p](const Eigen::Vector3d& y) {
    const Eigen::Vector3d g = p.gradient(y);
    return Eigen::Vector3d(g - g.dot(y) * y);
  };
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::Vector3d g = tangent_grad(x);
    const double gn = g.norm();
    if (gn <= grad_tol) break;

    // Riemannian Newton step when the projected Hessian is positive definite.
    Eigen::Matrix<double, 3, 2> t;
    const Eigen::Vector3d seed = std::abs(x(0)) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
    t.col(0) = (seed - seed.dot(x) * x).normalized();
    t.col(1) = x.cross(t.col(0));
    const Eigen::Matrix2d hr =
        t.transpose() * (p.hessian(x) - p.gradient(x).dot(x) * Eigen::Matrix3d::Identity()) * t;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(hr);
    const bool newton = es.eigenvalues()(0) > 1e-8 * (1.0 + es.eigenvalues().cwiseAbs().maxCoeff());

    bool moved = false;
    for (int pass = newton ? 0 : 1; pass < 2 && !moved; ++pass) {
      const Eigen::Vector3d dir = pass == 0 ? Eigen::Vector3d(-t * hr.ldlt().solve(t.transpose() * g))
                                            : Eigen::Vector3d(-g);
      const double slope = g.dot(dir);
      for (double step = 1.0; step > 1e-12; step *= 0.5) {
        const Eigen::Vector3d xn = (x + step * dir).normalized();
        const double fn = p.evaluate(xn);
        const bool armijo = fn <= f + 1e-4 * step * slope;
        // Near the floor of double precision f stalls; accept a Newton step
        // that still shrinks the gradient.
        const bool stalled = pass == 0 && fn <= f + 1e-14 * (1.0 + std::abs(f)) && tangent_grad(xn).norm() < gn;
        if (armijo || stalled) {
          x = xn;
          f = fn;
          moved = true;
          break;
        }
      }
    }
    if (!moved) break;
  }
  return SpherePoint(x);
}

OracleResult oracle_minimum(const CubicOnSphere& p, int n_grid, int n_polish) {
  if (n_grid < 1000) throw std::invalid_argument("oracle_minimum: n_grid must be at least 1000");
  if (n_polish < 1) throw std::invalid_argument("oracle_minimum: n_polish must be positive");
  const auto grid = fibonacci_sphere(n_grid);
  std::vector<std::pair<double, int>> vals;
  vals.reserve(grid.size());
  for (int i = 0; i < n_grid; ++i) vals.emplace_back(p.evaluate(grid[static_cast<size_t>(i)]), i);
  const int k = std::min(n_polish, n_grid);
  std::partial_sort(vals.begin(), vals.begin() + k, vals.end());

  OracleResult best{vals[0].first, SpherePoint(grid[static_cast<size_t>(vals[0].second)])};
  for (int i = 0; i < k; ++i) {
    const SpherePoint x = polish_minimum(p, SpherePoint(grid[static_cast<size_t>(vals[static_cast<size_t>(i)].second)]));
    const double v = p.evaluate(x);
    if (v < best.value) best = OracleResult{v, x};
  }
  return best;
}

OptimizationResult minimize_on_sphere(const CubicOnSphere& p, const OptimizeOptions& opts) {
  const HermitianMatrix h = poly_to_h(p);
  const HermitianMatrix h1 = normalizing_matrix(3);
  const ShiftResult shift = max_shift(h, -h1, opts.solver);

  OptimizationResult res;
  res.value = shift.value;
  res.certificate = shift.certificate;
  res.moment = shift.moment;
  res.iterations = shift.solution.iterations;

  auto attains = [&](const SpherePoint& x) { return std::abs(p.evaluate(x) - res.value) <= opts.minimizer_tol; };

  try {
    const AtomMeasure m = extract_atoms(shift.moment, opts.rank_tol);
    for (const auto& at : m.atoms) {
      const SpherePoint x = polish_minimum(p, to_sphere(at.point));
      if (attains(x)) add_unique(res.minimizers, x);
    }
    if (res.minimizers.empty()) res.warning = "extracted atoms do not attain the optimum";
  } catch (const ExtractionFailure& e) {
    res.warning = e.what();
  }

  if (res.minimizers.empty()) {
    res.extraction_failed = true;
    const auto grid = fibonacci_sphere(std::max(opts.oracle_grid, 1000));
    std::vector<std::pair<double, size_t>> vals;
    for (size_t i = 0; i < grid.size(); ++i) vals.emplace_back(p.evaluate(grid[i]), i);
    const size_t k = std::min<size_t>(64, vals.size());
    std::partial_sort(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(k), vals.end());
    for (size_t i = 0; i < k && static_cast<int>(res.minimizers.size()) < opts.max_fallback_points; ++i) {
      const SpherePoint x = polish_minimum(p, SpherePoint(grid[vals[i].second]));
      if (attains(x)) add_unique(res.minimizers, x);
    }
    res.warning += "; minimizers recovered by local search";
  }

  if (opts.run_oracle) {
    const OracleResult o = oracle_minimum(p, std::max(opts.oracle_grid, 1000), opts.oracle_polish);
    res.oracle_run = true;
    res.oracle_value = o.value;
    res.gap_to_oracle = o.value - res.value;
  }
  return res;
}

OptimizationResult maximize_on_sphere(const CubicOnSphere& p, const OptimizeOptions& opts) {
  OptimizationResult res = minimize_on_sphere(-p, opts);
  res.value = -res.value;
  res.oracle_value = -res.oracle_value;
  return res;
}

double scale_to_ball_boundary(const CubicOnSphere& p, const sdp::SolverOptions& opts) {
  if (!p.is_homogeneous_cubic()) throw std::invalid_argument("scale_to_ball_boundary: expected a homogeneous cubic");
  if (p.vec().cwiseAbs().maxCoeff() == 0.0) throw std::invalid_argument("scale_to_ball_boundary: p must be nonzero");
  return max_shift(normalizing_matrix(3), poly_to_h(p), opts).value;
}

ConeMembershipResult in_unit_ball(const CubicOnSphere& p, const sdp::SolverOptions& opts) {
  if (!p.is_homogeneous_cubic()) throw std::invalid_argument("in_unit_ball: expected a homogeneous cubic");
  return in_dual_cone(poly_to_h(CubicOnSphere::one() + p), 3, opts);
}

}  // namespace s2cubic
