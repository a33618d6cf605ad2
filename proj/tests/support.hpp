#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "s2cubic/hermitian.hpp"
#include "s2cubic/optimize.hpp"
#include "s2cubic/sdp.hpp"
#include "s2cubic/sphere_moment.hpp"

namespace s2cubic::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

inline HermitianMatrix random_hermitian(Rng& rng, int n) {
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = Complex(rng.normal(), rng.normal());
  }
  return HermitianMatrix(Eigen::MatrixXcd((m + m.adjoint()) / 2.0));
}

inline HermitianMatrix random_psd(Rng& rng, int n, int rank) {
  Eigen::MatrixXcd f(n, rank);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < rank; ++j) f(i, j) = Complex(rng.normal(), rng.normal());
  }
  return HermitianMatrix(Eigen::MatrixXcd(f * f.adjoint()));
}

inline CubicOnSphere random_cubic(Rng& rng, bool homogeneous = false) {
  CubicOnSphere p;
  const auto& basis = cubic_basis();
  for (int i = 0; i < kCubicDim; ++i) {
    const double v = rng.uniform();
    if (!homogeneous || basis[i].degree() == 3) p[i] = v;
  }
  return p;
}

inline SpherePoint random_sphere_point(Rng& rng) {
  return SpherePoint(Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal()));
}

inline Complex random_complex(Rng& rng, double scale = 2.0) {
  return Complex(scale * rng.uniform(), scale * rng.uniform());
}

/// Chordal distance on the Riemann sphere; works with the point at infinity.
inline double chordal(const RiemannPoint& a, const RiemannPoint& b) {
  return (to_sphere(a).vec() - to_sphere(b).vec()).norm() / 2.0;
}

inline double riemann_distance(const RiemannPoint& a, const RiemannPoint& b) {
  if (a.is_infinite() || b.is_infinite()) {
    if (a.is_infinite() && b.is_infinite()) return 0.0;
    return std::numeric_limits<double>::infinity();
  }
  return std::abs(a.value() - b.value());
}

/// Greedy nearest-neighbour matching of recovered atoms to the true ones.
/// Returns the largest point distance and the largest weight error.
inline std::pair<double, double> match_atoms(const std::vector<Atom>& truth, const std::vector<Atom>& got) {
  if (truth.size() != got.size()) return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  std::vector<bool> used(got.size(), false);
  double dz = 0.0, dw = 0.0;
  for (const auto& t : truth) {
    int best = -1;
    double bd = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < got.size(); ++k) {
      if (used[k]) continue;
      const double c = chordal(t.point, got[k].point);
      if (c < bd) {
        bd = c;
        best = static_cast<int>(k);
      }
    }
    used[best] = true;
    dz = std::max(dz, riemann_distance(t.point, got[best].point));
    dw = std::max(dw, std::abs(t.weight - got[best].weight));
  }
  return {dz, dw};
}

/// min c^T x s.t. A x = b, x >= 0 posed as an SDP with one diagonal block.
struct LpInstance {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

/// Strictly feasible (b = A x0, x0 > 0) and bounded (c > 0).
inline LpInstance random_lp(Rng& rng, int n, int m) {
  LpInstance lp;
  lp.a.resize(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) lp.a(i, j) = rng.uniform();
  }
  Eigen::VectorXd x0(n);
  for (int j = 0; j < n; ++j) x0(j) = rng.uniform(0.5, 1.5);
  lp.b = lp.a * x0;
  lp.c.resize(n);
  for (int j = 0; j < n; ++j) lp.c(j) = rng.uniform(0.1, 2.0);
  return lp;
}

inline sdp::SdpProblem lp_to_sdp(const LpInstance& lp) {
  const int n = static_cast<int>(lp.c.size());
  sdp::SdpProblem prob;
  prob.block_sizes = {n};
  prob.objective = {Eigen::MatrixXd(lp.c.asDiagonal())};
  for (int i = 0; i < lp.a.rows(); ++i) {
    prob.constraints.push_back(sdp::Constraint{{Eigen::MatrixXd(lp.a.row(i).transpose().asDiagonal())}, lp.b(i)});
  }
  return prob;
}

/// Optimum by enumerating every basis (vertex) of the feasible polyhedron.
inline double lp_vertex_optimum(const LpInstance& lp) {
  const int n = static_cast<int>(lp.c.size());
  const int m = static_cast<int>(lp.a.rows());
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> sel(n, 0);
  std::fill(sel.begin(), sel.begin() + m, 1);
  std::sort(sel.begin(), sel.end());
  do {
    std::vector<int> cols;
    for (int j = 0; j < n; ++j) {
      if (sel[j]) cols.push_back(j);
    }
    Eigen::MatrixXd ab(m, m);
    for (int k = 0; k < m; ++k) ab.col(k) = lp.a.col(cols[k]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(ab);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd xb = lu.solve(lp.b);
    if (xb.minCoeff() < -1e-12) continue;
    double v = 0.0;
    for (int k = 0; k < m; ++k) v += lp.c(cols[k]) * xb(k);
    best = std::min(best, v);
  } while (std::next_permutation(sel.begin(), sel.end()));
  return best;
}

}  // namespace s2cubic::testing
