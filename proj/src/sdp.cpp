#include "s2cubic/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace s2cubic::sdp {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kPrimalInfeasible:
      return "primal_infeasible";
    case SolveStatus::kDualInfeasible:
      return "dual_infeasible";
    case SolveStatus::kNumericalFailure:
      return "numerical_failure";
  }
  return "unknown";
}

namespace {

BlockMatrix zeros_like(const std::vector<int>& sizes) {
  BlockMatrix z;
  z.reserve(sizes.size());
  for (int n : sizes) z.push_back(Eigen::MatrixXd::Zero(n, n));
  return z;
}

BlockMatrix identity_like(const std::vector<int>& sizes) {
  BlockMatrix z;
  z.reserve(sizes.size());
  for (int n : sizes) z.push_back(Eigen::MatrixXd::Identity(n, n));
  return z;
}

void axpy(double a, const BlockMatrix& x, BlockMatrix& y) {
  for (size_t k = 0; k < y.size(); ++k) y[k] += a * x[k];
}

BlockMatrix scaled(const BlockMatrix& x, double a) {
  BlockMatrix r = x;
  for (auto& blk : r) blk *= a;
  return r;
}

double block_norm(const BlockMatrix& x) { return std::sqrt(block_inner(x, x)); }

Eigen::MatrixXd sym(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

// Largest step alpha with x + alpha * dx still PSD; +inf if unbounded.
double max_psd_step(const Eigen::MatrixXd& x, const Eigen::MatrixXd& dx) {
  Eigen::LLT<Eigen::MatrixXd> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  const Eigen::MatrixXd linv_dx = llt.matrixL().solve(dx);
  const Eigen::MatrixXd m = llt.matrixL().solve(linv_dx.transpose()).transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym(m), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  if (lmin >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lmin;
}

bool is_pd(const BlockMatrix& x) {
  for (const auto& blk : x) {
    Eigen::LLT<Eigen::MatrixXd> llt(blk);
    if (llt.info() != Eigen::Success) return false;
  }
  return true;
}

double min_block_eigenvalue(const BlockMatrix& x) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& blk : x) {
    if (blk.rows() == 0) continue;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym(blk), Eigen::EigenvaluesOnly);
    m = std::min(m, es.eigenvalues()(0));
  }
  return m;
}

// Constraint data in internal (minimization) form after removal of
// linearly dependent rows.
struct Reduced {
  std::vector<int> sizes;
  std::vector<BlockMatrix> a;
  Eigen::VectorXd b;
  BlockMatrix c;
  std::vector<int> kept;  // indices into the original constraint list
};

Eigen::VectorXd apply_ops(const std::vector<BlockMatrix>& a, const BlockMatrix& x) {
  Eigen::VectorXd r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r(i) = block_inner(a[i], x);
  return r;
}

BlockMatrix adjoint_ops(const std::vector<BlockMatrix>& a, const Eigen::VectorXd& y,
                    const std::vector<int>& sizes) {
  BlockMatrix r = zeros_like(sizes);
  for (size_t i = 0; i < a.size(); ++i) axpy(y(i), a[i], r);
  return r;
}

Eigen::VectorXd flatten(const BlockMatrix& x) {
  Eigen::Index n = 0;
  for (const auto& blk : x) n += blk.size();
  Eigen::VectorXd v(n);
  Eigen::Index off = 0;
  for (const auto& blk : x) {
    v.segment(off, blk.size()) = Eigen::Map<const Eigen::VectorXd>(blk.data(), blk.size());
    off += blk.size();
  }
  return v;
}

struct Direction {
  BlockMatrix dx, ds;
  Eigen::VectorXd dy;
  double dtau = 0.0, dkappa = 0.0;
};

class HsdeSolver {
 public:
  HsdeSolver(const Reduced& r, const SolverOptions& opts) : r_(r), opts_(opts) {
    m_ = static_cast<int>(r.a.size());
    nu_ = 0;
    for (int n : r.sizes) nu_ += n;
    bnorm_ = r.b.norm();
    cnorm_ = block_norm(r.c);
  }

  SdpSolution run();

 private:
  void compute_residuals();
  void prepare_scaling();
  Direction direction(double sigma, double eta, const BlockMatrix* corr, double corr_tk) const;
  double max_step(const Direction& d) const;

  const Reduced& r_;
  const SolverOptions& opts_;
  int m_ = 0;
  int nu_ = 0;
  double bnorm_ = 0.0, cnorm_ = 0.0;

  BlockMatrix x_, s_;
  Eigen::VectorXd y_;
  double tau_ = 1.0, kappa_ = 1.0;

  // residuals
  Eigen::VectorXd rp_;
  BlockMatrix rd_;
  double rg_ = 0.0;
  double mu_ = 0.0;

  // per-iteration scaling data
  BlockMatrix sinv_;
  // Bordered Newton system in (dy, dtau); eliminating dtau by hand cancels
  // catastrophically near the optimum.
  Eigen::FullPivLU<Eigen::MatrixXd> kkt_;
  BlockMatrix wc_;
  Eigen::VectorXd awc_;
  double cwc_ = 0.0;
};

void HsdeSolver::compute_residuals() {
  rp_ = r_.b * tau_ - apply_ops(r_.a, x_);
  rd_ = scaled(r_.c, tau_);
  axpy(-1.0, adjoint_ops(r_.a, y_, r_.sizes), rd_);
  axpy(-1.0, s_, rd_);
  rg_ = kappa_ + block_inner(r_.c, x_) - r_.b.dot(y_);
  mu_ = (block_inner(x_, s_) + tau_ * kappa_) / (nu_ + 1);
}

void HsdeSolver::prepare_scaling() {
  sinv_.clear();
  for (const auto& blk : s_) {
    Eigen::LLT<Eigen::MatrixXd> llt(blk);
    sinv_.push_back(llt.solve(Eigen::MatrixXd::Identity(blk.rows(), blk.cols())));
  }
  auto w = [&](const BlockMatrix& m) {
    BlockMatrix out(m.size());
    for (size_t k = 0; k < m.size(); ++k) out[k] = x_[k] * m[k] * sinv_[k];
    return out;
  };
  Eigen::MatrixXd schur(m_, m_);
  for (int j = 0; j < m_; ++j) {
    const BlockMatrix t = w(r_.a[j]);
    for (int i = 0; i < m_; ++i) schur(i, j) = block_inner(r_.a[i], t);
  }
  wc_ = w(r_.c);
  for (auto& blk : wc_) blk = sym(blk);
  awc_ = apply_ops(r_.a, wc_);
  cwc_ = block_inner(r_.c, wc_);
  Eigen::MatrixXd k(m_ + 1, m_ + 1);
  k.topLeftCorner(m_, m_) = sym(schur);
  k.topRightCorner(m_, 1) = -(awc_ + r_.b);
  k.bottomLeftCorner(1, m_) = (awc_ - r_.b).transpose();
  k(m_, m_) = -(kappa_ / tau_ + cwc_);
  kkt_.compute(k);
}

Direction HsdeSolver::direction(double sigma, double eta, const BlockMatrix* corr,
                                double corr_tk) const {
  const size_t nb = x_.size();
  BlockMatrix rm(nb), wrd(nb);
  for (size_t k = 0; k < nb; ++k) {
    Eigen::MatrixXd rc = sigma * mu_ * Eigen::MatrixXd::Identity(x_[k].rows(), x_[k].cols()) - x_[k] * s_[k];
    if (corr != nullptr) rc -= (*corr)[k];
    rm[k] = sym(rc * sinv_[k]);
    wrd[k] = sym(x_[k] * rd_[k] * sinv_[k]);
  }
  BlockMatrix rm_minus = rm;
  axpy(-eta, wrd, rm_minus);

  const Eigen::VectorXd g1 = eta * rp_ - apply_ops(r_.a, rm_minus);
  const double comp_tk = sigma * mu_ - tau_ * kappa_ - corr_tk;
  const double g2 = -eta * rg_ - comp_tk / tau_ - block_inner(r_.c, rm_minus);

  Direction d;
  Eigen::VectorXd rhs(m_ + 1);
  rhs.head(m_) = g1;
  rhs(m_) = g2;
  const Eigen::VectorXd sol = kkt_.solve(rhs);
  d.dy = sol.head(m_);
  d.dtau = sol(m_);
  d.ds = scaled(r_.c, d.dtau);
  axpy(-1.0, adjoint_ops(r_.a, d.dy, r_.sizes), d.ds);
  axpy(eta, rd_, d.ds);
  d.dx.resize(nb);
  for (size_t k = 0; k < nb; ++k) d.dx[k] = rm[k] - sym(x_[k] * d.ds[k] * sinv_[k]);
  d.dkappa = (comp_tk - kappa_ * d.dtau) / tau_;
  return d;
}

double HsdeSolver::max_step(const Direction& d) const {
  double a = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < x_.size(); ++k) {
    a = std::min(a, max_psd_step(x_[k], d.dx[k]));
    a = std::min(a, max_psd_step(s_[k], d.ds[k]));
  }
  if (d.dtau < 0) a = std::min(a, -tau_ / d.dtau);
  if (d.dkappa < 0) a = std::min(a, -kappa_ / d.dkappa);
  return a;
}

SdpSolution HsdeSolver::run() {
  x_ = identity_like(r_.sizes);
  s_ = identity_like(r_.sizes);
  y_ = Eigen::VectorXd::Zero(m_);
  tau_ = 1.0;
  kappa_ = 1.0;

  SdpSolution sol;
  sol.status = SolveStatus::kNumericalFailure;
  double last_step = 1.0;

  for (int iter = 0; iter <= opts_.max_iter; ++iter) {
    compute_residuals();
    sol.iterations = iter;

    const double pres = rp_.norm() / tau_ / (1.0 + bnorm_);
    const double dres = block_norm(rd_) / tau_ / (1.0 + cnorm_);
    const double pobj = block_inner(r_.c, x_) / tau_;
    const double dobj = r_.b.dot(y_) / tau_;
    const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

    if (opts_.on_iterate) {
      opts_.on_iterate(IterateInfo{iter, mu_, tau_, kappa_, pres, dres, gap, last_step});
    }
    if (!std::isfinite(mu_) || !std::isfinite(tau_)) break;

    if (pres <= opts_.tol_feas && dres <= opts_.tol_feas && gap <= opts_.tol_gap) {
      sol.status = SolveStatus::kOptimal;
      sol.primal = scaled(x_, 1.0 / tau_);
      sol.dual = y_ / tau_;
      sol.dual_slack = scaled(s_, 1.0 / tau_);
      return sol;
    }

    const double by = r_.b.dot(y_);
    if (by > 0) {
      BlockMatrix aty_s = adjoint_ops(r_.a, y_, r_.sizes);
      axpy(1.0, s_, aty_s);
      if (block_norm(aty_s) / by <= opts_.tol_feas) {
        sol.status = SolveStatus::kPrimalInfeasible;
        sol.dual_ray = -y_ / by;
        return sol;
      }
    }
    const double cx = block_inner(r_.c, x_);
    if (cx < 0) {
      if (apply_ops(r_.a, x_).norm() / (-cx) <= opts_.tol_feas) {
        sol.status = SolveStatus::kDualInfeasible;
        sol.primal_ray = scaled(x_, -1.0 / cx);
        return sol;
      }
    }
    if (iter == opts_.max_iter) break;

    prepare_scaling();

    // Predictor.
    const Direction aff = direction(0.0, 1.0, nullptr, 0.0);
    const double a_aff = std::min(1.0, max_step(aff));
    double mu_aff = tau_ * kappa_;
    {
      BlockMatrix xa = x_, sa = s_;
      axpy(a_aff, aff.dx, xa);
      axpy(a_aff, aff.ds, sa);
      mu_aff = (block_inner(xa, sa) + (tau_ + a_aff * aff.dtau) * (kappa_ + a_aff * aff.dkappa)) / (nu_ + 1);
    }
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu_, 3.0), 0.0, 1.0);

    // Corrector.
    BlockMatrix corr(x_.size());
    for (size_t k = 0; k < x_.size(); ++k) corr[k] = aff.dx[k] * aff.ds[k];
    const Direction d = direction(sigma, 1.0 - sigma, &corr, aff.dtau * aff.dkappa);

    double alpha = std::min(1.0, 0.99 * max_step(d));
    bool accepted = false;
    for (int trial = 0; trial < 30 && alpha > 1e-14; ++trial) {
      BlockMatrix xn = x_, sn = s_;
      axpy(alpha, d.dx, xn);
      axpy(alpha, d.ds, sn);
      const double tn = tau_ + alpha * d.dtau;
      const double kn = kappa_ + alpha * d.dkappa;
      if (tn > 0 && kn > 0 && is_pd(xn) && is_pd(sn)) {
        for (auto& blk : xn) blk = sym(blk);
        for (auto& blk : sn) blk = sym(blk);
        x_ = std::move(xn);
        s_ = std::move(sn);
        y_ += alpha * d.dy;
        tau_ = tn;
        kappa_ = kn;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
    last_step = alpha;

    // Keep the embedding scaled: the iterates are homogeneous in (x,y,s,tau,kappa).
    const double scale = std::max(tau_, kappa_);
    if (scale > 1e6 || scale < 1e-6) {
      for (auto& blk : x_) blk /= scale;
      for (auto& blk : s_) blk /= scale;
      y_ /= scale;
      tau_ /= scale;
      kappa_ /= scale;
    }
  }

  sol.primal = scaled(x_, 1.0 / tau_);
  sol.dual = y_ / tau_;
  sol.dual_slack = scaled(s_, 1.0 / tau_);
  return sol;
}

}  // namespace

double block_inner(const BlockMatrix& u, const BlockMatrix& v) {
  if (u.size() != v.size()) throw std::invalid_argument("block_inner: block count mismatch");
  double s = 0.0;
  for (size_t k = 0; k < u.size(); ++k) s += u[k].cwiseProduct(v[k]).sum();
  return s;
}

BlockMatrix adjoint_apply(const SdpProblem& prob, const Eigen::VectorXd& y) {
  BlockMatrix r = zeros_like(prob.block_sizes);
  for (int i = 0; i < prob.num_constraints(); ++i) axpy(y(i), prob.constraints[i].coeffs, r);
  return r;
}

Eigen::VectorXd constraint_apply(const SdpProblem& prob, const BlockMatrix& x) {
  Eigen::VectorXd r(prob.num_constraints());
  for (int i = 0; i < prob.num_constraints(); ++i) r(i) = block_inner(prob.constraints[i].coeffs, x);
  return r;
}

void SdpProblem::validate() const {
  long total = 0;
  for (int n : block_sizes) {
    if (n <= 0) throw std::invalid_argument("SdpProblem: block sizes must be positive");
    total += static_cast<long>(n) * (n + 1) / 2;
  }
  if (total > 10000) throw std::invalid_argument("SdpProblem: more than 10^4 real variables");
  auto check = [&](const BlockMatrix& m, const char* what) {
    if (m.size() != block_sizes.size()) {
      throw std::invalid_argument(std::string("SdpProblem: wrong block count in ") + what);
    }
    for (size_t k = 0; k < m.size(); ++k) {
      if (m[k].rows() != block_sizes[k] || m[k].cols() != block_sizes[k]) {
        throw std::invalid_argument(std::string("SdpProblem: wrong block shape in ") + what);
      }
      if ((m[k] - m[k].transpose()).norm() > 1e-12 * (1.0 + m[k].norm())) {
        throw std::invalid_argument(std::string("SdpProblem: non-symmetric block in ") + what);
      }
    }
  };
  if (!objective.empty()) check(objective, "objective");
  for (const auto& c : constraints) check(c.coeffs, "constraint");
}

SdpSolution solve(const SdpProblem& prob, const SolverOptions& opts) {
  prob.validate();
  if (opts.tol_gap <= 0 || opts.tol_feas <= 0) throw std::invalid_argument("solve: tolerances must be positive");
  const int m = prob.num_constraints();
  const double sense = prob.sense == Sense::kMinimize ? 1.0 : -1.0;
  const BlockMatrix c_user = prob.objective.empty() ? zeros_like(prob.block_sizes) : prob.objective;

  Eigen::VectorXd b(m);
  for (int i = 0; i < m; ++i) b(i) = prob.constraints[i].rhs;

  // Drop linearly dependent rows (QR with column pivoting on A^T).
  Reduced red;
  red.sizes = prob.block_sizes;
  red.c = scaled(c_user, sense);
  std::vector<int> dependent;
  if (m > 0) {
    Eigen::MatrixXd at(flatten(prob.constraints[0].coeffs).size(), m);
    for (int i = 0; i < m; ++i) {
      Eigen::VectorXd row = flatten(prob.constraints[i].coeffs);
      const double nrm = row.norm();
      at.col(i) = nrm > 0 ? Eigen::VectorXd(row / nrm) : row;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(at);
    qr.setThreshold(1e-12);
    const int rank = static_cast<int>(qr.rank());
    std::vector<bool> keep(m, false);
    for (int i = 0; i < rank; ++i) keep[qr.colsPermutation().indices()(i)] = true;
    for (int i = 0; i < m; ++i) (keep[i] ? red.kept : dependent).push_back(i);
  }
  for (int i : red.kept) red.a.push_back(prob.constraints[i].coeffs);
  red.b.resize(static_cast<Eigen::Index>(red.kept.size()));
  for (size_t i = 0; i < red.kept.size(); ++i) red.b(static_cast<Eigen::Index>(i)) = b(red.kept[i]);

  // Dependent rows must be consistent with the kept ones; otherwise the
  // combination itself is a Farkas ray.
  if (!dependent.empty()) {
    Eigen::MatrixXd kept_t(flatten(prob.constraints[0].coeffs).size(), static_cast<Eigen::Index>(red.kept.size()));
    for (size_t i = 0; i < red.kept.size(); ++i) kept_t.col(static_cast<Eigen::Index>(i)) = flatten(prob.constraints[red.kept[i]].coeffs);
    const auto solver = kept_t.colPivHouseholderQr();
    for (int j : dependent) {
      const Eigen::VectorXd row = flatten(prob.constraints[j].coeffs);
      const Eigen::VectorXd alpha = red.kept.empty() ? Eigen::VectorXd() : Eigen::VectorXd(solver.solve(row));
      const double implied = red.kept.empty() ? 0.0 : alpha.dot(red.b);
      const double mismatch = b(j) - implied;
      if (std::abs(mismatch) > opts.tol_feas * (1.0 + b.norm())) {
        SdpSolution sol;
        sol.status = SolveStatus::kPrimalInfeasible;
        sol.dual_ray = Eigen::VectorXd::Zero(m);
        sol.dual_ray(j) = 1.0;
        for (size_t i = 0; i < red.kept.size(); ++i) sol.dual_ray(red.kept[i]) = -alpha(static_cast<Eigen::Index>(i));
        sol.dual_ray /= -mismatch;  // b^T ray = -1
        return sol;
      }
    }
  }

  HsdeSolver solver(red, opts);
  SdpSolution internal = solver.run();

  SdpSolution sol;
  sol.status = internal.status;
  sol.iterations = internal.iterations;
  sol.primal = internal.primal;
  sol.primal_ray = internal.primal_ray;
  sol.dual = Eigen::VectorXd::Zero(m);
  for (size_t i = 0; i < red.kept.size() && internal.dual.size() > 0; ++i) {
    sol.dual(red.kept[i]) = sense * internal.dual(static_cast<Eigen::Index>(i));
  }
  if (internal.dual_ray.size() > 0) {
    sol.dual_ray = Eigen::VectorXd::Zero(m);
    for (size_t i = 0; i < red.kept.size(); ++i) sol.dual_ray(red.kept[i]) = internal.dual_ray(static_cast<Eigen::Index>(i));
  }
  sol.dual_slack = internal.dual_slack;
  if (!sol.primal.empty() && !sol.dual_slack.empty()) {
    sol.primal_objective = block_inner(c_user, sol.primal);
    sol.dual_objective = b.dot(sol.dual);
    sol.gap = std::abs(sol.primal_objective - sol.dual_objective) /
              (1.0 + std::abs(sol.primal_objective) + std::abs(sol.dual_objective));
    sol.primal_infeasibility = (constraint_apply(prob, sol.primal) - b).norm() / (1.0 + b.norm());
    BlockMatrix r = scaled(c_user, sense);
    axpy(-sense, adjoint_apply(prob, sol.dual), r);
    axpy(-1.0, sol.dual_slack, r);
    sol.dual_infeasibility = block_norm(r) / (1.0 + block_norm(c_user));
  }
  return sol;
}

KktReport check_kkt(const SdpProblem& prob, const SdpSolution& sol, double tol) {
  KktReport rep;
  const int m = prob.num_constraints();
  if (sol.primal.size() != prob.block_sizes.size() || sol.dual_slack.size() != prob.block_sizes.size() ||
      sol.dual.size() != m) {
    return rep;
  }
  const double sense = prob.sense == Sense::kMinimize ? 1.0 : -1.0;
  const BlockMatrix c = prob.objective.empty() ? zeros_like(prob.block_sizes) : prob.objective;
  Eigen::VectorXd b(m);
  for (int i = 0; i < m; ++i) b(i) = prob.constraints[i].rhs;

  rep.primal_residual = (constraint_apply(prob, sol.primal) - b).norm() / (1.0 + b.norm());
  BlockMatrix r = scaled(c, sense);
  axpy(-sense, adjoint_apply(prob, sol.dual), r);
  axpy(-1.0, sol.dual_slack, r);
  rep.dual_residual = block_norm(r) / (1.0 + block_norm(c));
  const double pobj = block_inner(c, sol.primal);
  const double dobj = b.dot(sol.dual);
  rep.complementarity = std::abs(block_inner(sol.primal, sol.dual_slack)) / (1.0 + std::abs(pobj));
  rep.gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
  rep.min_eig_primal = min_block_eigenvalue(sol.primal);
  rep.min_eig_slack = min_block_eigenvalue(sol.dual_slack);

  const double bound = 10.0 * tol;
  rep.primal_ok = rep.primal_residual <= bound;
  rep.dual_ok = rep.dual_residual <= bound;
  rep.complementarity_ok = rep.complementarity <= bound && rep.gap <= bound;
  rep.cones_ok = rep.min_eig_primal >= -bound * (1.0 + block_norm(sol.primal)) &&
                 rep.min_eig_slack >= -bound * (1.0 + block_norm(sol.dual_slack));
  rep.passed = rep.primal_ok && rep.dual_ok && rep.complementarity_ok && rep.cones_ok;
  return rep;
}

}  // namespace s2cubic::sdp
